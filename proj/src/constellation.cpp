#include "pulsar/constellation.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pulsar {

namespace {

// GPS 24-slot reference geometry (SPS performance standard baseline): RAAN of
// plane A plus 60 degrees per plane, argument of latitude per slot. The real
// constellation deviates; statistics quoted for GPS are insensitive to this.
constexpr double GPS_RAAN_A = 272.847;
constexpr double GPS_SLOT_AOL[6][4] = {
    {268.126, 161.786, 11.676, 41.806},    // A1..A4
    {80.956, 173.336, 309.976, 204.376},   // B1..B4
    {111.876, 11.796, 339.666, 241.556},   // C1..C4
    {135.226, 265.446, 35.156, 167.356},   // D1..D4
    {197.046, 302.596, 66.066, 333.686},   // E1..E4
    {238.886, 345.226, 105.206, 135.346},  // F1..F4
};

ShellSpec make_shell(const std::string& name, int planes, int spp, double phasing_deg,
                     double incl_deg, double alt_km) {
    ShellSpec s;
    s.name = name;
    s.planes = planes;
    s.raan_offset_deg = 360.0 / planes;
    s.sats_per_plane = spp;
    s.anomaly_offset_deg = 360.0 / spp;
    s.interplane_phasing_deg = phasing_deg;
    s.inclination_deg = incl_deg;
    s.altitude_km = alt_km;
    return s;
}

void append_walker_shell(Constellation& c, const ShellSpec& shell, int shell_index,
                         int first_svid, int first_plane, int first_prn, double radius_m) {
    for (int p = 0; p < shell.planes; ++p) {
        for (int s = 0; s < shell.sats_per_plane; ++s) {
            Satellite sat;
            sat.svid = first_svid + p * shell.sats_per_plane + s;
            sat.plane_index = first_plane + p;
            sat.slot_index = s;
            sat.prn_id = first_prn + p;
            sat.shell_index = shell_index;
            sat.orbit_radius = radius_m;
            sat.inclination = deg2rad(shell.inclination_deg);
            sat.raan = deg2rad(p * shell.raan_offset_deg);
            sat.aol_epoch = deg2rad(s * shell.anomaly_offset_deg + p * shell.interplane_phasing_deg);
            c.satellites.push_back(sat);
        }
    }
}

}  // namespace

void ShellSpec::validate() const {
    if (planes <= 0 || sats_per_plane <= 0)
        throw std::invalid_argument("shell " + name + ": counts must be positive");
    if (std::abs(raan_offset_deg * planes - 360.0) > 1e-9)
        throw std::invalid_argument("shell " + name + ": raan_offset * planes != 360");
    if (std::abs(anomaly_offset_deg * sats_per_plane - 360.0) > 1e-9)
        throw std::invalid_argument("shell " + name + ": anomaly_offset * sats_per_plane != 360");
    if (eccentricity != 0.0)
        throw std::invalid_argument("shell " + name + ": only circular orbits supported");
    if (altitude_km <= 0.0)
        throw std::invalid_argument("shell " + name + ": altitude must be positive");
}

OrbitBasis orbit_basis(const Satellite& sat) {
    OrbitBasis b;
    const double co = std::cos(sat.raan), so = std::sin(sat.raan);
    const double ci = std::cos(sat.inclination), si = std::sin(sat.inclination);
    b.p = {co, so, 0.0};
    b.q = {-so * ci, co * ci, si};
    b.radius = sat.orbit_radius;
    b.mean_motion = std::sqrt(MU_EARTH / (sat.orbit_radius * sat.orbit_radius * sat.orbit_radius));
    b.speed = std::sqrt(MU_EARTH / sat.orbit_radius);
    b.aol_epoch = sat.aol_epoch;
    return b;
}

EcefState propagate(const OrbitBasis& b, double t) {
    const double u = b.aol_epoch + b.mean_motion * t;
    const double cu = std::cos(u), su = std::sin(u);
    const Vec3 r_in = b.radius * (cu * b.p + su * b.q);
    const Vec3 v_in = b.speed * (-su * b.p + cu * b.q);

    // Rotate the inertial state by -theta about z (Greenwich aligned at t = 0),
    // then remove the frame-rotation term from the velocity.
    const double theta = OMEGA_EARTH * t;
    const double ct = std::cos(theta), st = std::sin(theta);
    EcefState s;
    s.position = {ct * r_in.x + st * r_in.y, -st * r_in.x + ct * r_in.y, r_in.z};
    const Vec3 v_rot{ct * v_in.x + st * v_in.y, -st * v_in.x + ct * v_in.y, v_in.z};
    s.velocity = v_rot - zcross(OMEGA_EARTH, s.position);
    s.time = t;
    return s;
}

EcefState propagate(const Satellite& sat, double t) { return propagate(orbit_basis(sat), t); }

void propagate_derivatives(const OrbitBasis& b, const EcefState& s, Vec3& accel, Vec3& jerk) {
    // In the rotating frame: a = -mu r / a^3 - 2 w x v - w x (w x r), and one
    // more time derivative for the jerk. |r| is constant on a circular orbit.
    const double gm_over_a3 = b.mean_motion * b.mean_motion;
    const Vec3 wxr = zcross(OMEGA_EARTH, s.position);
    const Vec3 wxv = zcross(OMEGA_EARTH, s.velocity);
    accel = -gm_over_a3 * s.position - 2.0 * wxv - zcross(OMEGA_EARTH, wxr);
    jerk = -gm_over_a3 * s.velocity - 2.0 * zcross(OMEGA_EARTH, accel) - zcross(OMEGA_EARTH, wxv);
}

OrbitalConstants orbital_constants_for_radius(double radius_m) {
    if (radius_m <= MEAN_EARTH_RADIUS)
        throw std::domain_error("orbit radius must exceed the Earth radius");
    OrbitalConstants oc;
    oc.mean_motion = std::sqrt(MU_EARTH / (radius_m * radius_m * radius_m));
    oc.period = 2.0 * PI / oc.mean_motion;
    oc.speed = std::sqrt(MU_EARTH / radius_m);
    return oc;
}

OrbitalConstants orbital_constants(const Satellite& sat) {
    return orbital_constants_for_radius(sat.orbit_radius);
}

double max_ecef_speed(double radius_m, double inclination_rad) {
    // At the equator crossing the inertial velocity and the frame-rotation
    // velocity combine with angle set by the inclination.
    const double v = std::sqrt(MU_EARTH / radius_m);
    const double wa = OMEGA_EARTH * radius_m;
    return std::sqrt(v * v - 2.0 * v * wa * std::cos(inclination_rad) + wa * wa);
}

double max_relative_speed(double radius_m, double inclination_rad, double user_radius_m) {
    // The most velocity-aligned visible line of sight is tangent to the user
    // sphere, at angle acos(R/a) from the horizontal velocity.
    return max_ecef_speed(radius_m, inclination_rad) * user_radius_m / radius_m;
}

double max_carrier_doppler(double radius_m, double inclination_rad, const BandSpec& band,
                           double user_radius_m) {
    return max_relative_speed(radius_m, inclination_rad, user_radius_m) / SPEED_OF_LIGHT *
           band.carrier_hz;
}

bool is_polar(const Satellite& sat) { return sat.inclination > deg2rad(80.0); }

Constellation build_nominal(const std::string& name, AltitudeReference ref) {
    const double r0 = reference_radius(ref);
    Constellation c;
    c.name = name;
    if (name == "pulsar-foc") {
        // 12 planes x 16 at 53 deg plus 6 planes x 11 at 97 deg, 1080 km.
        ShellSpec inclined = make_shell("inclined", 12, 16, 22.5 / 12.0, 53.0, 1080.0);
        ShellSpec polar = make_shell("polar", 6, 11, 360.0 / 11.0 / 6.0, 97.0, 1080.0);
        c.shells = {inclined, polar};
        const double radius = r0 + 1080.0e3;
        append_walker_shell(c, inclined, 0, 1, 1, 1, radius);
        append_walker_shell(c, polar, 1, 193, 13, 13, radius);
    } else if (name == "pulsar-iov") {
        ShellSpec iov = make_shell("iov", 1, 1, 0.0, 97.0, 520.0);
        c.shells = {iov};
        append_walker_shell(c, iov, 0, 1, 1, 1, r0 + 520.0e3);
    } else if (name == "gps-24") {
        ShellSpec gps = make_shell("gps", 6, 4, 0.0, 55.0, 20180.0);
        c.shells = {gps};
        const double radius = r0 + 20180.0e3;
        for (int p = 0; p < 6; ++p) {
            for (int s = 0; s < 4; ++s) {
                Satellite sat;
                sat.svid = p * 4 + s + 1;
                sat.plane_index = p + 1;
                sat.slot_index = s;
                sat.prn_id = sat.svid;  // unique per satellite
                sat.shell_index = 0;
                sat.orbit_radius = radius;
                sat.inclination = deg2rad(55.0);
                sat.raan = deg2rad(GPS_RAAN_A + 60.0 * p);
                sat.aol_epoch = deg2rad(GPS_SLOT_AOL[p][s]);
                c.satellites.push_back(sat);
            }
        }
    } else {
        throw std::invalid_argument("unknown constellation: " + name);
    }
    for (const auto& s : c.shells) s.validate();
    return c;
}

std::string dump_constellation(const Constellation& c) {
    std::ostringstream os;
    os.precision(12);
    os << "name=" << c.name << "\n";
    os << "shells=" << c.shells.size() << "\n";
    for (size_t i = 0; i < c.shells.size(); ++i) {
        const ShellSpec& s = c.shells[i];
        os << "shell." << i << ".name=" << s.name << "\n";
        os << "shell." << i << ".planes=" << s.planes << "\n";
        os << "shell." << i << ".raan_offset_deg=" << s.raan_offset_deg << "\n";
        os << "shell." << i << ".sats_per_plane=" << s.sats_per_plane << "\n";
        os << "shell." << i << ".anomaly_offset_deg=" << s.anomaly_offset_deg << "\n";
        os << "shell." << i << ".interplane_phasing_deg=" << s.interplane_phasing_deg << "\n";
        os << "shell." << i << ".inclination_deg=" << s.inclination_deg << "\n";
        os << "shell." << i << ".altitude_km=" << s.altitude_km << "\n";
        os << "shell." << i << ".eccentricity=" << s.eccentricity << "\n";
    }
    os << "satellites=" << c.satellites.size() << "\n";
    for (size_t i = 0; i < c.satellites.size(); ++i) {
        const Satellite& s = c.satellites[i];
        os << "sat." << i << "=" << s.svid << " " << s.plane_index << " " << s.slot_index << " "
           << s.prn_id << " " << s.shell_index << " " << s.orbit_radius << " "
           << rad2deg(s.inclination) << " " << rad2deg(s.raan) << " " << rad2deg(s.aol_epoch)
           << "\n";
    }
    return os.str();
}

Constellation load_constellation(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("constellation file: missing '=' in: " + line);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto need = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end())
            throw std::invalid_argument("constellation file: missing key " + key);
        return it->second;
    };

    Constellation c;
    c.name = need("name");
    const int nshells = std::stoi(need("shells"));
    for (int i = 0; i < nshells; ++i) {
        const std::string p = "shell." + std::to_string(i) + ".";
        ShellSpec s;
        s.name = need(p + "name");
        s.planes = std::stoi(need(p + "planes"));
        s.raan_offset_deg = std::stod(need(p + "raan_offset_deg"));
        s.sats_per_plane = std::stoi(need(p + "sats_per_plane"));
        s.anomaly_offset_deg = std::stod(need(p + "anomaly_offset_deg"));
        s.interplane_phasing_deg = std::stod(need(p + "interplane_phasing_deg"));
        s.inclination_deg = std::stod(need(p + "inclination_deg"));
        s.altitude_km = std::stod(need(p + "altitude_km"));
        s.eccentricity = std::stod(need(p + "eccentricity"));
        s.validate();
        c.shells.push_back(s);
    }
    const int nsats = std::stoi(need("satellites"));
    for (int i = 0; i < nsats; ++i) {
        std::istringstream row(need("sat." + std::to_string(i)));
        Satellite s;
        double incl_deg = 0.0, raan_deg = 0.0, aol_deg = 0.0;
        if (!(row >> s.svid >> s.plane_index >> s.slot_index >> s.prn_id >> s.shell_index >>
              s.orbit_radius >> incl_deg >> raan_deg >> aol_deg))
            throw std::invalid_argument("constellation file: bad sat row " + std::to_string(i));
        s.inclination = deg2rad(incl_deg);
        s.raan = deg2rad(raan_deg);
        s.aol_epoch = deg2rad(aol_deg);
        c.satellites.push_back(s);
    }
    return c;
}

Constellation load_constellation_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open constellation file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_constellation(ss.str());
}

}  // namespace pulsar
