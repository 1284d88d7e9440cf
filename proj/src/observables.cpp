#include "pulsar/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pulsar {

void Observer::validate() const {
    if (!(latitude_deg >= -90.0 && latitude_deg <= 90.0))
        throw std::invalid_argument("latitude out of [-90, 90]");
    if (!(longitude_deg >= -180.0 && longitude_deg < 180.0))
        throw std::invalid_argument("longitude out of [-180, 180)");
    if (!std::isfinite(height_m)) throw std::invalid_argument("height not finite");
}

Vec3 geodetic_to_ecef(const Observer& obs) {
    const double lat = deg2rad(obs.latitude_deg);
    const double lon = deg2rad(obs.longitude_deg);
    const double sl = std::sin(lat), cl = std::cos(lat);
    const double n = WGS84_A / std::sqrt(1.0 - WGS84_E2 * sl * sl);
    return {(n + obs.height_m) * cl * std::cos(lon), (n + obs.height_m) * cl * std::sin(lon),
            (n * (1.0 - WGS84_E2) + obs.height_m) * sl};
}

ObserverSite make_site(const Observer& obs) {
    obs.validate();
    ObserverSite s;
    s.geo = obs;
    s.ecef = geodetic_to_ecef(obs);
    const double lat = deg2rad(obs.latitude_deg);
    const double lon = deg2rad(obs.longitude_deg);
    const double sl = std::sin(lat), cl = std::cos(lat);
    const double so = std::sin(lon), co = std::cos(lon);
    s.east = {-so, co, 0.0};
    s.north = {-sl * co, -sl * so, cl};
    s.up = {cl * co, cl * so, sl};
    return s;
}

Observable observe(const ObserverSite& site, const EcefState& state, const Vec3& accel,
                   const Vec3& jerk) {
    Observable o;
    o.time = state.time;

    const Vec3 d = state.position - site.ecef;
    const double rho = norm(d);
    o.range_m = rho;

    // Successive range derivatives for a static ECEF observer.
    const double rr = dot(d, state.velocity) / rho;
    o.range_rate_mps = rr;
    const double ra = (dot(state.velocity, state.velocity) + dot(d, accel) - rr * rr) / rho;
    o.range_accel_mps2 = ra;
    o.range_jerk_mps3 = (3.0 * dot(state.velocity, accel) + dot(d, jerk) - 3.0 * rr * ra) / rho;

    const double e = dot(d, site.east);
    const double n = dot(d, site.north);
    const double u = dot(d, site.up);
    o.elevation_deg = rad2deg(std::asin(std::clamp(u / rho, -1.0, 1.0)));
    const double horiz = std::hypot(e, n);
    if (horiz < 1e-9 * rho) {
        o.zenith = true;
        o.azimuth_deg = 0.0;
    } else {
        double az = rad2deg(std::atan2(e, n));
        if (az < 0.0) az += 360.0;
        if (az >= 360.0) az -= 360.0;
        o.azimuth_deg = az;
    }
    return o;
}

Observable observe(const ObserverSite& site, const OrbitBasis& basis, double t) {
    const EcefState s = propagate(basis, t);
    Vec3 a, j;
    propagate_derivatives(basis, s, a, j);
    return observe(site, s, a, j);
}

double fspl_db(double range_m, double freq_hz) {
    if (range_m <= 0.0 || freq_hz <= 0.0)
        throw std::domain_error("fspl needs positive range and frequency");
    return 20.0 * std::log10(4.0 * PI * range_m * freq_hz / SPEED_OF_LIGHT);
}

double fspl_delta_db(double range_a_m, double range_b_m) {
    if (range_a_m <= 0.0 || range_b_m <= 0.0)
        throw std::domain_error("fspl needs positive ranges");
    return 20.0 * std::log10(range_a_m / range_b_m);
}

double footprint_radius(double orbit_radius_m, double user_radius_m, double mask_deg) {
    if (orbit_radius_m <= user_radius_m)
        throw std::domain_error("orbit radius must exceed user radius");
    if (mask_deg < 0.0 || mask_deg > 90.0) throw std::domain_error("mask out of [0, 90]");
    const double e = deg2rad(mask_deg);
    const double rc = user_radius_m * std::cos(e);
    return -user_radius_m * std::sin(e) +
           std::sqrt(orbit_radius_m * orbit_radius_m - rc * rc);
}

}  // namespace pulsar
