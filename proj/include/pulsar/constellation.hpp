#pragma once

#include <string>
#include <vector>

#include "pulsar/constants.hpp"
#include "pulsar/vec3.hpp"

namespace pulsar {

// One Walker-style shell: circular orbits, uniformly spaced planes and slots.
struct ShellSpec {
    std::string name;
    int planes = 0;
    double raan_offset_deg = 0.0;        // 360 / planes
    int sats_per_plane = 0;
    double anomaly_offset_deg = 0.0;     // 360 / sats_per_plane
    double interplane_phasing_deg = 0.0; // slot advance between adjacent planes
    double inclination_deg = 0.0;
    double altitude_km = 0.0;
    double eccentricity = 0.0;           // circular only

    int count() const { return planes * sats_per_plane; }
    void validate() const;  // throws std::invalid_argument on inconsistency
};

struct Satellite {
    int svid = 0;
    int plane_index = 0;  // global plane number, 1-based across shells
    int slot_index = 0;   // 0-based within plane
    int prn_id = 0;       // shared per plane (Pulsar), unique per satellite (GPS)
    int shell_index = 0;  // index into Constellation::shells
    double orbit_radius = 0.0;  // m
    double inclination = 0.0;   // rad
    double raan = 0.0;          // rad
    double aol_epoch = 0.0;     // argument of latitude at t = 0, rad
};

struct Constellation {
    std::string name;
    std::vector<ShellSpec> shells;
    std::vector<Satellite> satellites;
    double epoch = 0.0;  // s; t in propagate() is measured from this
};

struct EcefState {
    Vec3 position;  // m
    Vec3 velocity;  // m/s
    double time = 0.0;
};

// Per-satellite constants reused across epochs; P/Q span the orbital plane in
// the inertial frame so position(t) = a (cos u P + sin u Q).
struct OrbitBasis {
    Vec3 p, q;
    double radius = 0.0;
    double mean_motion = 0.0;
    double speed = 0.0;
    double aol_epoch = 0.0;
};

OrbitBasis orbit_basis(const Satellite& sat);

// Circular two-body propagation, then uniform Earth rotation into ECEF.
EcefState propagate(const Satellite& sat, double t);
EcefState propagate(const OrbitBasis& basis, double t);

// ECEF acceleration and jerk of the same motion (gravity + Coriolis/centrifugal
// transport terms); needed for Doppler rate and its derivative.
void propagate_derivatives(const OrbitBasis& basis, const EcefState& s, Vec3& accel, Vec3& jerk);

struct OrbitalConstants {
    double period = 0.0;       // s
    double mean_motion = 0.0;  // rad/s
    double speed = 0.0;        // m/s
};

OrbitalConstants orbital_constants(const Satellite& sat);
OrbitalConstants orbital_constants_for_radius(double radius_m);

// Closed-form Table-style kinematic bounds for a circular shell and a static
// user on a sphere of radius user_radius. The ECEF-speed extreme occurs at the
// equator crossing; the relative-speed extreme adds the horizon geometry
// factor R/a (line of sight tangent to the user sphere).
double max_ecef_speed(double radius_m, double inclination_rad);
double max_relative_speed(double radius_m, double inclination_rad,
                          double user_radius_m = MEAN_EARTH_RADIUS);
double max_carrier_doppler(double radius_m, double inclination_rad, const BandSpec& band,
                           double user_radius_m = MEAN_EARTH_RADIUS);

// Built-in constellations: "pulsar-foc", "pulsar-iov", "gps-24".
Constellation build_nominal(const std::string& name,
                            AltitudeReference ref = AltitudeReference::Mean);

// True for satellites in near-polar shells (inclination above 80 degrees).
bool is_polar(const Satellite& sat);

// Plain-text key=value round trip (shell fields plus explicit per-satellite
// rows, so non-uniform phasings like the GPS 24-slot table survive).
std::string dump_constellation(const Constellation& c);
Constellation load_constellation(const std::string& text);
Constellation load_constellation_file(const std::string& path);

}  // namespace pulsar
