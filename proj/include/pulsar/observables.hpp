#pragma once

#include "pulsar/constants.hpp"
#include "pulsar/constellation.hpp"
#include "pulsar/vec3.hpp"

namespace pulsar {

struct Observer {
    double latitude_deg = 0.0;   // geodetic
    double longitude_deg = 0.0;
    double height_m = 0.0;

    void validate() const;  // |lat| <= 90, lon in [-180, 180)
};

// Observer with precomputed ECEF position and east/north/up basis.
struct ObserverSite {
    Observer geo;
    Vec3 ecef;
    Vec3 east, north, up;
};

ObserverSite make_site(const Observer& obs);
Vec3 geodetic_to_ecef(const Observer& obs);

struct Observable {
    double time = 0.0;
    int svid = 0;
    int prn_id = 0;
    double elevation_deg = 0.0;
    double azimuth_deg = 0.0;          // 0 at north, clockwise through east
    bool zenith = false;               // azimuth undefined at 90 deg, reported as 0
    double range_m = 0.0;
    double range_rate_mps = 0.0;       // rho dot, negative while approaching
    double range_accel_mps2 = 0.0;     // rho double dot
    double range_jerk_mps3 = 0.0;      // rho triple dot

    // Band projections. Doppler is positive while approaching.
    double doppler_hz(const BandSpec& b) const {
        return doppler_from_range_rate(range_rate_mps, b);
    }
    double doppler_rate_hzps(const BandSpec& b) const {
        return -range_accel_mps2 / SPEED_OF_LIGHT * b.carrier_hz;
    }
    double doppler_rate_derivative_hzps2(const BandSpec& b) const {
        return -range_jerk_mps3 / SPEED_OF_LIGHT * b.carrier_hz;
    }
    double code_doppler_cps(const BandSpec& b) const {
        return doppler_hz(b) * b.chip_rate / b.carrier_hz;
    }
};

// Full observable from an ECEF state plus its acceleration and jerk.
Observable observe(const ObserverSite& site, const EcefState& state, const Vec3& accel,
                   const Vec3& jerk);

// Convenience: propagate the satellite and derive everything at time t.
Observable observe(const ObserverSite& site, const OrbitBasis& basis, double t);

inline bool visible(const Observable& o, double mask_deg) {
    return o.elevation_deg >= mask_deg;  // inclusive boundary
}

// Carrier Doppler expressed on the spreading code.
inline double carrier_to_code_doppler(double doppler_hz, const BandSpec& b) {
    return doppler_hz * b.chip_rate / b.carrier_hz;
}

// Free-space path loss, and loss difference between two ranges.
double fspl_db(double range_m, double freq_hz);
double fspl_delta_db(double range_a_m, double range_b_m);

// Slant range from a user at user_radius to a satellite shell at orbit_radius,
// along a line of sight at elevation mask_deg.
double footprint_radius(double orbit_radius_m, double user_radius_m, double mask_deg);

}  // namespace pulsar
