#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pulsar {

// Physical constants (SI).
inline constexpr double MU_EARTH = 3.986004418e14;   // gravitational parameter [m^3/s^2]
inline constexpr double OMEGA_EARTH = 7.2921150e-5;  // rotation rate [rad/s]
inline constexpr double SPEED_OF_LIGHT = 299792458.0;

// WGS84 ellipsoid.
inline constexpr double WGS84_A = 6378137.0;
inline constexpr double WGS84_F = 1.0 / 298.257223563;
inline constexpr double WGS84_E2 = WGS84_F * (2.0 - WGS84_F);

// Mean Earth radius used when orbit radii are quoted as 6371 km + altitude.
inline constexpr double MEAN_EARTH_RADIUS = 6371.0e3;

inline constexpr double PI = std::numbers::pi;

constexpr double deg2rad(double d) { return d * (PI / 180.0); }
constexpr double rad2deg(double r) { return r * (180.0 / PI); }

// Which Earth radius the shell altitude is added to when forming the orbit radius.
enum class AltitudeReference { Mean, Equatorial };

inline double reference_radius(AltitudeReference ref) {
    return ref == AltitudeReference::Mean ? MEAN_EARTH_RADIUS : WGS84_A;
}

enum class Band { X1, X5, L1CA, L5 };

struct BandSpec {
    Band id;
    const char* name;
    double carrier_hz;
    double chip_rate;       // chip/s
    int code_length;        // primary PRN chips
    int overlay_length;     // pilot overlay chips (0 = none)
    double symbol_s;        // data symbol duration
};

inline constexpr BandSpec BAND_X1{Band::X1, "x1", 1593.3225e6, 1.023e6, 1023, 100, 1e-3};
inline constexpr BandSpec BAND_X5{Band::X5, "x5", 1190.51625e6, 10.23e6, 10230, 100, 2e-3};
inline constexpr BandSpec BAND_L1CA{Band::L1CA, "l1ca", 1575.42e6, 1.023e6, 1023, 0, 20e-3};
inline constexpr BandSpec BAND_L5{Band::L5, "l5", 1176.45e6, 10.23e6, 10230, 10, 10e-3};

inline const BandSpec& band_spec(Band b) {
    switch (b) {
        case Band::X1: return BAND_X1;
        case Band::X5: return BAND_X5;
        case Band::L1CA: return BAND_L1CA;
        case Band::L5: return BAND_L5;
    }
    throw std::invalid_argument("unknown band");
}

inline const BandSpec& band_spec(const std::string& name) {
    for (const BandSpec* b : {&BAND_X1, &BAND_X5, &BAND_L1CA, &BAND_L5})
        if (name == b->name) return *b;
    throw std::invalid_argument("unknown band: " + name);
}

// Range rate to carrier Doppler, positive while approaching (range rate negative).
inline double doppler_from_range_rate(double range_rate, const BandSpec& band) {
    return -range_rate / SPEED_OF_LIGHT * band.carrier_hz;
}

}  // namespace pulsar
