#include "pulsar/acq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "pulsar/constellation.hpp"

namespace pulsar {

namespace {

constexpr const char* CLASS_NAMES[3] = {"inclined", "polar", "gps"};

// Shell geometry behind each orbit class (mean-Earth-radius reference).
struct ClassGeometry {
    double radius_m;
    double incl_deg;
};
constexpr ClassGeometry CLASS_GEO[3] = {
    {MEAN_EARTH_RADIUS + 1080.0e3, 53.0},
    {MEAN_EARTH_RADIUS + 1080.0e3, 97.0},
    {MEAN_EARTH_RADIUS + 20180.0e3, 55.0},
};

void check_class(int orbit_class) {
    if (orbit_class < 0 || orbit_class > 2)
        throw std::invalid_argument("orbit class must be 0 (inclined), 1 (polar) or 2 (gps)");
}

// Fraction of the class's peak |Doppler| still reachable when only satellites
// at elevation >= knot are searched; knots every 5 degrees from 0 to 90.
// Frozen from the 3-day, 8-latitude reference sweep (equatorial altitude
// reference, 1 s steps); regenerate via the metrics command's
// calibration.csv. The curve tracks cos(elevation) to within ~1%.
constexpr double FRACTION_ABOVE[3][19] = {
    {1.000000, 0.996123, 0.984842, 0.966030, 0.939825, 0.906474, 0.866308, 0.819602, 0.766546,
     0.707596, 0.643283, 0.574513, 0.501126, 0.423873, 0.343447, 0.260326, 0.175274, 0.089030,
     0.000000},
    {1.000000, 0.996141, 0.984840, 0.966049, 0.939856, 0.906470, 0.866494, 0.819423, 0.766596,
     0.707921, 0.643660, 0.574661, 0.501078, 0.424617, 0.343663, 0.260431, 0.175711, 0.089122,
     0.000000},
    {1.000000, 0.994838, 0.983034, 0.965692, 0.938667, 0.903631, 0.865197, 0.818252, 0.763503,
     0.705643, 0.641970, 0.572161, 0.497242, 0.419972, 0.338766, 0.257025, 0.172184, 0.084149,
     0.000000},
};

// Peak |Doppler rate| on the X1/L1 carrier per class, frozen from the same
// sweep (peak |range acceleration| 38.765 / 43.322 / 0.1361 m/s^2).
constexpr double RATE_MAX_L1[3] = {206.03, 230.24, 0.7152};

// Widest same-plane Doppler split between co-visible satellites on the
// X1/L1 carrier per class, frozen from the same sweep. The LEO windows span
// nearly the whole +-Doppler range because co-visible plane mates fly toward
// and away from the observer at once.
constexpr double SP_WINDOW_L1[3] = {62482.0, 62887.0, 7864.0};

double l1_carrier(int orbit_class) {
    return orbit_class == 2 ? BAND_L1CA.carrier_hz : BAND_X1.carrier_hz;
}

// Mask-indexed overlay tables: knots at 0/5/10/15/20 degrees.
constexpr double OVERLAY_MASKS_STEP = 5.0;
constexpr double MAX_DELAY_DIFF_MS[5] = {9.3, 7.7, 6.2, 5.0, 4.0};
constexpr double MAX_ARRIVAL_MS[5] = {13.0, 11.3, 9.9, 8.6, 7.7};
constexpr double MIN_ARRIVAL_MS = 3.6;

double interp_mask_table(const double* table, double mask_deg) {
    if (!(mask_deg >= 0.0 && mask_deg <= 20.0))
        throw std::invalid_argument(
            "mask outside the built-in 0-20 degree bounds; recompute the sweep");
    const double x = mask_deg / OVERLAY_MASKS_STEP;
    const int k = std::min(3, int(x));
    const double f = x - k;
    return table[k] * (1.0 - f) + table[k + 1] * f;
}

// Descending grid of bin centers anchored at +f_limit; the bottom center is
// clamped to -f_limit so no center leaves the span. Cells are the regions
// nearest each center, half a bin wide at the outermost edges.
std::vector<double> top_anchored_grid(double f_limit, double bw) {
    std::vector<double> c;
    double f = f_limit;
    while (true) {
        c.push_back(f);
        if (f - bw / 2.0 <= -f_limit + 1e-9) break;
        f -= bw;
        if (f < -f_limit) f = -f_limit;
    }
    return c;
}

// Ascending-|f| grid anchored at 0: {0, +bw, -bw, +2bw, ...}; outermost pair
// clamped to +-f_limit when the uniform step would overshoot.
std::vector<double> zero_anchored_grid(double f_limit, double bw) {
    std::vector<double> c{0.0};
    for (int k = 1;; ++k) {
        double f = k * bw;
        bool clamped = false;
        if (f >= f_limit) {
            f = f_limit;
            clamped = true;
        }
        if (f <= 0.0) break;  // f_limit == 0: just the zero bin
        c.push_back(+f);
        c.push_back(-f);
        if (clamped || f + bw / 2.0 >= f_limit - 1e-9) break;
    }
    return c;
}

}  // namespace

void Scenario::validate() const {
    if (order == BinOrder::HighElevationFirst && environment != Environment::Urban)
        throw std::invalid_argument("high-elevation-first ordering requires the urban environment");
    if (prn_state == PrnState::AlreadyTracked && tracked_doppler_hz.empty())
        throw std::invalid_argument("already-tracked scenario needs at least one tracked Doppler");
    if (prn_state == PrnState::NewPrn && !tracked_doppler_hz.empty())
        throw std::invalid_argument("tracked Doppler list given but the PRN is marked new");
    if (environment == Environment::Urban && (urban_mask_deg < 0.0 || urban_mask_deg >= 90.0))
        throw std::invalid_argument("urban mask must lie in [0, 90) degrees");
}

double class_max_doppler(int orbit_class, Band band) {
    check_class(orbit_class);
    const ClassGeometry& g = CLASS_GEO[orbit_class];
    return max_carrier_doppler(g.radius_m, deg2rad(g.incl_deg), band_spec(band),
                               MEAN_EARTH_RADIUS);
}

double doppler_fraction_above(int orbit_class, double el_deg) {
    check_class(orbit_class);
    if (el_deg <= 0.0) return 1.0;
    if (el_deg >= 90.0) return FRACTION_ABOVE[orbit_class][18];
    const double x = el_deg / 5.0;
    const int k = int(x);
    const double f = x - k;
    return FRACTION_ABOVE[orbit_class][k] * (1.0 - f) + FRACTION_ABOVE[orbit_class][k + 1] * f;
}

double doppler_limit(int orbit_class, Band band, double min_elevation_deg) {
    return class_max_doppler(orbit_class, band) *
           doppler_fraction_above(orbit_class, min_elevation_deg);
}

double class_max_doppler_rate(int orbit_class, Band band) {
    check_class(orbit_class);
    return RATE_MAX_L1[orbit_class] * band_spec(band).carrier_hz / l1_carrier(orbit_class);
}

double same_plane_doppler_window(int orbit_class, Band band) {
    check_class(orbit_class);
    return SP_WINDOW_L1[orbit_class] * band_spec(band).carrier_hz / l1_carrier(orbit_class);
}

RateEnvelope::Interval RateEnvelope::query(double f_hz) const {
    Interval out;
    if (std::abs(f_hz) > f_max_hz) return out;  // not physical: empty
    const double u = f_hz / f_max_hz;
    out.lo = -rate_max_hzps * (1.0 - u * u) - guard_hzps;
    out.hi = +guard_hzps;
    out.empty = false;
    return out;
}

bool RateEnvelope::contains(double f_hz, double rate_hzps) const {
    const Interval q = query(f_hz);
    return !q.empty && rate_hzps >= q.lo && rate_hzps <= q.hi;
}

RateEnvelope default_rate_envelope(int orbit_class, Band band) {
    RateEnvelope env;
    env.band = band;
    env.f_max_hz = class_max_doppler(orbit_class, band);
    env.rate_max_hzps = class_max_doppler_rate(orbit_class, band);
    return env;
}

RateEnvelope fit_rate_envelope(int orbit_class, Band band,
                               const std::vector<std::pair<double, double>>& samples) {
    RateEnvelope env = default_rate_envelope(orbit_class, band);
    if (samples.empty()) return env;
    for (int iter = 0; iter < 400; ++iter) {
        size_t inside = 0;
        bool f_overflow = false;
        for (const auto& [f, rate] : samples) {
            if (env.contains(f, rate))
                ++inside;
            else if (std::abs(f) > env.f_max_hz)
                f_overflow = true;
        }
        if (double(inside) >= 0.999 * double(samples.size())) break;
        if (f_overflow) env.f_max_hz *= 1.005;
        env.rate_max_hzps *= 1.02;
    }
    return env;
}

SearchPlan plan_doppler(const Scenario& sc, Band band, int orbit_class, double bin_width_hz) {
    sc.validate();
    check_class(orbit_class);
    if (!(bin_width_hz > 0.0)) throw std::invalid_argument("bin width must be positive");

    SearchPlan plan;
    plan.band = band;
    plan.orbit_class = orbit_class;
    plan.bin_width_hz = bin_width_hz;

    const double f_max = class_max_doppler(orbit_class, band);
    double f_limit = f_max;
    bool ascending_mag = false;
    if (sc.phase == Phase::ColdStart) {
        if (sc.environment == Environment::Urban) {
            f_limit = doppler_limit(orbit_class, band, sc.urban_mask_deg);
            ascending_mag = sc.order == BinOrder::HighElevationFirst;
        }
    } else {
        if (sc.environment == Environment::OpenSky) {
            ascending_mag = true;
        } else {
            f_limit = doppler_limit(orbit_class, band, sc.urban_mask_deg);
        }
    }
    plan.f_limit_hz = f_limit;

    std::vector<double> grid = ascending_mag ? zero_anchored_grid(f_limit, bin_width_hz)
                                             : top_anchored_grid(f_limit, bin_width_hz);

    if (sc.prn_state == PrnState::AlreadyTracked) {
        const double half = 2.0 * bin_width_hz;
        for (double t : sc.tracked_doppler_hz) plan.exclusions.push_back({t - half, t + half});
        const double window = same_plane_doppler_window(orbit_class, band);
        for (double c : grid) {
            const bool feasible =
                std::any_of(sc.tracked_doppler_hz.begin(), sc.tracked_doppler_hz.end(),
                            [&](double t) { return std::abs(c - t) <= window; });
            const bool excluded =
                std::any_of(plan.exclusions.begin(), plan.exclusions.end(),
                            [&](const HzInterval& x) { return x.contains(c); });
            if (feasible && !excluded)
                plan.ordered_bins_hz.push_back(c);
            else
                plan.excluded_bins_hz.push_back(c);
        }
    } else {
        plan.ordered_bins_hz = std::move(grid);
    }
    return plan;
}

std::vector<int> overlay_delay_candidates(const OverlayRelative& mode) {
    const double bound = overlay_max_delay_difference(mode.max_mask_deg);
    const int m = int(std::floor(bound + 1e-9));
    std::vector<int> out{0};
    if (mode.predict_sign) {
        const int s = mode.predicted_sign >= 0 ? +1 : -1;
        for (int k = 1; k <= m; ++k) out.push_back(s * k);
    } else {
        for (int k = 1; k <= m; ++k) {
            out.push_back(+k);
            out.push_back(-k);
        }
    }
    return out;
}

std::vector<int> overlay_delay_candidates(const OverlayPreciseTime& mode) {
    if (mode.clock_uncertainty_ms < 0.0)
        throw std::invalid_argument("clock uncertainty must be non-negative");
    const double lo = overlay_min_arrival(mode.mask_deg) - mode.clock_uncertainty_ms;
    const double hi = overlay_max_arrival(mode.mask_deg) + mode.clock_uncertainty_ms;
    std::vector<int> out;
    for (int k = int(std::ceil(lo - 1e-9)); k <= int(std::floor(hi + 1e-9)); ++k)
        out.push_back(k);
    return out;
}

double overlay_max_delay_difference(double mask_deg) {
    return interp_mask_table(MAX_DELAY_DIFF_MS, mask_deg);
}

double overlay_min_arrival(double mask_deg) {
    if (!(mask_deg >= 0.0 && mask_deg <= 20.0))
        throw std::invalid_argument(
            "mask outside the built-in 0-20 degree bounds; recompute the sweep");
    return MIN_ARRIVAL_MS;  // closest approach is overhead, above any mask
}

double overlay_max_arrival(double mask_deg) { return interp_mask_table(MAX_ARRIVAL_MS, mask_deg); }

double max_coherent_integration_s(double rate_hzps, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0, 1]");
    if (rate_hzps <= 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(alpha / (2.0 * rate_hzps));
}

double code_shift_chips(double code_doppler_cps, double duration_s) {
    return code_doppler_cps * duration_s;
}

double time_for_shift_s(double code_doppler_cps, double chips) {
    if (code_doppler_cps == 0.0)
        return chips == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return chips / code_doppler_cps;
}

std::string format_plan_summary(const SearchPlan& plan) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf, "band %s  orbit %s  bins %zu  width %.1f Hz  span %.1f Hz\n",
                  band_spec(plan.band).name, CLASS_NAMES[plan.orbit_class],
                  plan.ordered_bins_hz.size(), plan.bin_width_hz, plan.f_limit_hz);
    out += buf;
    if (!plan.ordered_bins_hz.empty()) {
        std::snprintf(buf, sizeof buf, "first %.1f Hz  last %.1f Hz\n",
                      plan.ordered_bins_hz.front(), plan.ordered_bins_hz.back());
        out += buf;
    }
    for (const HzInterval& x : plan.exclusions) {
        std::snprintf(buf, sizeof buf, "exclude [%.1f, %.1f] Hz\n", x.lo, x.hi);
        out += buf;
    }
    return out;
}

std::string plan_to_csv(const SearchPlan& plan) {
    std::string out = "order_index,center_hz,excluded\n";
    char buf[64];
    for (size_t i = 0; i < plan.ordered_bins_hz.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.1f,0\n", i, plan.ordered_bins_hz[i]);
        out += buf;
    }
    for (double c : plan.excluded_bins_hz) {
        std::snprintf(buf, sizeof buf, "-1,%.1f,1\n", c);
        out += buf;
    }
    return out;
}

}  // namespace pulsar
