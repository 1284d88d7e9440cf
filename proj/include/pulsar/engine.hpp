#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pulsar/config.hpp"
#include "pulsar/constellation.hpp"
#include "pulsar/observables.hpp"

namespace pulsar {

// Orbit-class grouping used by the statistics (GPS runs only populate Gps).
enum OrbitClass : int { CLASS_INCLINED = 0, CLASS_POLAR = 1, CLASS_GPS = 2 };
inline constexpr int N_CLASS = 3;

// Pairwise scopes: all visible pairs, class-restricted pairs, same-plane pairs.
enum PairScope : int {
    SCOPE_ALL = 0,
    SCOPE_INCLINED,
    SCOPE_POLAR,
    SCOPE_SAME_PLANE_INCLINED,
    SCOPE_SAME_PLANE_POLAR,
};
inline constexpr int N_SCOPE = 5;

// In-view count groupings (satellites, distinct planes, same-plane maximum).
enum ViewGroup : int {
    GROUP_SATS_ALL = 0,
    GROUP_SATS_INCLINED,
    GROUP_SATS_POLAR,
    GROUP_PLANES_ALL,
    GROUP_PLANES_INCLINED,
    GROUP_PLANES_POLAR,
    GROUP_SAME_PLANE_MAX_INCLINED,
    GROUP_SAME_PLANE_MAX_POLAR,
};
inline constexpr int N_GROUP = 8;

inline constexpr int MAX_MASKS = 8;
inline constexpr int HIST_BINS = 100;

// Streaming min/avg/max accumulator; sums are merged in fixed block order so
// results are bit-identical for any worker count.
struct MinMaxSum {
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    std::int64_t n = 0;

    void add(double v) {
        mn = v < mn ? v : mn;
        mx = v > mx ? v : mx;
        sum += v;
        ++n;
    }
    void merge(const MinMaxSum& o) {
        mn = o.mn < mn ? o.mn : mn;
        mx = o.mx > mx ? o.mx : mx;
        sum += o.sum;
        n += o.n;
    }
    double avg() const { return n ? sum / double(n) : std::numeric_limits<double>::quiet_NaN(); }
};

// One rise-to-set interval above a mask. Truncated intervals (cut by the run
// window) keep their flags and are excluded from duration statistics.
struct PassRecord {
    std::int32_t sat_index = 0;
    std::int32_t mask_index = 0;
    double rise_t = 0.0;
    double set_t = 0.0;
    double max_elevation_deg = 0.0;
    double rise_range_rate = 0.0;  // m/s, interpolated at the rise crossing
    bool trunc_start = false;
    bool trunc_end = false;

    double duration() const { return set_t - rise_t; }
};

// Everything accumulated for one observer latitude. Extremes in range-rate
// units (m/s, m/s^2, m/s^3); band conversions happen at reporting time.
struct LatAccum {
    double el_sum[N_CLASS][MAX_MASKS] = {};
    std::int64_t el_n[N_CLASS][MAX_MASKS] = {};

    double min_range[N_CLASS];                  // visible at lowest mask
    double max_range[N_CLASS][MAX_MASKS];
    double min_raccel[N_CLASS][MAX_MASKS];      // most negative rho-ddot
    double max_raccel[N_CLASS][MAX_MASKS];
    double max_abs_jerk[N_CLASS];               // lowest mask

    // Peak |range rate| per 5-degree elevation band [5k, 5k+5); suffix maxima
    // over the bands give the Doppler limit above any elevation threshold.
    static constexpr int EL_BANDS = 19;
    double rr_band_max[N_CLASS][EL_BANDS];

    // Range-rate histogram over a fixed closed-form span, plus observed span.
    std::int64_t hist[N_CLASS][HIST_BINS] = {};
    double hist_span[N_CLASS] = {};             // bins cover [-span, +span]
    double rr_obs_min[N_CLASS], rr_obs_max[N_CLASS];

    // (range-rate, range-accel) profile: per histogram bin, extreme accels,
    // enough to refit a rate envelope without storing samples.
    double prof_min_raccel[N_CLASS][HIST_BINS];
    double prof_max_raccel[N_CLASS][HIST_BINS];

    // Containment of the built-in quadratic rate envelope (lowest mask).
    std::int64_t env_total[N_CLASS] = {};
    std::int64_t env_out[N_CLASS] = {};

    MinMaxSum in_view[N_GROUP][MAX_MASKS];      // sampled once per epoch

    double pair_max_drange[N_SCOPE][MAX_MASKS];
    std::int64_t pair_n[N_SCOPE][MAX_MASKS] = {};
    double sp_min_drr[2][MAX_MASKS];            // same-plane |d range-rate| minima, by class
    double sp_max_drr[2][MAX_MASKS];            // same-plane |d range-rate| maxima, by class
    double sp_max_draccel[2][MAX_MASKS];        // same-plane |d range-accel| maxima, by class

    std::vector<PassRecord> passes;             // all masks, time-ordered per (sat, mask)

    LatAccum();
    void merge(const LatAccum& o, std::vector<std::array<std::int32_t, MAX_MASKS>>& pending);
};

struct MetricsResult {
    RunConfig config;
    Constellation constellation;
    std::vector<int> sat_class;     // OrbitClass per satellite
    std::vector<LatAccum> per_lat;  // parallel to config.latitudes_deg
};

// Run the full statistics sweep. workers <= 1 uses the plain serial loop; the
// OpenMP path decomposes into fixed 3600-epoch blocks and merges partials in
// block order, so output is identical for any worker count.
MetricsResult run_metrics(const RunConfig& cfg, int workers);
MetricsResult run_metrics_serial(const RunConfig& cfg);

// Per-epoch observable CSV logs, one file per latitude, visible satellites
// only unless cfg.log_all. Returns the file paths written.
std::vector<std::string> run_simulate(const RunConfig& cfg, const std::string& out_dir,
                                      int workers);

int classify(const Constellation& c, const Satellite& sat);
std::string lat_token(double lat_deg);  // "45", "-45", "7.5" for file names

// Full-precision serialization of every accumulated quantity; equal strings
// mean equal results (used by the determinism checks).
std::string metrics_digest(const MetricsResult& r);

// Fixed span of the range-rate histogram for an orbit class (closed-form
// relative-speed bound, padded 1 percent).
double hist_span_for(const Constellation& c, int orbit_class);

}  // namespace pulsar
