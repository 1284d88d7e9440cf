#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pulsar/constants.hpp"

namespace pulsar {

enum class Phase { ColdStart, Operation };
enum class Environment { OpenSky, Urban };
enum class BinOrder { LargePositiveFirst, HighElevationFirst, ZeroFirst };
enum class PrnState { NewPrn, AlreadyTracked };

// Acquisition scenario: receiver phase, sky visibility, preferred bin
// ordering, and whether the wanted PRN is already tracked on another
// satellite of the same plane.
struct Scenario {
    Phase phase = Phase::ColdStart;
    Environment environment = Environment::OpenSky;
    double urban_mask_deg = 30.0;  // minimum searched elevation in urban
    BinOrder order = BinOrder::LargePositiveFirst;
    PrnState prn_state = PrnState::NewPrn;
    std::vector<double> tracked_doppler_hz;  // non-empty iff AlreadyTracked

    void validate() const;  // throws std::invalid_argument on inconsistency
};

struct HzInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double f) const { return f >= lo && f <= hi; }
};

struct SearchPlan {
    Band band = Band::X1;
    int orbit_class = 0;  // OrbitClass value
    double bin_width_hz = 0.0;
    double f_limit_hz = 0.0;
    std::vector<double> ordered_bins_hz;   // search order, centers
    std::vector<double> excluded_bins_hz;  // grid centers pruned by exclusions
    std::vector<HzInterval> exclusions;
};

// Doppler-rate bound as a function of Doppler: quadratic floor
// rate_lo(f) = -rate_max*(1-(f/f_max)^2) - guard, rate_hi = +guard.
// `margin` is the allowed slack at the edges and the refit headroom, not
// part of the default floor.
struct RateEnvelope {
    Band band = Band::X1;
    double f_max_hz = 0.0;
    double rate_max_hzps = 0.0;
    double margin = 0.05;
    double guard_hzps = 5.0;

    struct Interval {
        double lo = 0.0, hi = 0.0;
        bool empty = true;
    };
    Interval query(double f_hz) const;
    bool contains(double f_hz, double rate_hzps) const;
};

// Closed-form per-class kinematics at the mean-Earth-radius reference.
double class_max_doppler(int orbit_class, Band band);

// Fraction of the class's peak |Doppler| reachable at elevations >= el_deg
// (calibration table from the 3-day sweep, linear between 5-degree knots).
double doppler_fraction_above(int orbit_class, double el_deg);
double doppler_limit(int orbit_class, Band band, double min_elevation_deg);

// Peak |Doppler rate| for the class (calibration, converted per band).
double class_max_doppler_rate(int orbit_class, Band band);

// Widest same-plane Doppler split between simultaneously visible satellites
// sharing a PRN (calibration, converted per band).
double same_plane_doppler_window(int orbit_class, Band band);

RateEnvelope default_rate_envelope(int orbit_class, Band band);

// Refit the default envelope so that at least 99.9 percent of (f, rate)
// samples fall inside; inflates rate_max (and f_max if samples overflow it).
RateEnvelope fit_rate_envelope(int orbit_class, Band band,
                               const std::vector<std::pair<double, double>>& samples);

SearchPlan plan_doppler(const Scenario& sc, Band band, int orbit_class, double bin_width_hz);

// Overlay-delay candidate lists (milliseconds, 1 ms code periods).
struct OverlayRelative {
    double max_mask_deg = 0.0;
    bool predict_sign = false;
    int predicted_sign = +1;  // used when predict_sign, heuristic: approaching leads
};
struct OverlayPreciseTime {
    double mask_deg = 0.0;
    double clock_uncertainty_ms = 0.0;
};
std::vector<int> overlay_delay_candidates(const OverlayRelative& mode);
std::vector<int> overlay_delay_candidates(const OverlayPreciseTime& mode);

// Mask-interpolated built-in bounds behind the overlay candidates (ms).
double overlay_max_delay_difference(double mask_deg);   // same-PRN delay split
double overlay_min_arrival(double mask_deg);            // shortest path delay
double overlay_max_arrival(double mask_deg);            // longest path delay

// T = sqrt(alpha / (2*rate)): time to drift alpha Doppler bins at the given
// rate, with bin width tied to 1/(2T). rate <= 0 -> +inf (unbounded budget).
double max_coherent_integration_s(double rate_hzps, double alpha);

double code_shift_chips(double code_doppler_cps, double duration_s);
double time_for_shift_s(double code_doppler_cps, double chips);

std::string format_plan_summary(const SearchPlan& plan);
std::string plan_to_csv(const SearchPlan& plan);

}  // namespace pulsar
