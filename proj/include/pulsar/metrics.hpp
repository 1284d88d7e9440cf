#pragma once

#include <string>
#include <vector>

#include "pulsar/engine.hpp"

namespace pulsar {

// Rendered statistic table: numeric cells (NaN = absent), per-row decimal
// places for display; CSV keeps full precision.
struct TableDoc {
    std::string id;
    std::string title;
    std::string corner;                    // header of the label column
    std::vector<std::string> col_headers;
    std::vector<std::string> row_labels;
    std::vector<std::vector<double>> cells;
    std::vector<int> row_decimals;
};

std::string to_markdown(const TableDoc& t);
std::string to_csv(const TableDoc& t);

// Closed-form constellation kinematics at the mean-Earth-radius reference.
// Columns: 0 = Pulsar IOV, 1 = FOC polar, 2 = FOC inclined, 3 = GPS.
struct Kinematics {
    double radius_km[4];
    double perimeter_km[4];
    double period_min[4];
    double speed_mps[4];
    double max_ecef_speed_mps[4];
    double max_rel_speed_mps[4];
    double max_doppler_l1_hz[4];
    double max_doppler_l5_hz[4];
};
Kinematics compute_kinematics();
std::string render_kinematics(const Kinematics& k);
std::string kinematics_csv(const Kinematics& k);

struct ReportInputs {
    const MetricsResult* pulsar = nullptr;  // pulsar-foc sweep
    const MetricsResult* gps = nullptr;     // gps-24 sweep
};

// Statistic tables in the published row/column layout. Delay tables are the
// range tables scaled by 1/c cell for cell.
TableDoc average_elevation_table(const ReportInputs& in);                  // id 3
TableDoc min_range_table(const ReportInputs& in);                          // id 4
TableDoc min_delay_table(const ReportInputs& in);                          // id 5
TableDoc max_range_table(const ReportInputs& in);                         // id 6
TableDoc max_delay_table(const ReportInputs& in);                         // id 7
TableDoc max_range_diff_table(const ReportInputs& in);                    // id 8
TableDoc max_delay_diff_table(const ReportInputs& in);                    // id 9
TableDoc table_by_id(int id, const ReportInputs& in);                     // 3..9

// Pass-level helpers (lowest mask unless stated; truncated passes excluded).
std::vector<double> pass_durations(const MetricsResult& r, int lat_idx, int orbit_class,
                                   int mask_idx);
// Carrier Doppler at rise for every complete pass of the given classes, all
// latitudes, lowest mask (used by the acquisition-ordering comparison).
std::vector<double> rise_dopplers(const MetricsResult& r, Band band);

// (Doppler, Doppler rate) extreme-point samples reconstructed from the
// per-bin profile, for envelope calibration and containment checks.
std::vector<std::pair<double, double>> doppler_rate_profile(const MetricsResult& r,
                                                            int orbit_class, Band band);

// CSV exports behind the metrics command.
std::string elevation_sweep_csv(const MetricsResult& r);
std::string in_view_csv(const MetricsResult& r);
std::string passes_csv(const MetricsResult& r);
std::string doppler_histogram_csv(const MetricsResult& r, Band band);
std::string pair_diff_csv(const MetricsResult& r);
std::string calibration_csv(const MetricsResult& r);

}  // namespace pulsar
