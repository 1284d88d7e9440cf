#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "pulsar/metrics.hpp"

using namespace pulsar;

namespace {

// Short two-hour sweeps over the published latitude set; enough samples for
// every table to have data at the low masks.
const std::vector<double> LATS = {0, 15, 30, 45, 60, 75, 90};

MetricsResult sweep(const std::string& constellation) {
    RunConfig cfg;
    cfg.constellation = constellation;
    cfg.latitudes_deg = LATS;
    cfg.duration_days = 2.0 / 24.0;
    cfg.step_s = 10.0;
    cfg.pair_step_s = 30.0;
    return run_metrics(cfg, 2);
}

bool has_value(const TableDoc& t, size_t row) {
    for (double v : t.cells[row])
        if (!std::isnan(v)) return true;
    return false;
}

}  // namespace

TEST_CASE("markdown and csv rendering of a table document") {
    TableDoc t;
    t.id = "x";
    t.title = "Demo";
    t.corner = "Mask";
    t.col_headers = {"0", "5"};
    t.row_labels = {"a", "bee"};
    t.cells = {{1.25, std::nan("")}, {3.0, 4.5}};
    t.row_decimals = {1, 0};

    const std::string md = to_markdown(t);
    CHECK(md.find("## Demo\n") != std::string::npos);
    CHECK(md.find("| 1.2 ") != std::string::npos);   // one decimal
    CHECK(md.find("| - |") != std::string::npos);    // absent cell
    CHECK(md.find("| 3   ") != std::string::npos);   // zero decimals
    CHECK(md.find("| bee ") != std::string::npos);

    const std::string csv = to_csv(t);
    CHECK(csv.rfind("Mask,0,5\n", 0) == 0);
    CHECK(csv.find("a,1.25,\n") != std::string::npos);  // full precision, empty for absent
    CHECK(csv.find("bee,3,4.5\n") != std::string::npos);
}

TEST_CASE("closed-form kinematics columns") {
    const Kinematics k = compute_kinematics();
    // Columns: IOV, FOC polar, FOC inclined, GPS.
    const double radius[4] = {6891.0, 7451.0, 7451.0, 26551.0};
    const double period[4] = {94.9, 106.7, 106.7, 717.6};
    const double speed[4] = {7605.5, 7314.1, 7314.1, 3874.6};
    const double ecef[4] = {7682.9, 7400.0, 7000.6, 3186.8};
    const double rel[4] = {7103.2, 6327.4, 5985.9, 764.7};
    const double dop1[4] = {37751.7, 33628.5, 31813.4, 4018.4};
    const double dop5[4] = {28207.7, 25126.9, 23770.7, 3000.8};
    for (int i = 0; i < 4; ++i) {
        CAPTURE(i);
        CHECK(k.radius_km[i] == doctest::Approx(radius[i]).epsilon(1e-6));
        CHECK(k.perimeter_km[i] == doctest::Approx(2.0 * PI * radius[i]).epsilon(1e-6));
        CHECK(k.period_min[i] == doctest::Approx(period[i]).epsilon(1e-3));
        CHECK(k.speed_mps[i] == doctest::Approx(speed[i]).epsilon(1e-4));
        CHECK(k.max_ecef_speed_mps[i] == doctest::Approx(ecef[i]).epsilon(1e-4));
        CHECK(k.max_rel_speed_mps[i] == doctest::Approx(rel[i]).epsilon(1e-4));
        CHECK(k.max_doppler_l1_hz[i] == doctest::Approx(dop1[i]).epsilon(1e-4));
        CHECK(k.max_doppler_l5_hz[i] == doctest::Approx(dop5[i]).epsilon(1e-4));
    }
    const std::string md = render_kinematics(k);
    CHECK(md.find("Orbital period (min)") != std::string::npos);
    const std::string csv = kinematics_csv(k);
    CHECK(csv.rfind("parameter,", 0) == 0);
}

TEST_CASE("statistic tables from short sweeps") {
    const MetricsResult pulsar = sweep("pulsar-foc");
    const MetricsResult gps = sweep("gps-24");
    const ReportInputs in{&pulsar, &gps};

    const TableDoc t3 = average_elevation_table(in);
    REQUIRE(t3.cells.size() == 8);
    REQUIRE(t3.col_headers == std::vector<std::string>{"0", "5", "10", "15", "20"});
    CHECK(t3.row_labels[0] == "All latitudes, Pulsar");
    CHECK(t3.row_labels[7] == "Latitudes up to 60, GPS");
    for (size_t row = 0; row < 8; ++row) {
        // Averages above any mask lie between the mask and zenith.
        for (size_t m = 0; m < 5; ++m) {
            const double v = t3.cells[row][m];
            if (std::isnan(v)) continue;
            CHECK(v > 0.0);
            CHECK(v < 90.0);
        }
    }
    // Means rise with the mask for the well-sampled rows.
    CHECK(t3.cells[0][4] > t3.cells[0][0]);
    CHECK(t3.cells[3][4] > t3.cells[3][0]);

    const TableDoc t4 = min_range_table(in);
    REQUIRE(t4.cells.size() == 3);
    REQUIRE(t4.col_headers.size() == 7);
    CHECK(t4.row_labels[2] == "GPS");
    CHECK(t4.row_decimals[0] == 1);
    CHECK(t4.row_decimals[2] == 0);
    // LEO minima sit near the shell altitude, GPS near its own. The observer
    // rides the ellipsoid, up to 7 km above the mean-radius sphere the orbit
    // radii are built on, so overhead ranges can undercut the altitude.
    for (double v : t4.cells[0])
        if (!std::isnan(v)) {
            CHECK(v >= 1072.0);
            CHECK(v < 3900.0);
        }
    for (double v : t4.cells[2])
        if (!std::isnan(v)) CHECK(v >= 20172.0);

    const TableDoc t6 = max_range_table(in);
    REQUIRE(t6.cells.size() == 3);
    REQUIRE(t6.col_headers.size() == 5);
    // Maxima shrink as the mask rises.
    for (size_t row = 0; row < 3; ++row)
        for (int m = 1; m < 5; ++m)
            if (!std::isnan(t6.cells[row][m]) && !std::isnan(t6.cells[row][m - 1]))
                CHECK(t6.cells[row][m] <= t6.cells[row][m - 1]);

    const TableDoc t8 = max_range_diff_table(in);
    REQUIRE(t8.cells.size() == 6);
    CHECK(t8.row_labels[3] == "Pulsar inclined (same plane)");
    CHECK(has_value(t8, 0));
    CHECK(has_value(t8, 5));
    // Scope nesting: class-restricted differences cannot exceed the all-pairs row.
    for (int m = 0; m < 5; ++m) {
        if (!std::isnan(t8.cells[1][m])) CHECK(t8.cells[1][m] <= t8.cells[0][m]);
        if (!std::isnan(t8.cells[3][m])) CHECK(t8.cells[3][m] <= t8.cells[1][m]);
    }

    // Delay tables are their range tables cell for cell over the speed of light.
    const TableDoc t5 = min_delay_table(in);
    const TableDoc t7 = max_delay_table(in);
    const TableDoc t9 = max_delay_diff_table(in);
    for (size_t i = 0; i < t4.cells.size(); ++i)
        for (size_t j = 0; j < t4.cells[i].size(); ++j) {
            if (std::isnan(t4.cells[i][j])) {
                CHECK(std::isnan(t5.cells[i][j]));
            } else {
                CHECK(t5.cells[i][j] ==
                      doctest::Approx(t4.cells[i][j] * 1.0e6 / SPEED_OF_LIGHT).epsilon(1e-14));
            }
        }
    for (size_t i = 0; i < t6.cells.size(); ++i)
        for (size_t j = 0; j < 5; ++j)
            if (!std::isnan(t6.cells[i][j]))
                CHECK(t7.cells[i][j] ==
                      doctest::Approx(t6.cells[i][j] * 1.0e6 / SPEED_OF_LIGHT).epsilon(1e-14));
    for (size_t i = 0; i < t8.cells.size(); ++i)
        for (size_t j = 0; j < 5; ++j)
            if (!std::isnan(t8.cells[i][j]))
                CHECK(t9.cells[i][j] ==
                      doctest::Approx(t8.cells[i][j] * 1.0e6 / SPEED_OF_LIGHT).epsilon(1e-14));
    CHECK(t5.row_decimals[2] == 1);  // delays always print one decimal

    // Dispatch by id, including the failure path.
    CHECK(table_by_id(3, in).id == "3");
    CHECK(table_by_id(9, in).id == "9");
    CHECK_THROWS_AS(table_by_id(2, in), std::invalid_argument);
    CHECK_THROWS_AS(average_elevation_table(ReportInputs{&pulsar, nullptr}), std::runtime_error);
}

TEST_CASE("tables demand the full latitude set") {
    RunConfig cfg;
    cfg.constellation = "pulsar-foc";
    cfg.latitudes_deg = {45.0};
    cfg.duration_days = 0.02;
    cfg.step_s = 10.0;
    cfg.pair_step_s = 10.0;
    const MetricsResult partial = run_metrics(cfg, 1);
    const ReportInputs in{&partial, &partial};
    try {
        min_range_table(in);
        FAIL("expected a throw");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("not covered") != std::string::npos);
    }
}

TEST_CASE("pass helpers filter truncation and convert rise Doppler") {
    const MetricsResult r = sweep("pulsar-foc");
    int lat45 = -1;
    for (size_t i = 0; i < r.config.latitudes_deg.size(); ++i)
        if (r.config.latitudes_deg[i] == 45.0) lat45 = int(i);
    REQUIRE(lat45 >= 0);

    const auto durs = pass_durations(r, lat45, CLASS_INCLINED, 0);
    int expect = 0;
    for (const PassRecord& p : r.per_lat[lat45].passes)
        if (p.mask_index == 0 && !p.trunc_start && !p.trunc_end &&
            r.sat_class[p.sat_index] == CLASS_INCLINED)
            ++expect;
    CHECK(int(durs.size()) == expect);
    CHECK(!durs.empty());
    for (double d : durs) {
        CHECK(d > 0.0);
        CHECK(d < 1300.0);  // a 107-minute orbit cannot stay up longer
    }

    const auto rd = rise_dopplers(r, Band::X1);
    int complete_rises = 0;
    for (const LatAccum& A : r.per_lat)
        for (const PassRecord& p : A.passes)
            if (p.mask_index == 0 && !p.trunc_start) ++complete_rises;
    CHECK(int(rd.size()) == complete_rises);
    for (double f : rd) {
        CHECK(f > -38000.0);
        CHECK(f < 38000.0);
    }

    const auto prof = doppler_rate_profile(r, CLASS_INCLINED, Band::X1);
    CHECK(!prof.empty());
    for (const auto& [f, fdot] : prof) {
        CHECK(std::abs(f) < 33000.0);   // padded closed-form span on X1
        CHECK(std::isfinite(fdot));
    }
}

TEST_CASE("csv exports carry their headers and data") {
    const MetricsResult r = sweep("pulsar-foc");
    const std::string el = elevation_sweep_csv(r);
    CHECK(el.rfind("lat_deg,mask_deg,class,avg_elevation_deg,n_samples\n", 0) == 0);
    CHECK(el.find("\npulsar") == std::string::npos);  // class is a middle column
    CHECK(el.find(",pulsar,") != std::string::npos);
    CHECK(el.find(",inclined,") != std::string::npos);
    CHECK(el.find(",polar,") != std::string::npos);

    const std::string iv = in_view_csv(r);
    CHECK(iv.rfind("lat_deg,mask_deg,group,min,avg,max,n_epochs\n", 0) == 0);
    CHECK(iv.find(",sats_all,") != std::string::npos);
    CHECK(iv.find(",same_plane_max_polar,") != std::string::npos);

    const std::string pc = passes_csv(r);
    CHECK(pc.rfind("lat_deg,svid,prn,plane,class,mask_deg,", 0) == 0);
    CHECK(pc.find(",inclined,") != std::string::npos);

    const std::string dh = doppler_histogram_csv(r, Band::X1);
    CHECK(dh.rfind("class,bin_lo_hz,bin_hi_hz,count\n", 0) == 0);
    CHECK(dh.find("inclined,") != std::string::npos);

    const std::string pd = pair_diff_csv(r);
    CHECK(pd.rfind("scope,mask_deg,max_range_diff_km,n_pairs,", 0) == 0);
    CHECK(pd.find("same_plane_inclined,") != std::string::npos);

    const std::string cal = calibration_csv(r);
    CHECK(cal.rfind("kind,class,key,value\n", 0) == 0);
    CHECK(cal.find("doppler_fraction,inclined,0,1.000000\n") != std::string::npos);
    CHECK(cal.find("max_range_rate,polar,mps,") != std::string::npos);
    CHECK(cal.find("same_plane_min_drr,inclined,mps,") != std::string::npos);
    // Fractions are suffix maxima of |range rate| and therefore nonincreasing.
    double prev = 2.0;
    size_t pos = 0;
    int seen = 0;
    while ((pos = cal.find("doppler_fraction,inclined,", pos)) != std::string::npos) {
        const size_t comma = cal.find(',', pos + 26);
        const double v = std::stod(cal.substr(comma + 1));
        CHECK(v <= prev + 1e-12);
        prev = v;
        ++seen;
        ++pos;
    }
    CHECK(seen == 19);
}
