#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "pulsar/engine.hpp"

using namespace pulsar;

namespace {

RunConfig small_foc_config() {
    RunConfig cfg;
    cfg.constellation = "pulsar-foc";
    cfg.latitudes_deg = {45.0};
    cfg.duration_days = 0.5;
    cfg.step_s = 5.0;
    cfg.pair_step_s = 10.0;
    return cfg;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Independent pass extraction for a single satellite: linear interpolation of
// sin(elevation) between consecutive epochs, same crossing convention as the
// production sweep but written against the plain observe() API.
struct OraclePass {
    double rise_t, set_t, max_el, rise_rr;
    bool trunc_start, trunc_end;
};

std::vector<OraclePass> oracle_passes(const ObserverSite& site, const OrbitBasis& basis,
                                      long n_epochs, double step, double mask_deg) {
    const double sin_mask = std::sin(deg2rad(mask_deg));
    std::vector<OraclePass> out;
    bool open = false, tstart = false;
    double rise_t = 0.0, rise_rr = 0.0, max_sinel = -1.0;
    double prev_s = 0.0, prev_rr = 0.0;
    for (long e = 0; e < n_epochs; ++e) {
        const double t = double(e) * step;
        const Observable o = observe(site, basis, t);
        const double s = std::sin(deg2rad(o.elevation_deg));
        const double rr = o.range_rate_mps;
        const bool up = s >= sin_mask;
        if (e == 0) {
            if (up) {
                open = true;
                tstart = true;
                rise_t = 0.0;
                rise_rr = rr;
                max_sinel = s;
            }
        } else if (up && !open) {
            const double fr = (sin_mask - prev_s) / (s - prev_s);
            open = true;
            tstart = false;
            rise_t = (t - step) + step * fr;
            rise_rr = prev_rr + (rr - prev_rr) * fr;
            max_sinel = s;
        } else if (!up && open) {
            const double fr = (prev_s - sin_mask) / (prev_s - s);
            out.push_back({rise_t, (t - step) + step * fr,
                           rad2deg(std::asin(std::clamp(max_sinel, -1.0, 1.0))), rise_rr, tstart,
                           false});
            open = false;
        } else if (up && s > max_sinel) {
            max_sinel = s;
        }
        prev_s = s;
        prev_rr = rr;
    }
    if (open)
        out.push_back({rise_t, double(n_epochs - 1) * step,
                       rad2deg(std::asin(std::clamp(max_sinel, -1.0, 1.0))), rise_rr, tstart,
                       true});
    return out;
}

}  // namespace

TEST_CASE("epoch count excludes the wrap-around endpoint") {
    RunConfig cfg = small_foc_config();  // 12 h at 5 s
    const MetricsResult r = run_metrics(cfg, 1);
    CHECK(r.per_lat.size() == 1);
    // One in-view sample per epoch: 12 * 3600 / 5, no extra closing epoch.
    CHECK(r.per_lat[0].in_view[GROUP_SATS_ALL][0].n == 8640);
}

TEST_CASE("identical results for any worker count") {
    const RunConfig cfg = small_foc_config();  // 8640 epochs -> 3 blocks
    const std::string d1 = metrics_digest(run_metrics(cfg, 1));
    CHECK(!d1.empty());
    CHECK(metrics_digest(run_metrics(cfg, 2)) == d1);
    CHECK(metrics_digest(run_metrics(cfg, 4)) == d1);
    CHECK(metrics_digest(run_metrics(cfg, 8)) == d1);
    CHECK(metrics_digest(run_metrics_serial(cfg)) == d1);
}

TEST_CASE("constellation_file reproduces the built-in model it was dumped from") {
    RunConfig cfg;
    cfg.constellation = "pulsar-iov";
    cfg.latitudes_deg = {45.0};
    cfg.duration_days = 0.1;
    cfg.step_s = 10.0;
    cfg.pair_step_s = 10.0;
    const std::string builtin = metrics_digest(run_metrics(cfg, 1));

    const std::string path = "/tmp/test_engine_iov_dump.txt";
    {
        std::ofstream out(path, std::ios::binary);
        out << dump_constellation(build_nominal("pulsar-iov", cfg.altitude_reference));
        REQUIRE(out.good());
    }
    RunConfig from_file = cfg;
    from_file.constellation_file = path;
    CHECK(metrics_digest(run_metrics(from_file, 1)) == builtin);
    std::remove(path.c_str());
}

TEST_CASE("accumulator cross-checks on a short sweep") {
    const MetricsResult r = run_metrics(small_foc_config(), 2);
    const LatAccum& A = r.per_lat[0];

    // Every lowest-mask visible sample lands in exactly one histogram bin and
    // one envelope-containment count.
    for (int c : {CLASS_INCLINED, CLASS_POLAR}) {
        std::int64_t hist_sum = 0;
        for (int b = 0; b < HIST_BINS; ++b) hist_sum += A.hist[c][b];
        CHECK(hist_sum == A.env_total[c]);
        CHECK(A.env_total[c] > 0);
        CHECK(A.el_n[c][0] == A.env_total[c]);
        // Observed range-rate extremes stay inside the closed-form span.
        CHECK(A.rr_obs_max[c] <= A.hist_span[c]);
        CHECK(A.rr_obs_min[c] >= -A.hist_span[c]);
        CHECK(A.rr_obs_max[c] > 0.99 * -A.rr_obs_min[c]);  // symmetric geometry
    }
    CHECK(A.env_total[CLASS_GPS] == 0);

    // Total visible samples equal the summed per-epoch counts.
    const double in_view_total = A.in_view[GROUP_SATS_ALL][0].sum;
    CHECK(double(A.env_total[CLASS_INCLINED] + A.env_total[CLASS_POLAR]) == in_view_total);

    // Masks nest: higher masks see fewer satellites, shorter passes.
    for (int m = 1; m < int(r.config.masks_deg.size()); ++m) {
        CHECK(A.in_view[GROUP_SATS_ALL][m].sum <= A.in_view[GROUP_SATS_ALL][m - 1].sum);
        CHECK(A.el_n[CLASS_INCLINED][m] <= A.el_n[CLASS_INCLINED][m - 1]);
    }
    // Average elevation rises with the mask.
    const double avg0 = A.el_sum[CLASS_INCLINED][0] / double(A.el_n[CLASS_INCLINED][0]);
    const double avg20 = A.el_sum[CLASS_INCLINED][4] / double(A.el_n[CLASS_INCLINED][4]);
    CHECK(avg20 > avg0);

    // Same-plane scopes are subsets of the class scopes.
    CHECK(A.pair_n[SCOPE_SAME_PLANE_INCLINED][0] <= A.pair_n[SCOPE_INCLINED][0]);
    CHECK(A.pair_max_drange[SCOPE_SAME_PLANE_INCLINED][0] <=
          A.pair_max_drange[SCOPE_INCLINED][0]);
    CHECK(A.pair_max_drange[SCOPE_INCLINED][0] <= A.pair_max_drange[SCOPE_ALL][0]);
}

TEST_CASE("pass extraction matches a satellite-at-a-time oracle") {
    RunConfig cfg;
    cfg.constellation = "pulsar-iov";  // single satellite
    cfg.latitudes_deg = {45.0};
    cfg.duration_days = 1.0;
    cfg.step_s = 5.0;
    cfg.pair_step_s = 10.0;
    const MetricsResult r = run_metrics(cfg, 3);  // forces block stitching
    REQUIRE(r.constellation.satellites.size() == 1);

    const ObserverSite site = make_site({45.0, 0.0, 0.0});
    const OrbitBasis basis = orbit_basis(r.constellation.satellites[0]);
    const long n_epochs = 17280;

    int total_engine = 0;
    for (size_t m = 0; m < cfg.masks_deg.size(); ++m) {
        const auto want = oracle_passes(site, basis, n_epochs, cfg.step_s, cfg.masks_deg[m]);
        std::vector<PassRecord> got;
        for (const PassRecord& p : r.per_lat[0].passes)
            if (p.mask_index == int(m)) got.push_back(p);
        total_engine += int(got.size());

        REQUIRE(got.size() == want.size());
        for (size_t i = 0; i < want.size(); ++i) {
            CAPTURE(m);
            CAPTURE(i);
            CHECK(std::abs(got[i].rise_t - want[i].rise_t) < 1e-6);
            CHECK(std::abs(got[i].set_t - want[i].set_t) < 1e-6);
            CHECK(std::abs(got[i].max_elevation_deg - want[i].max_el) < 1e-9);
            CHECK(std::abs(got[i].rise_range_rate - want[i].rise_rr) < 1e-6);
            CHECK(got[i].trunc_start == want[i].trunc_start);
            CHECK(got[i].trunc_end == want[i].trunc_end);
            // A complete rise means the satellite was approaching.
            if (!got[i].trunc_start) CHECK(got[i].rise_range_rate < 1.0);
        }
    }
    CHECK(total_engine == int(r.per_lat[0].passes.size()));
    CHECK(total_engine > 10);  // a polar LEO crosses latitude 45 many times a day
}

TEST_CASE("observable logs are identical for any worker count") {
    RunConfig cfg;
    cfg.constellation = "pulsar-iov";
    cfg.latitudes_deg = {45.0};
    cfg.duration_days = 0.25;  // 4320 epochs -> 2 blocks
    cfg.step_s = 5.0;
    cfg.pair_step_s = 10.0;
    cfg.log_all = true;

    const auto p1 = run_simulate(cfg, "/tmp/pulsar_engine_sim1", 1);
    const auto p4 = run_simulate(cfg, "/tmp/pulsar_engine_sim4", 4);
    REQUIRE(p1.size() == 1);
    REQUIRE(p4.size() == 1);
    CHECK(p1[0] == "/tmp/pulsar_engine_sim1/observables_lat45.csv");

    const std::string body1 = read_file(p1[0]);
    CHECK(body1 == read_file(p4[0]));

    // log_all: one row per epoch for the single satellite, plus the header.
    const long rows = std::count(body1.begin(), body1.end(), '\n');
    CHECK(rows == 4320 + 1);
    CHECK(body1.rfind("time_s,svid,prn,plane,elev_deg,az_deg,range_m,range_rate_mps", 0) == 0);
    // Default Pulsar bands appear as Doppler column pairs.
    CHECK(body1.find("x1_doppler_hz,x1_doppler_rate_hzps,x5_doppler_hz,x5_doppler_rate_hzps") !=
          std::string::npos);
}

TEST_CASE("classification and histogram spans") {
    const Constellation foc = build_nominal("pulsar-foc");
    CHECK(classify(foc, foc.satellites[0]) == CLASS_INCLINED);
    CHECK(classify(foc, foc.satellites[200]) == CLASS_POLAR);
    const Constellation gps = build_nominal("gps-24");
    CHECK(classify(gps, gps.satellites[0]) == CLASS_GPS);

    // Spans bound the closed-form worst-case relative speed with 1% padding.
    const double span_incl = hist_span_for(foc, CLASS_INCLINED);
    const double span_polar = hist_span_for(foc, CLASS_POLAR);
    CHECK(span_incl == doctest::Approx(1.01 * max_relative_speed(
                                                  foc.satellites[0].orbit_radius,
                                                  foc.satellites[0].inclination, WGS84_A)));
    CHECK(span_polar > span_incl);  // polar shell is faster across the sky

    CHECK(lat_token(45.0) == "45");
    CHECK(lat_token(-45.0) == "-45");
    CHECK(lat_token(7.5) == "7.5");
}
