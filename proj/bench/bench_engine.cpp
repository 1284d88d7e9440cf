// Times the statistics sweep: serial reference loop vs the OpenMP block
// decomposition, and verifies both produce identical digests.
//
// The default profile (one latitude, half a day, 5 s steps) finishes in a few
// seconds per run; pass --days/--step/--lats to scale it up.

#include <chrono>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "pulsar/config.hpp"
#include "pulsar/engine.hpp"

namespace {

double time_run(pulsar::MetricsResult& out, const pulsar::RunConfig& cfg, int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    out = workers <= 1 ? pulsar::run_metrics_serial(cfg) : pulsar::run_metrics(cfg, workers);
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    pulsar::RunConfig cfg;
    cfg.latitudes_deg = {45.0};
    cfg.duration_days = 0.5;
    cfg.step_s = 5.0;
    cfg.pair_step_s = 10.0;

    int workers = 0;
    int repeats = 1;

    CLI::App app{"engine benchmark: serial reference vs OpenMP sweep"};
    app.add_option("--constellation", cfg.constellation, "pulsar-foc, pulsar-iov, or gps-24")
        ->capture_default_str();
    app.add_option("--days", cfg.duration_days, "run length in days")->capture_default_str();
    app.add_option("--step", cfg.step_s, "sample step in seconds")->capture_default_str();
    app.add_option("--lats", cfg.latitudes_deg, "observer latitudes in degrees");
    app.add_option("--workers", workers, "thread count for the parallel run (0 = hardware)")
        ->capture_default_str();
    app.add_option("--repeats", repeats, "timed repetitions per variant")
        ->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    if (workers <= 0) workers = int(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    cfg.validate();

    std::printf("profile: %s, %zu latitude(s), %.2f days, %.1f s step, %.1f s pair step\n",
                cfg.constellation.c_str(), cfg.latitudes_deg.size(), cfg.duration_days,
                cfg.step_s, cfg.pair_step_s);

    pulsar::MetricsResult serial, parallel;
    double t_serial = 1e300, t_parallel = 1e300;
    for (int i = 0; i < repeats; ++i) {
        t_serial = std::min(t_serial, time_run(serial, cfg, 1));
        t_parallel = std::min(t_parallel, time_run(parallel, cfg, workers));
    }

    std::printf("serial reference : %8.3f s\n", t_serial);
    std::printf("openmp, %2d thread%s: %8.3f s   speedup %.2fx\n", workers,
                workers == 1 ? " " : "s", t_parallel, t_serial / t_parallel);

    const bool equal = pulsar::metrics_digest(serial) == pulsar::metrics_digest(parallel);
    std::printf("digests identical: %s\n", equal ? "yes" : "NO");
    return equal ? 0 : 1;
}
