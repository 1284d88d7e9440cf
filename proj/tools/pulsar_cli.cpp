// Command-line front end: simulation sweeps, statistic tables, acquisition
// plans, spreading-code generation, and the CSK modem.
//
// Exit codes: 0 success, 1 usage error, 2 data/coverage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pulsar/acq.hpp"
#include "pulsar/codes.hpp"
#include "pulsar/config.hpp"
#include "pulsar/csk.hpp"
#include "pulsar/engine.hpp"
#include "pulsar/metrics.hpp"

namespace {

using namespace pulsar;

struct Globals {
    std::string config_path;
    std::string out_dir = "out";
    int workers = 0;  // 0 = all hardware threads
    std::uint64_t seed = 1;
};

RunConfig load_config(const Globals& g) {
    RunConfig cfg;
    if (!g.config_path.empty()) cfg = RunConfig::from_file(g.config_path);
    cfg.validate();
    return cfg;
}

void write_file(const std::string& path, const std::string& content) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Band primary_band(const RunConfig& cfg) {
    return band_spec(cfg.effective_bands().at(0)).id;
}

int cmd_simulate(const Globals& g) {
    const RunConfig cfg = load_config(g);
    const int workers = g.workers;
    for (const std::string& path : run_simulate(cfg, g.out_dir, workers))
        std::cout << path << "\n";
    return 0;
}

int cmd_metrics(const Globals& g) {
    const RunConfig cfg = load_config(g);
    const MetricsResult r = run_metrics(cfg, g.workers);
    const std::string base = g.out_dir + "/";
    const Band band = primary_band(cfg);
    const std::vector<std::pair<std::string, std::string>> files = {
        {"elevation_sweep.csv", elevation_sweep_csv(r)},
        {"in_view.csv", in_view_csv(r)},
        {"passes.csv", passes_csv(r)},
        {std::string("doppler_histogram_") + band_spec(band).name + ".csv",
         doppler_histogram_csv(r, band)},
        {"pair_diff.csv", pair_diff_csv(r)},
        {"calibration.csv", calibration_csv(r)},
        {"digest.txt", metrics_digest(r)},
    };
    for (const auto& [name, content] : files) {
        write_file(base + name, content);
        std::cout << base + name << "\n";
    }
    return 0;
}

int cmd_report(const Globals& g, std::vector<int> tables) {
    if (tables.empty()) tables = {1, 3, 4, 5, 6, 7, 8, 9};
    const RunConfig base_cfg = load_config(g);
    const std::string base = g.out_dir + "/";

    const bool need_sweeps =
        std::any_of(tables.begin(), tables.end(), [](int id) { return id >= 3; });
    MetricsResult pulsar_run, gps_run;
    ReportInputs in;
    if (need_sweeps) {
        RunConfig pc = base_cfg;
        pc.constellation = "pulsar-foc";
        pc.constellation_file.clear();
        RunConfig gc = base_cfg;
        gc.constellation = "gps-24";
        gc.constellation_file.clear();
        pulsar_run = run_metrics(pc, g.workers);
        gps_run = run_metrics(gc, g.workers);
        in.pulsar = &pulsar_run;
        in.gps = &gps_run;
    }
    for (int id : tables) {
        std::string md, csv;
        if (id == 1) {
            const Kinematics k = compute_kinematics();
            md = render_kinematics(k);
            csv = kinematics_csv(k);
        } else {
            const TableDoc t = table_by_id(id, in);
            md = to_markdown(t);
            csv = to_csv(t);
        }
        write_file(base + "table_" + std::to_string(id) + ".md", md);
        write_file(base + "table_" + std::to_string(id) + ".csv", csv);
        std::cout << md << "\n";
    }
    return 0;
}

// ---- plan ----------------------------------------------------------------

struct PlanDopplerArgs {
    std::string phase = "cold", env = "open-sky", order = "large-positive-first";
    std::string band = "x1", orbit = "inclined";
    double mask = 30.0, bin_width = 500.0;
    std::vector<double> tracked;
    bool summary = false;
};

Scenario scenario_from(const PlanDopplerArgs& a) {
    Scenario sc;
    sc.phase = a.phase == "cold" ? Phase::ColdStart : Phase::Operation;
    sc.environment = a.env == "urban" ? Environment::Urban : Environment::OpenSky;
    sc.urban_mask_deg = a.mask;
    if (a.order == "high-elevation-first")
        sc.order = BinOrder::HighElevationFirst;
    else if (a.order == "zero-first")
        sc.order = BinOrder::ZeroFirst;
    else
        sc.order = BinOrder::LargePositiveFirst;
    if (!a.tracked.empty()) {
        sc.prn_state = PrnState::AlreadyTracked;
        sc.tracked_doppler_hz = a.tracked;
    }
    return sc;
}

int orbit_class_from(const std::string& name) {
    if (name == "inclined") return 0;
    if (name == "polar") return 1;
    if (name == "gps") return 2;
    throw std::invalid_argument("unknown orbit class: " + name);
}

int cmd_plan_doppler(const Globals& g, const PlanDopplerArgs& a) {
    const SearchPlan plan = plan_doppler(scenario_from(a), band_spec(a.band).id,
                                         orbit_class_from(a.orbit), a.bin_width);
    const std::string csv = plan_to_csv(plan);
    std::cout << (a.summary ? format_plan_summary(plan) : csv);
    write_file(g.out_dir + "/plan_doppler.csv", csv);
    return 0;
}

int cmd_plan_rate(const Globals& g, const std::string& band, const std::string& orbit,
                  std::optional<double> f_query) {
    const RateEnvelope env = default_rate_envelope(orbit_class_from(orbit), band_spec(band).id);
    std::string csv = "f_hz,rate_lo_hzps,rate_hi_hzps\n";
    char buf[96];
    auto row = [&](double f) {
        const RateEnvelope::Interval q = env.query(f);
        if (q.empty) return;
        std::snprintf(buf, sizeof buf, "%.1f,%.3f,%.3f\n", f, q.lo, q.hi);
        csv += buf;
    };
    if (f_query) {
        row(*f_query);
    } else {
        for (int i = -50; i <= 50; ++i) row(env.f_max_hz * double(i) / 50.0);
    }
    std::cout << csv;
    write_file(g.out_dir + "/plan_rate.csv", csv);
    return 0;
}

int cmd_plan_overlay(const Globals& g, const std::string& mode, double mask, double uncertainty,
                     int predicted_sign, bool predict) {
    std::vector<int> delays;
    if (mode == "relative") {
        OverlayRelative m;
        m.max_mask_deg = mask;
        m.predict_sign = predict;
        m.predicted_sign = predicted_sign;
        delays = overlay_delay_candidates(m);
    } else if (mode == "precise") {
        OverlayPreciseTime m;
        m.mask_deg = mask;
        m.clock_uncertainty_ms = uncertainty;
        delays = overlay_delay_candidates(m);
    } else {
        throw std::invalid_argument("overlay mode must be 'relative' or 'precise'");
    }
    std::string csv = "order_index,delay_ms\n";
    char buf[48];
    for (size_t i = 0; i < delays.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%d\n", i, delays[i]);
        csv += buf;
    }
    std::cout << csv;
    write_file(g.out_dir + "/plan_overlay.csv", csv);
    return 0;
}

int cmd_plan_budget(double rate, double alpha, double code_doppler, double chips) {
    char buf[96];
    const double cit = max_coherent_integration_s(rate, alpha);
    std::snprintf(buf, sizeof buf, "max_coherent_integration_s,%.6f\n", cit);
    std::cout << buf;
    if (code_doppler != 0.0 || chips != 0.0) {
        std::snprintf(buf, sizeof buf, "time_for_shift_s,%.6f\n",
                      time_for_shift_s(code_doppler, chips));
        std::cout << buf;
        std::snprintf(buf, sizeof buf, "code_shift_chips_after_cit,%.6f\n",
                      code_shift_chips(code_doppler, cit));
        std::cout << buf;
    }
    return 0;
}

// ---- codes ---------------------------------------------------------------

void emit_chips(const ChipSequence& c, bool hex) {
    std::cout << (hex ? to_hex(c) : to_bits(c)) << "\n";
}

int cmd_codes(const std::string& kind, int index, int prn, bool pilot, unsigned xb_init,
              bool hex) {
    if (kind == "kasami") {
        const auto family = kasami_small_set(msequence(g1_spec(), 1023));
        if (index < 0 || index >= int(family.size()))
            throw std::invalid_argument("kasami index must be 0..31");
        emit_chips(family[size_t(index)], hex);
    } else if (kind == "gold") {
        emit_chips(gold_pair(msequence(g1_spec(), 1023), msequence(g2_spec(), 1023), index), hex);
    } else if (kind == "x1") {
        emit_chips(x1_code_for_prn(prn, pilot), hex);
    } else if (kind == "x5") {
        emit_chips(x5_generator(xb_init), hex);
    } else {
        throw std::invalid_argument("unknown code kind: " + kind);
    }
    return 0;
}

int cmd_codes_check(const std::string& family_name) {
    std::vector<ChipSequence> family;
    if (family_name == "kasami") {
        family = kasami_small_set(msequence(g1_spec(), 1023));
    } else if (family_name == "gold") {
        family = gold_family(msequence(g1_spec(), 1023), msequence(g2_spec(), 1023));
    } else {
        throw std::invalid_argument("family must be 'kasami' or 'gold'");
    }
    const long long peak = family_max_abs_correlation(family);
    char buf[96];
    std::snprintf(buf, sizeof buf, "family,codes,max_abs_correlation,db\n%s,%zu,%lld,%.2f\n",
                  family_name.c_str(), family.size(), peak,
                  correlation_db(peak, family[0].length()));
    std::cout << buf;
    return 0;
}

// ---- csk -----------------------------------------------------------------

ChipSequence load_prn(const std::string& path) {
    ChipSequence prn;
    if (path.empty()) {
        prn = x5_generator((1u << 13) - 1);
    } else {
        prn = from_bits(read_text(path));
    }
    return prn;
}

int cmd_csk_mod(const std::string& prn_file, int symbol) {
    const ChipSequence prn = load_prn(prn_file);
    const std::vector<std::int8_t> tx = csk_modulate(prn, symbol);
    std::string out;
    out.reserve(tx.size() + 1);
    for (std::int8_t v : tx) out.push_back(v > 0 ? '0' : '1');
    std::cout << out << "\n";
    return 0;
}

int cmd_csk_demod(const std::string& prn_file, const std::string& rx_file) {
    const ChipSequence prn = load_prn(prn_file);
    const ChipSequence rx = from_bits(read_text(rx_file));
    const CskDecision d = csk_demodulate(rx.chips, prn);
    std::cout << csk_decisions_csv({d});
    return 0;
}

int cmd_csk_roundtrip(const std::string& prn_file) {
    const ChipSequence prn = load_prn(prn_file);
    int correct = 0;
    for (int v = 0; v < 256; ++v)
        if (csk_demodulate(csk_modulate(prn, v), prn).value == v) ++correct;
    std::cout << correct << "/256 symbols recovered\n";
    if (correct != 256) throw std::runtime_error("noiseless roundtrip failed");
    return 0;
}

int cmd_csk_noise(const Globals& g, const std::string& prn_file, int trials, double flip) {
    const ChipSequence prn = load_prn(prn_file);
    std::mt19937_64 rng(g.seed);
    auto uniform = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };
    int errors = 0, mismatches = 0;
    for (int t = 0; t < trials; ++t) {
        const int truth = int(rng() & 0xff);
        std::vector<std::int8_t> rx = csk_modulate(prn, truth);
        for (std::int8_t& chip : rx)
            if (uniform() < flip) chip = std::int8_t(-chip);
        const CskDecision fast = csk_demodulate(rx, prn);
        const CskDecision ref = csk_demodulate_direct(rx, prn);
        if (fast.value != ref.value) ++mismatches;
        if (fast.value != truth) ++errors;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "trials,errors,oracle_mismatches\n%d,%d,%d\n", trials, errors,
                  mismatches);
    std::cout << buf;
    if (mismatches != 0) throw std::runtime_error("transform demodulator diverged from oracle");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LEO PNT constellation toolkit: orbit sweeps, statistic tables, "
                 "spreading codes, CSK modem, acquisition planning"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "key=value run configuration file");
    app.add_option("--out", g.out_dir, "output directory (default ./out)");
    app.add_option("--workers", g.workers, "worker threads, 0 = all hardware threads");
    app.add_option("--seed", g.seed, "seed for noise-injection subcommands");

    CLI::App* simulate = app.add_subcommand("simulate", "write per-epoch observable CSV logs");
    CLI::App* metrics = app.add_subcommand("metrics", "run the statistics sweep, write summaries");

    CLI::App* report = app.add_subcommand("report", "emit statistic tables (markdown + CSV)");
    std::vector<int> table_ids;
    report->add_option("--tables", table_ids, "table ids (1, 3..9; default all)")
        ->delimiter(',');

    CLI::App* plan = app.add_subcommand("plan", "acquisition planning");
    plan->require_subcommand(1);

    CLI::App* plan_d = plan->add_subcommand("doppler", "ordered Doppler bin plan");
    PlanDopplerArgs pd;
    plan_d->add_option("--phase", pd.phase, "cold | operation")
        ->check(CLI::IsMember({"cold", "operation"}));
    plan_d->add_option("--env", pd.env, "open-sky | urban")
        ->check(CLI::IsMember({"open-sky", "urban"}));
    plan_d->add_option("--mask", pd.mask, "urban elevation mask, degrees");
    plan_d->add_option("--order", pd.order, "bin ordering strategy")
        ->check(CLI::IsMember({"large-positive-first", "high-elevation-first", "zero-first"}));
    plan_d->add_option("--band", pd.band, "x1 | x5 | l1ca | l5");
    plan_d->add_option("--orbit", pd.orbit, "inclined | polar | gps");
    plan_d->add_option("--bin-width", pd.bin_width, "Doppler bin width, Hz");
    plan_d->add_option("--tracked", pd.tracked, "tracked Doppler(s), Hz; enables exclusions")
        ->delimiter(',');
    plan_d->add_flag("--summary", pd.summary, "print the plain-text summary instead of CSV");

    CLI::App* plan_r = plan->add_subcommand("rate", "Doppler-rate envelope query/curve");
    std::string pr_band = "x1", pr_orbit = "inclined";
    std::optional<double> pr_f;
    plan_r->add_option("--band", pr_band);
    plan_r->add_option("--orbit", pr_orbit);
    plan_r->add_option("--f", pr_f, "query a single Doppler, Hz (default: dump the curve)");

    CLI::App* plan_o = plan->add_subcommand("overlay", "overlay-delay candidate list");
    std::string po_mode = "relative";
    double po_mask = 0.0, po_unc = 0.0;
    int po_sign = +1;
    bool po_predict = false;
    plan_o->add_option("--mode", po_mode, "relative | precise")
        ->check(CLI::IsMember({"relative", "precise"}));
    plan_o->add_option("--mask", po_mask, "elevation mask, degrees (0..20)");
    plan_o->add_option("--uncertainty-ms", po_unc, "clock uncertainty, ms (precise mode)");
    plan_o->add_flag("--predict-sign", po_predict, "emit only the predicted sign (relative mode)");
    plan_o->add_option("--sign", po_sign, "predicted sign, +1 or -1");

    CLI::App* plan_b = plan->add_subcommand("budget", "integration-time and code-shift budgets");
    double pb_rate = 230.0, pb_alpha = 1.0, pb_cd = 0.0, pb_chips = 0.0;
    plan_b->add_option("--rate", pb_rate, "Doppler rate, Hz/s");
    plan_b->add_option("--alpha", pb_alpha, "allowed drift, fraction of one bin");
    plan_b->add_option("--code-doppler", pb_cd, "code Doppler, chips/s");
    plan_b->add_option("--chips", pb_chips, "target code shift, chips");

    CLI::App* codes = app.add_subcommand("codes", "spreading-code generation and checks");
    codes->require_subcommand(1);
    int ck_index = 0, ck_prn = 1;
    bool ck_pilot = false, ck_hex = false;
    unsigned ck_xb = (1u << 13) - 1;
    CLI::App* codes_kasami = codes->add_subcommand("kasami", "small-set member (1023 chips)");
    codes_kasami->add_option("--index", ck_index, "family index 0..31");
    codes_kasami->add_flag("--hex", ck_hex, "hex instead of 0/1 text");
    CLI::App* codes_gold = codes->add_subcommand("gold", "Gold code from the register pair");
    codes_gold->add_option("--shift", ck_index, "relative shift (-1/-2 = bare registers)");
    codes_gold->add_flag("--hex", ck_hex);
    CLI::App* codes_x1 = codes->add_subcommand("x1", "X1 primary code for a PRN id");
    codes_x1->add_option("--prn", ck_prn, "PRN id 1..18");
    codes_x1->add_flag("--pilot", ck_pilot, "pilot channel (default data)");
    codes_x1->add_flag("--hex", ck_hex);
    CLI::App* codes_x5 = codes->add_subcommand("x5", "X5 primary code (10230 chips)");
    codes_x5->add_option("--xb-init", ck_xb, "XB register initial state");
    codes_x5->add_flag("--hex", ck_hex);
    CLI::App* codes_check = codes->add_subcommand("check", "family cross-correlation bound");
    std::string ck_family = "kasami";
    codes_check->add_option("--family", ck_family, "kasami | gold");

    CLI::App* csk = app.add_subcommand("csk", "code-shift-keying modem");
    csk->require_subcommand(1);
    std::string csk_prn_file, csk_rx_file;
    int csk_symbol = 0, csk_trials = 1000;
    double csk_flip = 0.2;
    CLI::App* csk_mod = csk->add_subcommand("mod", "modulate one symbol");
    csk_mod->add_option("--prn", csk_prn_file, "PRN chip file, 0/1 text (default X5 code)");
    csk_mod->add_option("--symbol", csk_symbol, "symbol value 0..255");
    CLI::App* csk_demod_c = csk->add_subcommand("demod", "demodulate one 2-period block");
    csk_demod_c->add_option("--prn", csk_prn_file);
    csk_demod_c->add_option("--rx", csk_rx_file, "received chip file, 0/1 text")->required();
    CLI::App* csk_round = csk->add_subcommand("roundtrip", "all 256 symbols, noiseless");
    csk_round->add_option("--prn", csk_prn_file);
    CLI::App* csk_noise = csk->add_subcommand("noise", "seeded sign-flip trials vs oracle");
    csk_noise->add_option("--prn", csk_prn_file);
    csk_noise->add_option("--trials", csk_trials);
    csk_noise->add_option("--flip-fraction", csk_flip, "chip flip probability");

    try {
        app.parse(argc, argv);
        if (*simulate) return cmd_simulate(g);
        if (*metrics) return cmd_metrics(g);
        if (*report) return cmd_report(g, table_ids);
        if (*plan_d) return cmd_plan_doppler(g, pd);
        if (*plan_r) return cmd_plan_rate(g, pr_band, pr_orbit, pr_f);
        if (*plan_o) return cmd_plan_overlay(g, po_mode, po_mask, po_unc, po_sign, po_predict);
        if (*plan_b) return cmd_plan_budget(pb_rate, pb_alpha, pb_cd, pb_chips);
        if (*codes_kasami) return cmd_codes("kasami", ck_index, ck_prn, ck_pilot, ck_xb, ck_hex);
        if (*codes_gold) return cmd_codes("gold", ck_index, ck_prn, ck_pilot, ck_xb, ck_hex);
        if (*codes_x1) return cmd_codes("x1", ck_index, ck_prn, ck_pilot, ck_xb, ck_hex);
        if (*codes_x5) return cmd_codes("x5", ck_index, ck_prn, ck_pilot, ck_xb, ck_hex);
        if (*codes_check) return cmd_codes_check(ck_family);
        if (*csk_mod) return cmd_csk_mod(csk_prn_file, csk_symbol);
        if (*csk_demod_c) return cmd_csk_demod(csk_prn_file, csk_rx_file);
        if (*csk_round) return cmd_csk_roundtrip(csk_prn_file);
        if (*csk_noise) return cmd_csk_noise(g, csk_prn_file, csk_trials, csk_flip);
        std::cerr << "no command given\n";
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
