#include "rfa/cli.hpp"

#include "rfa/experiment.hpp"
#include "rfa/results.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <string>

namespace rfa {

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

/// Experiment flags shared by the arcast and agree subcommands. Values are kept as text
/// and applied on top of the config file, so the flags always win.
struct ExperimentFlags {
    std::string config_path;
    std::map<std::string, std::string> values;
    bool ideal = false;
    bool excess = false;
    bool faulty_sender = false;
    std::string out_path;
    std::string trace_path;
};

void add_experiment_flags(CLI::App& cmd, ExperimentFlags& f)
{
    cmd.add_option("--config", f.config_path, "key = value configuration file");
    for (const char* key : {"n", "t", "delta", "qubits", "trials", "seed", "adversary", "scheduler", "ic-mode",
                            "max-events", "fairness-bound", "frames", "inputs", "threads"}) {
        cmd.add_option(std::string("--") + key, f.values[key]);
    }
    cmd.add_flag("--ideal-channel", f.ideal, "deliver exact directions (no sampling)");
    cmd.add_flag("--allow-excess-faults", f.excess, "permit t >= n/4 (bounds recorded, not asserted)");
    cmd.add_flag("--faulty-sender", f.faulty_sender, "make the broadcast sender one of the faulty nodes");
    cmd.add_option("--out", f.out_path, "results file (line-delimited JSON)");
    cmd.add_option("--trace-out", f.trace_path, "event trace file (line-delimited JSON)");
}

ExperimentConfig build_config(Mode mode, const ExperimentFlags& f)
{
    ExperimentConfig cfg;
    cfg.mode = mode;
    if (!f.config_path.empty()) load_config_file(f.config_path, cfg);
    cfg.mode = mode;
    for (const auto& [key, value] : f.values) {
        if (!value.empty()) apply_config_value(cfg, key, value);
    }
    if (f.ideal) cfg.ideal_channel = true;
    if (f.excess) cfg.allow_excess_faults = true;
    if (f.faulty_sender) cfg.faulty_sender = true;
    cfg.validate();
    return cfg;
}

void print_summary(std::ostream& out, const ExperimentConfig& cfg, const Summary& s)
{
    out << mode_name(cfg.mode) << " n=" << cfg.n << " t=" << cfg.t << " delta=" << cfg.delta
        << " adversary=" << fault_kind_name(cfg.fault) << " scheduler=" << policy_kind_name(cfg.scheduler) << '\n';
    out << "  trials " << s.trials << ", all-terminated " << s.terminated << ", conditioned " << s.conditioned
        << ", errors " << s.errors << ", unexpected non-termination " << s.unexpected_nontermination << '\n';
    out << "  violations " << s.violations << " (in " << s.with_violations << " runs)"
        << ", max conditioned pairwise " << s.max_pairwise_conditioned << " (42 delta = " << 42.0 * cfg.delta
        << ")\n";
    if (cfg.violation_study()) out << "  violation study: bounds recorded, not asserted\n";
}

int run_experiment_command(Mode mode, const ExperimentFlags& f, std::ostream& out, std::ostream& err)
{
    ExperimentConfig cfg;
    try {
        cfg = build_config(mode, f);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitUsage;
    }
    const ExperimentResult result = run_experiment(cfg, !f.trace_path.empty());
    if (!f.out_path.empty()) {
        std::ofstream file(f.out_path, std::ios::binary);
        if (!file) {
            err << "cannot write " << f.out_path << '\n';
            return kExitUsage;
        }
        write_results(file, result);
    }
    if (!f.trace_path.empty()) {
        std::ofstream file(f.trace_path, std::ios::binary);
        if (!file) {
            err << "cannot write " << f.trace_path << '\n';
            return kExitUsage;
        }
        write_traces(file, result.traces);
    }
    print_summary(out, cfg, result.summary);
    for (const auto& r : result.records) {
        for (const auto& v : r.violations) err << "trial " << r.trial << ": " << v.check << ": " << v.detail << '\n';
        if (!r.error.empty()) err << "trial " << r.trial << ": error: " << r.error << '\n';
    }
    return experiment_passed(cfg, result.summary) ? 0 : kExitViolation;
}

int run_check(const std::string& path, std::ostream& out, std::ostream& err)
{
    std::ifstream in(path);
    if (!in) {
        err << "cannot open " << path << '\n';
        return kExitUsage;
    }
    std::vector<EventTrace> traces;
    try {
        traces = read_traces(in);
    } catch (const std::exception& e) {
        err << "malformed trace: " << e.what() << '\n';
        return kExitUsage;
    }
    std::size_t counted = 0;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const TraceAnalysis a = analyze_trace(traces[i]);
        for (const auto& v : a.violations) {
            out << "trace " << i << " event " << v.event_index << ": " << v.check << ": " << v.detail << '\n';
        }
        if (!traces[i].header.violation_study) counted += a.violations.size();
    }
    out << traces.size() << " trace(s), " << counted << " violation(s)\n";
    return counted == 0 ? 0 : kExitViolation;
}

} // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Asynchronous reference-frame agreement simulator"};
    app.require_subcommand(1);

    ExperimentFlags arcast_flags;
    auto* arcast = app.add_subcommand("arcast", "run seeded broadcast trials");
    add_experiment_flags(*arcast, arcast_flags);

    ExperimentFlags agree_flags;
    auto* agree = app.add_subcommand("agree", "run seeded agreement trials");
    add_experiment_flags(*agree, agree_flags);

    double est_delta = 0.02;
    std::int64_t est_qubits = 20000;
    std::int64_t est_trials = 2000;
    std::uint64_t est_seed = 1;
    bool est_ideal = false;
    auto* estimate = app.add_subcommand("estimate", "measure the per-link estimation success rate");
    estimate->add_option("--delta", est_delta);
    estimate->add_option("--qubits", est_qubits);
    estimate->add_option("--trials", est_trials);
    estimate->add_option("--seed", est_seed);
    estimate->add_flag("--ideal-channel", est_ideal);

    std::string check_path;
    auto* check = app.add_subcommand("check", "run the invariant monitor over a saved trace file");
    check->add_option("trace", check_path, "trace file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and --version exit cleanly; every other parse error is a usage error.
        return app.exit(e, out, err) == 0 ? 0 : kExitUsage;
    }

    try {
        if (arcast->parsed()) return run_experiment_command(Mode::arcast, arcast_flags, out, err);
        if (agree->parsed()) return run_experiment_command(Mode::agree, agree_flags, out, err);
        if (check->parsed()) return run_check(check_path, out, err);
        if (estimate->parsed()) {
            const EstimationConfig cfg{est_delta, est_qubits, est_ideal};
            cfg.validate();
            if (est_trials < 1) throw ConfigError("trials must be at least 1");
            Rng rng(est_seed);
            const double rate = measure_success_rate(cfg, est_trials, rng);
            out << std::setprecision(6) << "delta=" << est_delta << " qubits=" << est_qubits << " trials=" << est_trials
                << " success=" << rate << " failure=" << 1.0 - rate << '\n';
            return 0;
        }
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "invalid argument: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace rfa
