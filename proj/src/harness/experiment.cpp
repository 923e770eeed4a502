#include "rfa/experiment.hpp"

#include "rfa/agreement.hpp"
#include "rfa/arcast.hpp"
#include "rfa/byzantine.hpp"
#include "rfa/ic_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace rfa {

namespace {

// Sub-stream ids below the per-trial seed.
constexpr std::uint64_t kFrameStream = 10;
constexpr std::uint64_t kIcStream = 11;

std::vector<bool> fault_mask(const ExperimentConfig& cfg)
{
    std::vector<bool> faulty(cfg.n, false);
    const bool sender_first = cfg.mode == Mode::agree || cfg.faulty_sender;
    for (std::size_t i = 0; i < cfg.t; ++i) faulty[sender_first ? i : i + 1] = true;
    return faulty;
}

bool all_correct_output(const Network& net)
{
    for (NodeId i = 0; i < net.n(); ++i) {
        if (net.faulty(i)) continue;
        const ProtocolNode* p = net.protocol(i);
        if (!p || !p->output()) return false;
    }
    return true;
}

} // namespace

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial)
{
    return derive_seed(master_seed, trial);
}

TrialResult run_trial(const ExperimentConfig& cfg, std::size_t trial)
{
    const std::uint64_t seed = trial_seed(cfg.master_seed, trial);
    const std::size_t n = cfg.n;
    const bool agree = cfg.mode == Mode::agree;
    const std::vector<bool> faulty = fault_mask(cfg);

    Rng setup(derive_seed(seed, kFrameStream));
    std::vector<LocalFrame> frames;
    for (std::size_t i = 0; i < n; ++i) {
        frames.push_back(cfg.frames == FrameChoice::random ? random_frame(setup) : LocalFrame{});
    }

    NetworkConfig ncfg;
    ncfg.n = n;
    ncfg.instance_count = agree ? n + 1 : 1;
    ncfg.estimation = EstimationConfig{cfg.delta, cfg.qubits_per_axis, cfg.ideal_channel};
    ncfg.fairness_bound = cfg.fairness_bound;

    TrialResult result;
    RunRecord& rec = result.record;
    rec.trial = trial;
    rec.seed = seed;
    rec.expected_termination = agree || !faulty[0];

    try {
        Network net(ncfg, frames, faulty, seed);
        const std::size_t direction_instances = agree ? n : 1;
        auto memory = std::make_shared<AdversaryMemory>(n, cfg.t, faulty, direction_instances, cfg.delta);
        FaultParams fparams;
        fparams.qubits_per_axis = cfg.qubits_per_axis;

        TraceHeader& header = net.trace().header;
        header.mode = std::string(mode_name(cfg.mode));
        header.t = cfg.t;
        header.ic_mode = agree ? std::string(ic_mode_name(cfg.ic_mode)) : std::string{};
        header.strategy = std::string(fault_kind_name(cfg.fault));
        header.violation_study = cfg.violation_study();
        header.inputs.assign(direction_instances, std::nullopt);

        std::shared_ptr<IcOracle> oracle;
        if (agree) {
            IcOracleConfig icfg{cfg.ic_mode, make_ic_adversary(cfg.fault, faulty)};
            oracle = std::make_shared<IcOracle>(icfg, n, cfg.t, faulty, static_cast<InstanceId>(n),
                                                derive_seed(seed, kIcStream));
            net.set_ic_sink([oracle](NodeId node, const std::string& bits) { return oracle->submit(node, bits); });
            for (NodeId i = 0; i < n; ++i) {
                if (faulty[i]) {
                    net.attach_fault(i, make_fault(cfg.fault, i, memory, {i}, fparams));
                    continue;
                }
                const UnitVector u = cfg.inputs == InputChoice::random ? random_unit_vector(setup) : UnitVector::z_axis();
                header.inputs[i] = frames[i].to_global(u).components();
                net.attach_protocol(i, std::make_unique<AAgreeNode>(n, cfg.t, cfg.delta, i, u));
            }
        } else {
            header.sender = 0;
            const UnitVector u = random_unit_vector(setup);
            for (NodeId i = 0; i < n; ++i) {
                if (faulty[i]) {
                    std::vector<InstanceId> own;
                    if (i == 0) own.push_back(0);
                    net.attach_fault(i, make_fault(cfg.fault, i, memory, own, fparams));
                    continue;
                }
                std::optional<UnitVector> input;
                if (i == 0) {
                    input = u;
                    header.inputs[0] = frames[0].to_global(u).components();
                }
                net.attach_protocol(i, std::make_unique<ArCastNode>(ArCastParams{n, cfg.t, cfg.delta, 0, i, 0}, input));
            }
        }
        net.set_scheduler(make_policy(cfg.scheduler, memory));

        RunStatus status = RunStatus::error;
        std::string error;
        try {
            status = net.run_until(all_correct_output, cfg.max_events);
        } catch (const std::exception& e) {
            error = e.what();
        }
        net.note_end(status, error);
        result.trace = std::move(net.trace());
    } catch (const std::exception& e) {
        // Set-up failed before any event; still leave a well-formed trace behind.
        result.trace.header.n = n;
        result.trace.header.faulty = faulty;
        result.trace.header.mode = std::string(mode_name(cfg.mode));
        result.trace.append(TraceEvent{0, EventKind::end, 0, 0, std::nullopt, 0, 0, 0, std::nullopt, std::nullopt,
                                       static_cast<std::int64_t>(RunStatus::error), e.what()});
    }

    const TraceAnalysis a = analyze_trace(result.trace);
    rec.status = a.status;
    rec.error = a.error;
    rec.terminated = a.terminated;
    rec.outputs = a.outputs;
    rec.conditioned = a.conditioned;
    rec.max_pairwise = a.max_pairwise;
    rec.sender_distance = a.sender_distance;
    rec.violations = a.violations;
    rec.event_count = a.deliveries;
    for (const auto& k : a.elected) {
        if (k) {
            rec.elected = k;
            break;
        }
    }
    return result;
}

Summary summarize(const ExperimentConfig& cfg, const std::vector<RunRecord>& records)
{
    Summary s;
    s.trials = records.size();
    const std::vector<bool> faulty = fault_mask(cfg);
    for (const RunRecord& r : records) {
        bool everyone = true;
        for (std::size_t i = 0; i < r.terminated.size(); ++i) {
            if (!faulty[i] && !r.terminated[i]) everyone = false;
        }
        s.terminated += everyone ? 1 : 0;
        if (r.status == RunStatus::error) ++s.errors;
        if (r.expected_termination && !everyone) ++s.unexpected_nontermination;
        s.violations += r.violations.size();
        s.with_violations += r.violations.empty() ? 0 : 1;
        if (r.conditioned) {
            ++s.conditioned;
            s.max_pairwise_conditioned = std::max(s.max_pairwise_conditioned, r.max_pairwise);
            if (r.sender_distance) {
                s.max_sender_distance_conditioned = std::max(s.max_sender_distance_conditioned, *r.sender_distance);
            }
        }
    }
    s.min_slack_42 = 42.0 * cfg.delta - s.max_pairwise_conditioned;
    return s;
}

bool experiment_passed(const ExperimentConfig& cfg, const Summary& s)
{
    if (s.errors != 0) return false;
    if (cfg.violation_study()) return true;
    return s.violations == 0 && s.unexpected_nontermination == 0;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool keep_traces)
{
    cfg.validate();
    ExperimentResult out;
    out.config = cfg;
    out.records.resize(cfg.trials);
    if (keep_traces) out.traces.resize(cfg.trials);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cfg.trials; i = next++) {
            TrialResult r = run_trial(cfg, i);
            out.records[i] = std::move(r.record);
            if (keep_traces) out.traces[i] = std::move(r.trace);
        }
    };
    const std::size_t workers = std::min(cfg.threads, cfg.trials);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    out.summary = summarize(cfg, out.records);
    return out;
}

} // namespace rfa
