#include "rfa/experiment.hpp"
#include "rfa/monitor.hpp"

#include "support/forge.hpp"

#include <gtest/gtest.h>

#include <fstream>

namespace rfa {
namespace {

using testing::at_chord;
using testing::TraceForge;

constexpr double kDelta = 0.02;

std::vector<std::string> checks_of(const EventTrace& trace)
{
    std::vector<std::string> out;
    for (const auto& v : monitor_trace(trace)) out.push_back(v.check);
    return out;
}

/// n = 5, t = 1, faulty sender 0: no termination or correctness obligations.
TraceForge faulty_sender_forge()
{
    return TraceForge(5, 1, {true, false, false, false, false}, kDelta);
}

const UnitVector kBase = UnitVector::normalized(0.2, -0.3, 0.9);

TEST(MonitorFixtureTest, ReadyOneOneTooFarApart)
{
    TraceForge f = faulty_sender_forge();
    f.send(1, 3, Tag::ready1, kBase);
    f.send(2, 3, Tag::ready1, at_chord(kBase, 10.5 * kDelta));
    f.end(RunStatus::predicate);
    EXPECT_EQ(checks_of(f.trace()), (std::vector<std::string>{"L-ready11"}));
}

TEST(MonitorFixtureTest, ReadyOneTwoTooFarApart)
{
    TraceForge f = faulty_sender_forge();
    f.send(1, 3, Tag::ready1, kBase);
    f.send(2, 3, Tag::ready2, at_chord(kBase, 10.5 * kDelta));
    f.end(RunStatus::predicate);
    EXPECT_EQ(checks_of(f.trace()), (std::vector<std::string>{"L-ready12"}));
}

TEST(MonitorFixtureTest, ReadyTwoWithoutEarlierReadyOne)
{
    TraceForge f = faulty_sender_forge();
    f.send(2, 3, Tag::ready2, kBase);
    f.send(1, 3, Tag::ready1, kBase);
    f.end(RunStatus::predicate);
    const auto violations = monitor_trace(f.trace());
    ASSERT_EQ(violations.size(), 1u);
    EXPECT_EQ(violations[0].check, "L-causal");
    EXPECT_EQ(violations[0].event_index, 0u);
}

TEST(MonitorFixtureTest, ReadyTwoTwoTooFarApart)
{
    // X: ready1 w then ready2 u; Y: ready2 v. d(w, v) = 5 delta keeps the mixed pair legal,
    // d(u, v) = 21 delta breaks the ready2 pair. X's own pair is never compared.
    const UnitVector v = kBase;
    const UnitVector w = at_chord(v, 5 * kDelta);
    const UnitVector u = at_chord(v, 21 * kDelta);
    TraceForge f = faulty_sender_forge();
    f.send(1, 2, Tag::ready1, w);
    f.send(1, 2, Tag::ready2, u);
    f.send(3, 2, Tag::ready2, v);
    f.end(RunStatus::predicate);
    EXPECT_EQ(checks_of(f.trace()), (std::vector<std::string>{"L-ready22"}));
}

TEST(MonitorFixtureTest, CheckedFixtureFileHasOneCausalViolation)
{
    std::ifstream in(std::string(RFA_FIXTURE_DIR) + "/forged_causal.jsonl");
    ASSERT_TRUE(in);
    const auto traces = read_traces(in);
    ASSERT_EQ(traces.size(), 1u);
    EXPECT_EQ(checks_of(traces[0]), (std::vector<std::string>{"L-causal"}));
}

TEST(MonitorFixtureTest, DistanceLemmasOnlyOnConditionedTraces)
{
    TraceForge f = faulty_sender_forge();
    const auto id = f.send(1, 2, Tag::echo, kBase);
    f.deliver(id, at_chord(kBase, 1.5 * kDelta)); // a missed link
    f.send(1, 3, Tag::ready1, kBase);
    f.send(2, 3, Tag::ready1, at_chord(kBase, 15 * kDelta));
    f.end(RunStatus::predicate);
    const TraceAnalysis a = analyze_trace(f.trace());
    EXPECT_FALSE(a.conditioned);
    EXPECT_EQ(a.link_estimates, 1u);
    EXPECT_EQ(a.link_misses, 1u);
    EXPECT_TRUE(a.violations.empty());
}

TEST(MonitorFixtureTest, CausalCheckRunsOnEveryTrace)
{
    TraceForge f = faulty_sender_forge();
    const auto id = f.send(1, 2, Tag::echo, kBase);
    f.deliver(id, at_chord(kBase, 1.5 * kDelta));
    f.send(2, 3, Tag::ready2, kBase);
    f.end(RunStatus::predicate);
    EXPECT_EQ(checks_of(f.trace()), (std::vector<std::string>{"L-causal"}));
}

TEST(MonitorFixtureTest, FaultyReadiesAreIgnored)
{
    TraceForge f = faulty_sender_forge();
    f.send(0, 3, Tag::ready2, kBase);
    f.send(1, 3, Tag::ready1, at_chord(kBase, 30 * kDelta));
    f.end(RunStatus::predicate);
    EXPECT_TRUE(monitor_trace(f.trace()).empty());
}

TEST(MonitorStructureTest, EpochAndOutputRules)
{
    TraceForge f = faulty_sender_forge();
    f.epoch(1, 2, Tag::echo, kBase);
    f.epoch(1, 2, Tag::ready2, kBase); // not an increase
    f.epoch(2, 3, Tag::ready1, kBase); // ready1 with no epoch 2 before it
    f.output(3, kBase);
    f.output(3, kBase);
    f.end(RunStatus::predicate);
    EXPECT_EQ(checks_of(f.trace()),
              (std::vector<std::string>{"epoch-monotonic", "ready1-from-epoch1", "single-output"}));
}

TEST(MonitorStructureTest, DeliveryOfUnsentMessage)
{
    TraceForge f = faulty_sender_forge();
    EventTrace t = f.trace();
    TraceEvent ghost;
    ghost.kind = EventKind::deliver;
    ghost.sender = 1;
    ghost.receiver = 2;
    ghost.msg_id = 44;
    t.append(ghost);
    TraceEvent end;
    end.kind = EventKind::end;
    t.append(end);
    EXPECT_EQ(checks_of(t), (std::vector<std::string>{"authentication"}));
}

TEST(MonitorStructureTest, QuiescentRunMustDeliverCorrectTraffic)
{
    TraceForge f = faulty_sender_forge();
    f.send(1, 2, Tag::echo, kBase);
    f.send(0, 2, Tag::echo, kBase); // faulty origin: may vanish
    f.end(RunStatus::quiescent);
    EXPECT_EQ(checks_of(f.trace()), (std::vector<std::string>{"eventual-delivery"}));
    TraceForge g = faulty_sender_forge();
    g.send(1, 2, Tag::echo, kBase);
    g.end(RunStatus::timeout);
    EXPECT_TRUE(monitor_trace(g.trace()).empty());
}

TEST(MonitorOutcomeTest, CorrectSenderObligations)
{
    TraceForge f(4, 0, {false, false, false, false}, kDelta);
    f.header().inputs = {kBase.components()};
    f.output(0, at_chord(kBase, 15 * kDelta));
    f.output(1, kBase);
    f.end(RunStatus::timeout);
    const TraceAnalysis a = analyze_trace(f.trace());
    EXPECT_EQ(a.terminated_count, 2u);
    EXPECT_FALSE(a.all_correct_terminated());
    ASSERT_TRUE(a.sender_distance);
    EXPECT_NEAR(*a.sender_distance, 15 * kDelta, 1e-12);
    std::vector<std::string> checks;
    for (const auto& v : a.violations) checks.push_back(v.check);
    EXPECT_EQ(checks, (std::vector<std::string>{"termination-1", "correctness"}));
}

TEST(MonitorOutcomeTest, ConsistencyAndTerminationTwo)
{
    TraceForge f = faulty_sender_forge();
    f.output(1, kBase);
    f.output(2, at_chord(kBase, 43 * kDelta));
    f.end(RunStatus::quiescent);
    const TraceAnalysis a = analyze_trace(f.trace());
    EXPECT_NEAR(a.max_pairwise, 43 * kDelta, 1e-12);
    std::vector<std::string> checks;
    for (const auto& v : a.violations) checks.push_back(v.check);
    EXPECT_EQ(checks, (std::vector<std::string>{"consistency", "termination-2"}));
}

TEST(MonitorOutcomeTest, FaultySenderWithoutOutputsOwesNothing)
{
    TraceForge f = faulty_sender_forge();
    f.end(RunStatus::quiescent);
    const TraceAnalysis a = analyze_trace(f.trace());
    EXPECT_TRUE(a.violations.empty());
    EXPECT_EQ(a.status, RunStatus::quiescent);
}

TEST(MonitorOutcomeTest, MissingEndMeansError)
{
    TraceForge f = faulty_sender_forge();
    EXPECT_EQ(analyze_trace(f.trace()).status, RunStatus::error);
}

TEST(MonitorRunTest, FaultFreeIdealTraceIsClean)
{
    ExperimentConfig cfg;
    cfg.n = 4;
    cfg.t = 0;
    cfg.ideal_channel = true;
    for (Mode mode : {Mode::arcast, Mode::agree}) {
        cfg.mode = mode;
        for (std::size_t trial = 0; trial < 5; ++trial) {
            const TrialResult r = run_trial(cfg, trial);
            const TraceAnalysis a = analyze_trace(r.trace);
            EXPECT_TRUE(a.violations.empty()) << mode_name(mode);
            EXPECT_TRUE(a.conditioned);
            EXPECT_TRUE(a.all_correct_terminated());
            EXPECT_EQ(a.status, RunStatus::predicate);
        }
    }
}

TEST(MonitorRunTest, AgreementElectionMismatchIsFlagged)
{
    ExperimentConfig cfg;
    cfg.mode = Mode::agree;
    cfg.n = 4;
    cfg.t = 0;
    cfg.ideal_channel = true;
    EventTrace trace = run_trial(cfg, 0).trace;
    bool changed = false;
    for (auto& ev : trace.events) {
        if (ev.kind == EventKind::elect && ev.sender == 3) {
            ev.value += 1;
            changed = true;
        }
    }
    ASSERT_TRUE(changed);
    EXPECT_EQ(checks_of(trace), (std::vector<std::string>{"election"}));
}

} // namespace
} // namespace rfa
