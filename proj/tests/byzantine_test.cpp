#include "rfa/byzantine.hpp"
#include "rfa/experiment.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace rfa {
namespace {

constexpr double kDelta = 0.02;

std::vector<bool> mask(std::size_t n, std::initializer_list<NodeId> faulty)
{
    std::vector<bool> m(n, false);
    for (NodeId f : faulty) m[f] = true;
    return m;
}

ExperimentConfig sweep_config(FaultKind fault, PolicyKind policy, bool faulty_sender = false)
{
    ExperimentConfig cfg;
    cfg.fault = fault;
    cfg.scheduler = policy;
    cfg.faulty_sender = faulty_sender;
    return cfg;
}

std::vector<EventTrace> traces_of(const ExperimentConfig& cfg, std::size_t trials)
{
    std::vector<EventTrace> out;
    for (std::size_t i = 0; i < trials; ++i) out.push_back(run_trial(cfg, i).trace);
    return out;
}

/// Distinct global directions node `from` sent with `tag`.
std::vector<UnitVector> sent_directions(const EventTrace& trace, NodeId from, Tag tag)
{
    std::vector<UnitVector> out;
    for (const auto& ev : trace.events) {
        if (ev.kind != EventKind::send || ev.sender != from || ev.tag != tag || !ev.direction) continue;
        const UnitVector d(*ev.direction);
        if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
    }
    return out;
}

bool correct_node_sent(const EventTrace& trace, Tag tag, std::optional<NodeId> only = std::nullopt)
{
    for (const auto& ev : trace.events) {
        if (ev.kind != EventKind::epoch || ev.tag != tag) continue;
        if (trace.header.faulty[ev.receiver]) continue;
        if (!only || ev.receiver == *only) return true;
    }
    return false;
}

TEST(KindNamesTest, RoundTrip)
{
    for (FaultKind k : kAllFaultKinds) EXPECT_EQ(parse_fault_kind(fault_kind_name(k)), k);
    for (PolicyKind k : kAllPolicyKinds) EXPECT_EQ(parse_policy_kind(policy_kind_name(k)), k);
    EXPECT_FALSE(parse_fault_kind("byzantine"));
    EXPECT_FALSE(parse_policy_kind("lifo"));
}

TEST(AdversaryMemoryTest, SplitsCorrectNodesIntoTwoGroups)
{
    AdversaryMemory m(9, 2, mask(9, {0, 1}), 1, kDelta);
    EXPECT_EQ(m.group_a(), (std::vector<NodeId>{2, 3, 4, 5}));
    EXPECT_EQ(m.group_b(), (std::vector<NodeId>{6, 7, 8}));
    EXPECT_TRUE(m.in_group_a(3));
    EXPECT_FALSE(m.in_group_a(7));
    EXPECT_FALSE(m.in_group_a(0));
}

TEST(AdversaryMemoryTest, ObservesFirstCorrectDirectionAndPlacesDecoy)
{
    AdversaryMemory m(5, 1, mask(5, {4}), 2, kDelta);
    EXPECT_FALSE(m.observed(0));
    EXPECT_FALSE(m.decoy(0));

    std::vector<MessageEnvelope> traffic;
    MessageEnvelope faulty_echo{1, 4, 0, 0, Tag::echo, std::nullopt, QuantumPayload{UnitVector::x_axis(), 10, true}};
    MessageEnvelope ready{2, 1, 0, 0, Tag::ready1, std::nullopt, QuantumPayload{UnitVector::y_axis(), 10, false}};
    MessageEnvelope echo{3, 2, 0, 0, Tag::echo, std::nullopt, QuantumPayload{UnitVector::z_axis(), 10, false}};
    MessageEnvelope later{4, 3, 0, 0, Tag::echo, std::nullopt, QuantumPayload{UnitVector::y_axis(), 10, false}};
    traffic = {faulty_echo, ready};
    m.ingest(traffic);
    EXPECT_FALSE(m.observed(0));
    traffic.push_back(echo);
    traffic.push_back(later);
    m.ingest(traffic);
    ASSERT_TRUE(m.observed(0));
    EXPECT_EQ(*m.observed(0), UnitVector::z_axis());
    EXPECT_FALSE(m.observed(1));
    ASSERT_TRUE(m.decoy(0));
    EXPECT_NEAR(distance(*m.decoy(0), *m.observed(0)), 3.5 * kDelta, 1e-12);
}

TEST(FaultStrategyTest, SilentEmitsNothing)
{
    auto memory = std::make_shared<AdversaryMemory>(5, 1, mask(5, {0}), 1, kDelta);
    auto fault = make_fault(FaultKind::silent, 0, memory, {0});
    const std::vector<bool> faulty = mask(5, {0});
    Rng rng(1);
    AdversaryView view{0, 5, 1, &faulty, {}, 0};
    for (int i = 0; i < 10; ++i) EXPECT_TRUE(fault->on_event(view, rng).empty());
}

TEST(FaultStrategyTest, RandomNoiseIsWellFormedCappedAndDeterministic)
{
    const std::vector<bool> faulty = mask(6, {5});
    auto run = [&](std::uint64_t seed) {
        auto memory = std::make_shared<AdversaryMemory>(6, 1, faulty, 1, kDelta);
        auto fault = make_fault(FaultKind::random_noise, 5, memory, {});
        Rng rng(seed);
        AdversaryView view{5, 6, 1, &faulty, {}, 0};
        std::vector<MessageEnvelope> all;
        for (int i = 0; i < 1000; ++i) {
            for (auto& env : fault->on_event(view, rng)) all.push_back(env);
        }
        return all;
    };
    const auto a = run(7);
    const auto b = run(7);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.size(), 4u * 6u * 1u); // the default cap
    std::set<Tag> tags;
    for (auto env : a) {
        env.sender = 5;
        EXPECT_NO_THROW(validate_envelope(env, 6, 1));
        tags.insert(env.classical_tag);
    }
    EXPECT_GE(tags.size(), 3u);
    EXPECT_NE(a, run(8));
}

TEST(FaultStrategyTest, EquivocatingSenderSplitsInitByConfiguredAngle)
{
    const auto traces = traces_of(sweep_config(FaultKind::equivocator, PolicyKind::fifo, true), 3);
    for (const auto& tr : traces) {
        const auto inits = sent_directions(tr, 0, Tag::init);
        ASSERT_EQ(inits.size(), 2u);
        EXPECT_NEAR(distance(inits[0], inits[1]), std::sqrt(2.0), 1e-9);
    }
}

TEST(FaultStrategyTest, ColludingSenderSplitsInitByDecoyChord)
{
    const auto traces = traces_of(sweep_config(FaultKind::colluder, PolicyKind::fifo, true), 3);
    for (const auto& tr : traces) {
        const auto inits = sent_directions(tr, 0, Tag::init);
        ASSERT_EQ(inits.size(), 2u);
        EXPECT_NEAR(distance(inits[0], inits[1]), 3.5 * kDelta, 1e-9);
    }
}

TEST(FaultStrategyTest, ColludersFeedBothCandidatesInParticipantRoles)
{
    // Correct sender: faulty nodes 1 and 2 send every tag, group A and B see different values.
    const auto tr = run_trial(sweep_config(FaultKind::colluder, PolicyKind::fifo), 0).trace;
    for (NodeId f : {1u, 2u}) {
        for (Tag tag : {Tag::echo, Tag::ready1, Tag::ready2}) {
            const auto dirs = sent_directions(tr, f, tag);
            ASSERT_EQ(dirs.size(), 2u) << "node " << f << " tag " << tag_name(tag);
            EXPECT_NEAR(distance(dirs[0], dirs[1]), 3.5 * kDelta, 1e-9);
        }
    }
}

TEST(FaultStrategyTest, Ready2ForcerPushesCorrectNodesOntoReadyTwo)
{
    // The forcer's sender reaches only group A with its init; group B nodes must leave
    // epoch 1 through the joint condition.
    ExperimentConfig cfg = sweep_config(FaultKind::ready2_forcer, PolicyKind::adaptive_splitter);
    std::size_t hits = 0;
    for (const auto& tr : traces_of(cfg, 20)) hits += correct_node_sent(tr, Tag::ready2) ? 1 : 0;
    EXPECT_GT(hits, 0u);
    const auto pinned = run_trial(cfg, 0).trace;
    EXPECT_TRUE(correct_node_sent(pinned, Tag::ready2));
}

TEST(FaultStrategyTest, RandomNoiseReachesDuplicateAndUnexpectedPaths)
{
    const auto tr = run_trial(sweep_config(FaultKind::random_noise, PolicyKind::random), 0).trace;
    std::size_t duplicates = 0;
    std::size_t unexpected = 0;
    for (const auto& ev : tr.events) {
        if (ev.kind == EventKind::duplicate && tr.header.faulty[ev.sender]) ++duplicates;
        if (ev.kind == EventKind::unexpected && tr.header.faulty[ev.sender]) ++unexpected;
    }
    EXPECT_GT(duplicates, 0u);
    EXPECT_GT(unexpected, 0u);
}

TEST(SchedulerPolicyTest, StarvationVictimTakesReadyTwoPath)
{
    // With silent faulty nodes only n - t nodes echo, so nobody can send ready1 before the
    // victim echoes and the scheduler is eventually forced to hand it the init. Faulty
    // participants that echo the sender's direction break that dependency.
    ExperimentConfig cfg = sweep_config(FaultKind::ready2_forcer, PolicyKind::targeted_starvation);
    cfg.ideal_channel = true;
    for (const auto& tr : traces_of(cfg, 10)) {
        EXPECT_TRUE(correct_node_sent(tr, Tag::ready2, 8));
        EXPECT_FALSE(correct_node_sent(tr, Tag::echo, 8));
    }
    cfg.ideal_channel = false;
    std::size_t hits = 0;
    for (const auto& tr : traces_of(cfg, 20)) hits += correct_node_sent(tr, Tag::ready2, 8) ? 1 : 0;
    EXPECT_GE(hits, 15u);

    cfg = sweep_config(FaultKind::silent, PolicyKind::targeted_starvation);
    cfg.ideal_channel = true;
    for (const auto& tr : traces_of(cfg, 3)) EXPECT_TRUE(correct_node_sent(tr, Tag::echo, 8));
}

TEST(SchedulerPolicyTest, LifoPrefersNewestOfHighestInstance)
{
    auto memory = std::make_shared<AdversaryMemory>(4, 0, mask(4, {}), 3, kDelta);
    auto policy = make_policy(PolicyKind::lifo_per_instance, memory);
    std::vector<PendingEntry> pending;
    for (std::uint64_t id = 1; id <= 4; ++id) {
        MessageEnvelope env{id, 0, 1, static_cast<InstanceId>(id == 2 || id == 3 ? 2 : 0), Tag::echo, std::nullopt,
                            QuantumPayload{}};
        pending.push_back(PendingEntry{env, 0, true});
    }
    const std::vector<bool> faulty(4, false);
    SchedulerView view(pending, 0, 100, faulty);
    Rng rng(1);
    EXPECT_EQ(policy->choose(view, rng).index, 2u); // msg 3: instance 2, newest
}

TEST(SchedulerPolicyTest, EveryPolicyHonoursForcedEntry)
{
    auto memory = std::make_shared<AdversaryMemory>(4, 1, mask(4, {3}), 1, kDelta);
    std::vector<PendingEntry> pending;
    // msg 1 is faulty-origin (never forced); msg 2 is the oldest tracked entry.
    for (std::uint64_t id = 1; id <= 5; ++id) {
        MessageEnvelope env{id, id == 1 ? 3u : 0u, 1 + static_cast<NodeId>(id % 2), 0, Tag::echo, std::nullopt,
                            QuantumPayload{}};
        pending.push_back(PendingEntry{env, id <= 2 ? 0u : 90u, id != 1});
    }
    const std::vector<bool> faulty = mask(4, {3});
    SchedulerView view(pending, 100, 100, faulty);
    ASSERT_EQ(view.forced(), 1u);
    Rng rng(3);
    for (PolicyKind k : kAllPolicyKinds) {
        EXPECT_EQ(make_policy(k, memory)->choose(view, rng).index, 1u) << policy_kind_name(k);
    }
}

TEST(DeterminismTest, SameSeedSameEmissions)
{
    for (FaultKind f : kAllFaultKinds) {
        const auto cfg = sweep_config(f, PolicyKind::adaptive_splitter, f == FaultKind::equivocator);
        EXPECT_EQ(run_trial(cfg, 4).trace.to_jsonl(), run_trial(cfg, 4).trace.to_jsonl()) << fault_kind_name(f);
    }
}

TEST(SweepTest, NoStrategyBreaksTheRuntime)
{
    for (Mode mode : {Mode::arcast, Mode::agree}) {
        for (FaultKind f : kAllFaultKinds) {
            for (PolicyKind p : kAllPolicyKinds) {
                for (bool faulty_sender : {false, true}) {
                    if (mode == Mode::agree && faulty_sender) continue;
                    ExperimentConfig cfg = sweep_config(f, p, faulty_sender);
                    cfg.mode = mode;
                    cfg.trials = mode == Mode::agree ? 4 : 10;
                    cfg.master_seed = 1234;
                    cfg.threads = 4;
                    const auto res = run_experiment(cfg);
                    EXPECT_EQ(res.summary.errors, 0u)
                        << mode_name(mode) << ' ' << fault_kind_name(f) << ' ' << policy_kind_name(p)
                        << (res.summary.errors ? " first error: " + res.records.front().error : "");
                }
            }
        }
    }
}

TEST(SweepTest, RandomPolicyFiveHundredSeedsNoConditionedViolations)
{
    std::size_t conditioned = 0;
    for (FaultKind f : kAllFaultKinds) {
        ExperimentConfig cfg = sweep_config(f, PolicyKind::random);
        cfg.trials = 100;
        cfg.master_seed = 500;
        cfg.threads = 4;
        const auto res = run_experiment(cfg);
        conditioned += res.summary.conditioned;
        for (const auto& rec : res.records) {
            if (rec.conditioned) EXPECT_TRUE(rec.violations.empty()) << fault_kind_name(f) << " trial " << rec.trial;
        }
        EXPECT_EQ(res.summary.errors, 0u);
    }
    EXPECT_GT(conditioned, 100u);
}

} // namespace
} // namespace rfa
