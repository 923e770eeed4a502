#pragma once

#include "rfa/ic_oracle.hpp"
#include "rfa/simnet.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rfa {

enum class FaultKind : std::uint8_t { silent, random_noise, equivocator, ready2_forcer, colluder };
enum class PolicyKind : std::uint8_t { fifo, random, lifo_per_instance, targeted_starvation, adaptive_splitter };

inline constexpr FaultKind kAllFaultKinds[] = {FaultKind::silent, FaultKind::random_noise, FaultKind::equivocator,
                                               FaultKind::ready2_forcer, FaultKind::colluder};
inline constexpr PolicyKind kAllPolicyKinds[] = {PolicyKind::fifo, PolicyKind::random, PolicyKind::lifo_per_instance,
                                                 PolicyKind::targeted_starvation, PolicyKind::adaptive_splitter};

std::string_view fault_kind_name(FaultKind k);
std::optional<FaultKind> parse_fault_kind(std::string_view s);
std::string_view policy_kind_name(PolicyKind k);
std::optional<PolicyKind> parse_policy_kind(std::string_view s);

/// State shared by all faulty nodes and the scheduler of one run. Correct nodes are split
/// into two groups (first half of the sorted ids is group A) that colluding strategies try
/// to push towards different directions.
class AdversaryMemory {
public:
    AdversaryMemory(std::size_t n, std::size_t t, std::vector<bool> faulty, std::size_t direction_instances,
                    double delta);

    /// Reads traffic not seen yet (the runtime passes the full public log every time).
    void ingest(std::span<const MessageEnvelope> traffic);

    std::size_t n() const { return n_; }
    std::size_t t() const { return t_; }
    double delta() const { return delta_; }
    std::size_t direction_instances() const { return observed_.size(); }
    bool faulty(NodeId id) const { return faulty_[id]; }
    const std::vector<NodeId>& group_a() const { return group_a_; }
    const std::vector<NodeId>& group_b() const { return group_b_; }
    bool in_group_a(NodeId id) const;
    std::vector<NodeId> correct_nodes() const;

    /// First direction (global) a correct node sent in this instance with tag init or echo.
    const std::optional<UnitVector>& observed(InstanceId instance) const { return observed_[instance]; }
    /// The second candidate direction colluders steer group B towards.
    std::optional<UnitVector> decoy(InstanceId instance) const;
    /// Chord separation between observed() and decoy().
    double decoy_chord() const { return 3.5 * delta_; }

private:
    std::size_t n_;
    std::size_t t_;
    std::vector<bool> faulty_;
    double delta_;
    std::vector<NodeId> group_a_;
    std::vector<NodeId> group_b_;
    std::vector<std::optional<UnitVector>> observed_;
    std::size_t cursor_ = 0;
};

struct FaultParams {
    std::int64_t qubits_per_axis = 20000;
    double spread_angle = 1.5707963267948966; // equivocator separation, radians
    std::size_t noise_cap = 0;                // 0: 4 * n * instances
    double noise_rate = 0.25;                 // chance per step of a noise envelope
};

/// Builds the behaviour of faulty node `self`. `sender_instances` lists the instances in
/// which this node is the designated sender.
std::unique_ptr<FaultyBehavior> make_fault(FaultKind kind, NodeId self, std::shared_ptr<AdversaryMemory> memory,
                                           std::vector<InstanceId> sender_instances, const FaultParams& params = {});

/// Scheduler policies. All honour SchedulerView::forced().
std::unique_ptr<SchedulerPolicy> make_policy(PolicyKind kind, std::shared_ptr<AdversaryMemory> memory);

/// Interactive-consistency behaviour matching a fault strategy.
std::shared_ptr<IcAdversary> make_ic_adversary(FaultKind kind, const std::vector<bool>& faulty);

/// Policy that starves every init envelope addressed to `victim` for as long as the
/// fairness bound allows.
class StarvationPolicy : public SchedulerPolicy {
public:
    explicit StarvationPolicy(NodeId victim) : victim_(victim) {}
    Decision choose(const SchedulerView& view, Rng& rng) override;
    std::string name() const override { return "targeted_starvation"; }

private:
    NodeId victim_;
};

} // namespace rfa
