#include "rfa/byzantine.hpp"

#include <stdexcept>

namespace rfa {

namespace {

class RandomPolicy : public SchedulerPolicy {
public:
    Decision choose(const SchedulerView& view, Rng& rng) override
    {
        if (auto f = view.forced()) return {*f, false};
        return {static_cast<std::size_t>(rng.below(view.size())), false};
    }
    std::string name() const override { return "random"; }
};

/// Newest envelope of the highest-numbered instance first.
class LifoPerInstance : public SchedulerPolicy {
public:
    Decision choose(const SchedulerView& view, Rng&) override
    {
        if (auto f = view.forced()) return {*f, false};
        std::size_t best = 0;
        for (std::size_t i = 1; i < view.size(); ++i) {
            if (view.envelope(i).instance >= view.envelope(best).instance) best = i;
        }
        return {best, false};
    }
    std::string name() const override { return "lifo_per_instance"; }
};

/// Delivers faulty traffic first, then everything bound for group A, then readies to
/// group B, then the rest, so the two groups see the run in very different orders.
class AdaptiveSplitter : public SchedulerPolicy {
public:
    explicit AdaptiveSplitter(std::shared_ptr<AdversaryMemory> memory) : mem_(std::move(memory)) {}

    Decision choose(const SchedulerView& view, Rng&) override
    {
        if (auto f = view.forced()) return {*f, false};
        std::size_t best = 0;
        int best_rank = 4;
        for (std::size_t i = 0; i < view.size() && best_rank > 0; ++i) {
            const int r = rank(view.envelope(i));
            if (r < best_rank) {
                best_rank = r;
                best = i;
            }
        }
        return {best, false};
    }
    std::string name() const override { return "adaptive_splitter"; }

private:
    int rank(const MessageEnvelope& env) const
    {
        if (mem_->faulty(env.sender)) return 0;
        if (mem_->faulty(env.receiver) || mem_->in_group_a(env.receiver)) return 1;
        if (env.classical_tag == Tag::ready1 || env.classical_tag == Tag::ready2) return 2;
        return 3;
    }

    std::shared_ptr<AdversaryMemory> mem_;
};

} // namespace

Decision StarvationPolicy::choose(const SchedulerView& view, Rng&)
{
    if (auto f = view.forced()) return {*f, false};
    for (std::size_t i = 0; i < view.size(); ++i) {
        const auto& env = view.envelope(i);
        if (!(env.receiver == victim_ && env.classical_tag == Tag::init)) return {i, false};
    }
    return {0, false};
}

std::string_view policy_kind_name(PolicyKind k)
{
    switch (k) {
    case PolicyKind::fifo: return "fifo";
    case PolicyKind::random: return "random";
    case PolicyKind::lifo_per_instance: return "lifo_per_instance";
    case PolicyKind::targeted_starvation: return "targeted_starvation";
    case PolicyKind::adaptive_splitter: return "adaptive_splitter";
    }
    return "?";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view s)
{
    for (PolicyKind k : kAllPolicyKinds) {
        if (policy_kind_name(k) == s) return k;
    }
    return std::nullopt;
}

std::unique_ptr<SchedulerPolicy> make_policy(PolicyKind kind, std::shared_ptr<AdversaryMemory> memory)
{
    switch (kind) {
    case PolicyKind::fifo: return std::make_unique<FifoPolicy>();
    case PolicyKind::random: return std::make_unique<RandomPolicy>();
    case PolicyKind::lifo_per_instance: return std::make_unique<LifoPerInstance>();
    case PolicyKind::targeted_starvation: {
        if (!memory) throw std::invalid_argument("targeted_starvation needs adversary memory");
        const auto correct = memory->correct_nodes();
        if (correct.empty()) throw std::invalid_argument("targeted_starvation: no correct node to starve");
        return std::make_unique<StarvationPolicy>(correct.back());
    }
    case PolicyKind::adaptive_splitter:
        if (!memory) throw std::invalid_argument("adaptive_splitter needs adversary memory");
        return std::make_unique<AdaptiveSplitter>(std::move(memory));
    }
    throw std::invalid_argument("make_policy: unknown kind");
}

} // namespace rfa
