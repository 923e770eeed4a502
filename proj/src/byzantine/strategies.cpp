#include "rfa/byzantine.hpp"

#include <cmath>
#include <stdexcept>

namespace rfa {

namespace {

constexpr Tag kDirectionTags[] = {Tag::init, Tag::echo, Tag::ready1, Tag::ready2};

class StrategyBase : public FaultyBehavior {
public:
    StrategyBase(NodeId self, std::shared_ptr<AdversaryMemory> memory, std::vector<InstanceId> sender_instances,
                 const FaultParams& params)
        : self_(self), mem_(std::move(memory)), sender_instances_(std::move(sender_instances)), params_(params),
          instance_done_(mem_->direction_instances(), false)
    {
    }

    std::vector<MessageEnvelope> on_event(const AdversaryView& view, Rng& rng) override
    {
        mem_->ingest(view.traffic);
        std::vector<MessageEnvelope> out;
        act(rng, out);
        return out;
    }

protected:
    virtual void act(Rng& rng, std::vector<MessageEnvelope>& out) = 0;

    MessageEnvelope make(NodeId receiver, InstanceId instance, Tag tag, const UnitVector& global) const
    {
        MessageEnvelope env;
        env.sender = self_;
        env.receiver = receiver;
        env.instance = instance;
        env.classical_tag = tag;
        env.quantum = QuantumPayload{global, params_.qubits_per_axis, true};
        return env;
    }

    /// Sends `to_a` to group A and `to_b` to group B.
    void split(InstanceId instance, Tag tag, const UnitVector& to_a, const UnitVector& to_b,
               std::vector<MessageEnvelope>& out) const
    {
        for (NodeId r : mem_->group_a()) out.push_back(make(r, instance, tag, to_a));
        for (NodeId r : mem_->group_b()) out.push_back(make(r, instance, tag, to_b));
    }

    /// Runs `fn(instance, observed)` once per instance, as soon as a correct direction
    /// has been observed there.
    template <typename Fn>
    void once_observed(Fn&& fn)
    {
        for (InstanceId i = 0; i < instance_done_.size(); ++i) {
            if (instance_done_[i] || !mem_->observed(i)) continue;
            instance_done_[i] = true;
            fn(i, *mem_->observed(i));
        }
    }

    double separation_angle_for_chord(double chord) const { return 2.0 * std::asin(std::min(1.0, chord / 2.0)); }

    NodeId self_;
    std::shared_ptr<AdversaryMemory> mem_;
    std::vector<InstanceId> sender_instances_;
    FaultParams params_;
    std::vector<bool> instance_done_;
    bool opened_ = false;
};

class Silent : public StrategyBase {
public:
    using StrategyBase::StrategyBase;

protected:
    void act(Rng&, std::vector<MessageEnvelope>&) override {}
};

class RandomNoise : public StrategyBase {
public:
    using StrategyBase::StrategyBase;

protected:
    void act(Rng& rng, std::vector<MessageEnvelope>& out) override
    {
        const std::size_t n = mem_->n();
        const std::size_t cap =
            params_.noise_cap != 0 ? params_.noise_cap : 4 * n * mem_->direction_instances();
        if (emitted_ >= cap || n < 2 || !rng.chance(params_.noise_rate)) return;
        auto receiver = static_cast<NodeId>(rng.below(n - 1));
        if (receiver >= self_) ++receiver;
        const auto instance = static_cast<InstanceId>(rng.below(mem_->direction_instances()));
        const Tag tag = kDirectionTags[rng.below(4)];
        out.push_back(make(receiver, instance, tag, random_unit_vector(rng)));
        ++emitted_;
    }

private:
    std::size_t emitted_ = 0;
};

class Equivocator : public StrategyBase {
public:
    using StrategyBase::StrategyBase;

protected:
    void act(Rng& rng, std::vector<MessageEnvelope>& out) override
    {
        const double spread = params_.spread_angle;
        if (!opened_) {
            opened_ = true;
            for (InstanceId i : sender_instances_) {
                const UnitVector base = random_unit_vector(rng);
                split(i, Tag::init, base, rotate_away(base, spread), out);
            }
        }
        once_observed([&](InstanceId i, const UnitVector& d) {
            const UnitVector other = rotate_away(d, spread);
            for (Tag tag : {Tag::echo, Tag::ready1, Tag::ready2}) split(i, tag, d, other, out);
        });
    }
};

class Ready2Forcer : public StrategyBase {
public:
    using StrategyBase::StrategyBase;

protected:
    void act(Rng& rng, std::vector<MessageEnvelope>& out) override
    {
        if (!opened_) {
            opened_ = true;
            for (InstanceId i : sender_instances_) {
                const UnitVector base = random_unit_vector(rng);
                for (NodeId r : mem_->group_a()) out.push_back(make(r, i, Tag::init, base));
            }
        }
        once_observed([&](InstanceId i, const UnitVector& d) {
            for (Tag tag : {Tag::echo, Tag::ready1}) split(i, tag, d, d, out);
        });
    }
};

class Colluder : public StrategyBase {
public:
    using StrategyBase::StrategyBase;

protected:
    void act(Rng& rng, std::vector<MessageEnvelope>& out) override
    {
        const double angle = separation_angle_for_chord(mem_->decoy_chord());
        if (!opened_) {
            opened_ = true;
            for (InstanceId i : sender_instances_) {
                const UnitVector base = random_unit_vector(rng);
                split(i, Tag::init, base, rotate_away(base, angle), out);
            }
        }
        once_observed([&](InstanceId i, const UnitVector& d) {
            const UnitVector other = *mem_->decoy(i);
            for (Tag tag : {Tag::echo, Tag::ready1, Tag::ready2}) split(i, tag, d, other, out);
        });
    }
};

} // namespace

std::string_view fault_kind_name(FaultKind k)
{
    switch (k) {
    case FaultKind::silent: return "silent";
    case FaultKind::random_noise: return "random_noise";
    case FaultKind::equivocator: return "equivocator";
    case FaultKind::ready2_forcer: return "ready2_forcer";
    case FaultKind::colluder: return "colluder";
    }
    return "?";
}

std::optional<FaultKind> parse_fault_kind(std::string_view s)
{
    for (FaultKind k : kAllFaultKinds) {
        if (fault_kind_name(k) == s) return k;
    }
    return std::nullopt;
}

std::unique_ptr<FaultyBehavior> make_fault(FaultKind kind, NodeId self, std::shared_ptr<AdversaryMemory> memory,
                                           std::vector<InstanceId> sender_instances, const FaultParams& params)
{
    if (!memory) throw std::invalid_argument("make_fault: adversary memory required");
    switch (kind) {
    case FaultKind::silent:
        return std::make_unique<Silent>(self, std::move(memory), std::move(sender_instances), params);
    case FaultKind::random_noise:
        return std::make_unique<RandomNoise>(self, std::move(memory), std::move(sender_instances), params);
    case FaultKind::equivocator:
        return std::make_unique<Equivocator>(self, std::move(memory), std::move(sender_instances), params);
    case FaultKind::ready2_forcer:
        return std::make_unique<Ready2Forcer>(self, std::move(memory), std::move(sender_instances), params);
    case FaultKind::colluder:
        return std::make_unique<Colluder>(self, std::move(memory), std::move(sender_instances), params);
    }
    throw std::invalid_argument("make_fault: unknown kind");
}

std::shared_ptr<IcAdversary> make_ic_adversary(FaultKind kind, const std::vector<bool>& faulty)
{
    FaultyRowStyle style = FaultyRowStyle::zeros;
    switch (kind) {
    case FaultKind::silent: style = FaultyRowStyle::zeros; break;
    case FaultKind::random_noise: style = FaultyRowStyle::random; break;
    case FaultKind::equivocator:
    case FaultKind::ready2_forcer: style = FaultyRowStyle::ones; break;
    case FaultKind::colluder: style = FaultyRowStyle::ones_on_faulty; break;
    }
    return std::make_shared<SimpleIcAdversary>(style, faulty);
}

} // namespace rfa
