#include "rfa/byzantine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rfa {

AdversaryMemory::AdversaryMemory(std::size_t n, std::size_t t, std::vector<bool> faulty,
                                 std::size_t direction_instances, double delta)
    : n_(n), t_(t), faulty_(std::move(faulty)), delta_(delta), observed_(direction_instances)
{
    if (faulty_.size() != n_) throw std::invalid_argument("AdversaryMemory: fault mask size");
    const auto correct = correct_nodes();
    const std::size_t half = (correct.size() + 1) / 2;
    group_a_.assign(correct.begin(), correct.begin() + static_cast<std::ptrdiff_t>(half));
    group_b_.assign(correct.begin() + static_cast<std::ptrdiff_t>(half), correct.end());
}

std::vector<NodeId> AdversaryMemory::correct_nodes() const
{
    std::vector<NodeId> out;
    for (NodeId i = 0; i < n_; ++i) {
        if (!faulty_[i]) out.push_back(i);
    }
    return out;
}

bool AdversaryMemory::in_group_a(NodeId id) const
{
    return std::binary_search(group_a_.begin(), group_a_.end(), id);
}

void AdversaryMemory::ingest(std::span<const MessageEnvelope> traffic)
{
    for (; cursor_ < traffic.size(); ++cursor_) {
        const MessageEnvelope& env = traffic[cursor_];
        if (faulty_[env.sender] || !env.quantum || env.instance >= observed_.size()) continue;
        if (env.classical_tag != Tag::init && env.classical_tag != Tag::echo) continue;
        if (!observed_[env.instance]) observed_[env.instance] = env.quantum->true_direction_global;
    }
}

std::optional<UnitVector> AdversaryMemory::decoy(InstanceId instance) const
{
    if (!observed_[instance]) return std::nullopt;
    const double angle = 2.0 * std::asin(decoy_chord() / 2.0);
    return rotate_away(*observed_[instance], angle);
}

} // namespace rfa
