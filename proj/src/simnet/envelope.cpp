#include "rfa/simnet.hpp"

#include <bit>
#include <cstring>

namespace rfa {

void validate_envelope(const MessageEnvelope& env, std::size_t n, std::size_t instance_count)
{
    if (env.sender >= n || env.receiver >= n) throw MalformedEnvelope("envelope node id out of range");
    if (env.instance >= instance_count) throw MalformedEnvelope("envelope instance out of range");
    const bool direction_tag = is_direction_tag(env.classical_tag);
    if (direction_tag && (!env.quantum || env.classical_bits)) {
        throw MalformedEnvelope("direction-tagged envelope must carry exactly a quantum payload");
    }
    if (!direction_tag && (env.quantum || !env.classical_bits)) {
        throw MalformedEnvelope("ic_payload envelope must carry exactly a classical bit string");
    }
    if (env.quantum && env.quantum->qubits_per_axis < 1) throw MalformedEnvelope("quantum payload without qubits");
    if (env.classical_bits) {
        for (char c : *env.classical_bits) {
            if (c != '0' && c != '1') throw MalformedEnvelope("classical bits must be '0'/'1'");
        }
    }
}

namespace {

struct Fnv {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    void byte(unsigned char b)
    {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    void u64(std::uint64_t v)
    {
        for (int i = 0; i < 8; ++i) byte(static_cast<unsigned char>(v >> (8 * i)));
    }
};

} // namespace

std::uint64_t payload_digest(const MessageEnvelope& env)
{
    Fnv f;
    f.byte(static_cast<unsigned char>(env.classical_tag));
    if (env.quantum) {
        for (double c : env.quantum->true_direction_global.components()) f.u64(std::bit_cast<std::uint64_t>(c));
        f.u64(static_cast<std::uint64_t>(env.quantum->qubits_per_axis));
    }
    if (env.classical_bits) {
        for (char c : *env.classical_bits) f.byte(static_cast<unsigned char>(c));
    }
    return f.h;
}

SchedulerView::SchedulerView(std::span<const PendingEntry> pending, std::uint64_t free_events,
                             std::uint64_t fairness_bound, const std::vector<bool>& faulty)
    : pending_(pending), free_events_(free_events), bound_(fairness_bound), faulty_(&faulty)
{
    // enqueued_at is non-decreasing along the pending vector, so the first tracked entry
    // carries the largest skip count.
    for (std::size_t i = 0; i < pending_.size(); ++i) {
        if (pending_[i].tracked) {
            if (skips(i) >= bound_) forced_ = i;
            break;
        }
    }
}

Decision FifoPolicy::choose(const SchedulerView& view, Rng&)
{
    return {view.forced().value_or(0), false};
}

std::string_view run_status_name(RunStatus s)
{
    switch (s) {
    case RunStatus::predicate: return "predicate";
    case RunStatus::quiescent: return "quiescent";
    case RunStatus::timeout: return "timeout";
    case RunStatus::error: return "error";
    }
    return "?";
}

} // namespace rfa
