#pragma once

#include "rfa/geometry.hpp"
#include "rfa/simnet.hpp"
#include "rfa/trace.hpp"

#include <optional>
#include <vector>

namespace rfa::testing {

/// Builds hand-made traces for monitor tests.
class TraceForge {
public:
    TraceForge(std::size_t n, std::size_t t, std::vector<bool> faulty, double delta = 0.02);

    TraceHeader& header() { return trace_.header; }

    /// Appends a send event and returns its msg id.
    std::uint64_t send(NodeId from, NodeId to, Tag tag, const UnitVector& dir, InstanceId instance = 0);
    /// Delivery with the receiver's estimate (global frame); value 1.
    void deliver(std::uint64_t msg_id, const std::optional<UnitVector>& estimate);
    void epoch(NodeId node, int value, Tag tag, const UnitVector& dir, InstanceId instance = 0);
    void output(NodeId node, const UnitVector& dir, InstanceId instance = 0);
    void end(RunStatus status);

    const EventTrace& trace() const { return trace_; }

private:
    EventTrace trace_;
    std::vector<std::pair<NodeId, NodeId>> routes_;
};

/// `base` moved along a fixed great circle until its chord distance to `base` is `chord`.
UnitVector at_chord(const UnitVector& base, double chord);

} // namespace rfa::testing
