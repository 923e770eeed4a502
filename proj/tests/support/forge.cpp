#include "support/forge.hpp"

#include <cmath>

namespace rfa::testing {

TraceForge::TraceForge(std::size_t n, std::size_t t, std::vector<bool> faulty, double delta)
{
    trace_.header.mode = "arcast";
    trace_.header.n = n;
    trace_.header.t = t;
    trace_.header.delta = delta;
    trace_.header.faulty = std::move(faulty);
    trace_.header.sender = 0;
    trace_.header.inputs = {std::nullopt};
    routes_.emplace_back(0, 0); // msg ids start at 1
}

std::uint64_t TraceForge::send(NodeId from, NodeId to, Tag tag, const UnitVector& dir, InstanceId instance)
{
    const std::uint64_t id = routes_.size();
    routes_.emplace_back(from, to);
    TraceEvent e;
    e.kind = EventKind::send;
    e.sender = from;
    e.receiver = to;
    e.tag = tag;
    e.instance = instance;
    e.msg_id = id;
    e.direction = dir.components();
    trace_.append(e);
    return id;
}

void TraceForge::deliver(std::uint64_t msg_id, const std::optional<UnitVector>& estimate)
{
    TraceEvent e;
    e.kind = EventKind::deliver;
    e.sender = routes_.at(msg_id).first;
    e.receiver = routes_.at(msg_id).second;
    e.msg_id = msg_id;
    e.value = 1;
    if (estimate) e.estimate = estimate->components();
    trace_.append(e);
}

void TraceForge::epoch(NodeId node, int value, Tag tag, const UnitVector& dir, InstanceId instance)
{
    TraceEvent e;
    e.kind = EventKind::epoch;
    e.sender = node;
    e.receiver = node;
    e.tag = tag;
    e.instance = instance;
    e.value = value;
    e.direction = dir.components();
    trace_.append(e);
}

void TraceForge::output(NodeId node, const UnitVector& dir, InstanceId instance)
{
    TraceEvent e;
    e.kind = EventKind::output;
    e.sender = node;
    e.receiver = node;
    e.instance = instance;
    e.direction = dir.components();
    trace_.append(e);
}

void TraceForge::end(RunStatus status)
{
    TraceEvent e;
    e.kind = EventKind::end;
    e.value = static_cast<std::int64_t>(status);
    trace_.append(e);
}

UnitVector at_chord(const UnitVector& base, double chord)
{
    return rotate_away(base, 2.0 * std::asin(chord / 2.0));
}

} // namespace rfa::testing
