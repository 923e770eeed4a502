#pragma once

#include "rfa/geometry.hpp"
#include "rfa/tags.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rfa {

inline constexpr const char* kTraceSchema = "rfa-trace/1";

enum class EventKind : std::uint8_t {
    send,            // envelope entered the pending set
    deliver,         // envelope handed to its receiver (value 1) or discarded unprocessed (value 0)
    self_deliver,    // exact local copy of a node's own broadcast
    drop,            // scheduler dropped a faulty-origin envelope
    duplicate,       // receiver already held (origin, tag) for this instance
    unexpected,      // tag not accepted by this instance
    epoch,           // value = new epoch
    output,          // direction = output, global frame
    abort,           // node stopped an incomplete instance
    ic_submit,       // bits = submitted row
    ic_result,       // bits = flattened matrix
    elect,           // value = elected column
    channel_failure, // estimator fell back to the +z axis
    end,             // value = RunStatus code, bits = error text if any
};

std::string_view event_kind_name(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view s);

/// One line of an EventTrace. Node-local events use sender = receiver = the node.
struct TraceEvent {
    std::uint64_t index = 0;
    EventKind kind = EventKind::send;
    NodeId sender = 0;
    NodeId receiver = 0;
    std::optional<Tag> tag;
    InstanceId instance = 0;
    std::uint64_t msg_id = 0;
    std::uint64_t digest = 0;
    std::optional<Vec3> direction; // global frame
    std::optional<Vec3> estimate;  // receiver's estimate, global frame
    std::int64_t value = 0;
    std::string bits;

    bool operator==(const TraceEvent&) const = default;
};

/// Ground truth the monitor needs; written as the first line of every trace.
struct TraceHeader {
    std::string mode = "custom"; // "arcast", "agree" or "custom"
    std::size_t n = 0;
    std::size_t t = 0;
    double delta = 0.02;
    std::int64_t qubits_per_axis = 0;
    bool ideal_channel = false;
    std::optional<NodeId> sender; // arcast only
    std::vector<bool> faulty;
    std::vector<std::optional<Vec3>> inputs; // per instance: the sender's input in the global frame
    std::string ic_mode;
    std::string strategy;
    std::string scheduler;
    std::uint64_t seed = 0;
    bool violation_study = false;

    bool operator==(const TraceHeader&) const = default;
};

struct EventTrace {
    TraceHeader header;
    std::vector<TraceEvent> events;

    TraceEvent& append(TraceEvent ev);
    void write_jsonl(std::ostream& out) const;
    std::string to_jsonl() const;
    bool operator==(const EventTrace&) const = default;
};

/// Parses one or more traces (each starts at a header line) from line-delimited JSON.
std::vector<EventTrace> read_traces(std::istream& in);

std::string hex_digest(std::uint64_t d);

} // namespace rfa
