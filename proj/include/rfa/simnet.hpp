#pragma once

#include "rfa/estimation.hpp"
#include "rfa/geometry.hpp"
#include "rfa/rng.hpp"
#include "rfa/tags.hpp"
#include "rfa/trace.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rfa {

class MalformedEnvelope : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FairnessViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The CQ-channel unit: classical tag plus either a quantum direction payload or, for
/// interactive-consistency traffic, a classical bit string. Delivered atomically.
struct MessageEnvelope {
    std::uint64_t msg_id = 0;
    NodeId sender = 0;
    NodeId receiver = 0;
    InstanceId instance = 0;
    Tag classical_tag = Tag::init;
    std::optional<std::string> classical_bits;
    std::optional<QuantumPayload> quantum;

    bool operator==(const MessageEnvelope&) const = default;
};

/// Throws MalformedEnvelope on out-of-range ids or a payload that does not match the tag.
void validate_envelope(const MessageEnvelope& env, std::size_t n, std::size_t instance_count);

/// FNV-1a over the payload (direction bit patterns, qubit count, or the bit string).
std::uint64_t payload_digest(const MessageEnvelope& env);

// ---------------------------------------------------------------------------------------
// State-machine hooks

/// What a correct node's state machine sees on delivery. Directions are already
/// estimated and expressed in the node's local frame.
struct Inbound {
    NodeId origin = 0;
    InstanceId instance = 0;
    Tag tag = Tag::init;
    std::optional<UnitVector> direction;
    std::optional<std::string> bits;
};

/// Send-to-all of one tagged direction (local frame), self included.
struct Broadcast {
    InstanceId instance = 0;
    Tag tag = Tag::init;
    UnitVector direction = UnitVector::z_axis();
};

/// Protocol-level events a state machine reports to the trace.
struct Note {
    EventKind kind = EventKind::epoch;
    InstanceId instance = 0;
    std::int64_t value = 0;
    std::optional<Tag> tag;
    std::optional<UnitVector> direction; // local frame
    NodeId origin = 0;
    std::string bits;
};

struct Effects {
    std::vector<Broadcast> broadcasts;
    std::vector<Note> notes;
    std::optional<std::string> ic_input;
};

class ProtocolNode {
public:
    virtual ~ProtocolNode() = default;
    virtual void on_start(Effects& fx) = 0;
    virtual void on_deliver(const Inbound& msg, Effects& fx) = 0;
    /// Whether a delivery for (instance, tag) would be processed; quantum payloads are
    /// only measured when it would.
    virtual bool listening(InstanceId instance, Tag tag) const = 0;
    virtual std::optional<UnitVector> output() const = 0;
};

// ---------------------------------------------------------------------------------------
// Adversary hooks

/// Everything a faulty node may look at: all public traffic so far, contents included.
struct AdversaryView {
    NodeId self = 0;
    std::size_t n = 0;
    std::size_t instance_count = 0;
    const std::vector<bool>* faulty = nullptr;
    std::span<const MessageEnvelope> traffic;
    std::uint64_t events = 0;
};

/// Replaces a faulty node's state machine. Called once per scheduler step; the runtime
/// stamps the true sender id on everything returned.
class FaultyBehavior {
public:
    virtual ~FaultyBehavior() = default;
    virtual std::vector<MessageEnvelope> on_event(const AdversaryView& view, Rng& rng) = 0;
};

struct PendingEntry {
    MessageEnvelope env;
    std::uint64_t enqueued_at = 0; // free-event counter at enqueue time
    bool tracked = false;          // correct -> correct, subject to the fairness bound
};

/// Read-only view handed to the scheduler policy.
class SchedulerView {
public:
    SchedulerView(std::span<const PendingEntry> pending, std::uint64_t free_events, std::uint64_t fairness_bound,
                  const std::vector<bool>& faulty);

    std::span<const PendingEntry> pending() const { return pending_; }
    std::size_t size() const { return pending_.size(); }
    const MessageEnvelope& envelope(std::size_t i) const { return pending_[i].env; }
    std::uint64_t skips(std::size_t i) const { return free_events_ - pending_[i].enqueued_at; }
    bool overdue(std::size_t i) const { return pending_[i].tracked && skips(i) >= bound_; }
    /// Oldest overdue entry. When set, the policy must pick an overdue entry.
    std::optional<std::size_t> forced() const { return forced_; }
    bool faulty(NodeId id) const { return (*faulty_)[id]; }
    std::size_t node_count() const { return faulty_->size(); }
    std::uint64_t fairness_bound() const { return bound_; }

private:
    std::span<const PendingEntry> pending_;
    std::uint64_t free_events_;
    std::uint64_t bound_;
    const std::vector<bool>* faulty_;
    std::optional<std::size_t> forced_;
};

struct Decision {
    std::size_t index = 0;
    bool drop = false; // only legal for faulty-origin envelopes
};

class SchedulerPolicy {
public:
    virtual ~SchedulerPolicy() = default;
    virtual Decision choose(const SchedulerView& view, Rng& rng) = 0;
    virtual std::string name() const = 0;
};

/// Delivers in msg_id order.
class FifoPolicy : public SchedulerPolicy {
public:
    Decision choose(const SchedulerView& view, Rng& rng) override;
    std::string name() const override { return "fifo"; }
};

// ---------------------------------------------------------------------------------------
// Event loop

struct NetworkConfig {
    std::size_t n = 0;
    std::size_t instance_count = 1;
    EstimationConfig estimation;
    std::uint64_t fairness_bound = 10000;
};

enum class RunStatus : std::uint8_t { predicate = 0, quiescent = 1, timeout = 2, error = 3 };
std::string_view run_status_name(RunStatus s);

enum class StepOutcome : std::uint8_t { delivered, dropped, quiescent };

/// Receives a node's interactive-consistency input; returns envelopes to enqueue (the
/// common result, one per node, once the oracle completes).
using IcSink = std::function<std::vector<MessageEnvelope>(NodeId, const std::string&)>;

class Network {
public:
    /// Throws ConfigError for an empty network or mismatched frame / fault vectors.
    Network(NetworkConfig cfg, std::vector<LocalFrame> frames, std::vector<bool> faulty, std::uint64_t seed);

    void attach_protocol(NodeId node, std::unique_ptr<ProtocolNode> protocol);
    void attach_fault(NodeId node, std::unique_ptr<FaultyBehavior> behavior);
    void set_scheduler(std::unique_ptr<SchedulerPolicy> policy);
    void set_ic_sink(IcSink sink) { ic_sink_ = std::move(sink); }

    /// Runs on_start of every correct node, in id order. Called implicitly by step().
    void start();

    /// Enqueues `env` with its sender field overwritten by `true_sender`.
    void send(MessageEnvelope env, NodeId true_sender);

    StepOutcome step();
    RunStatus run_until(const std::function<bool(const Network&)>& predicate, std::uint64_t max_events);

    std::size_t n() const { return cfg_.n; }
    const NetworkConfig& config() const { return cfg_; }
    bool faulty(NodeId id) const { return faulty_[id]; }
    const std::vector<bool>& faulty_mask() const { return faulty_; }
    const LocalFrame& frame(NodeId id) const { return frames_[id]; }
    const ProtocolNode* protocol(NodeId id) const { return protocols_[id].get(); }
    std::span<const PendingEntry> pending() const { return pending_; }
    std::span<const MessageEnvelope> traffic() const { return traffic_; }
    std::uint64_t events() const { return events_; }
    std::uint64_t delivered_count() const { return delivered_; }

    EventTrace& trace() { return trace_; }
    const EventTrace& trace() const { return trace_; }
    void note_end(RunStatus status, const std::string& detail = {});

private:
    void deliver(const MessageEnvelope& env);
    void run_protocol(NodeId node, Inbound msg);
    void apply_effects(NodeId node, Effects& fx, std::vector<std::pair<NodeId, Inbound>>& work);
    void drain(std::vector<std::pair<NodeId, Inbound>>& work, std::size_t first_self);
    std::optional<Vec3> global_of(NodeId node, const std::optional<UnitVector>& local) const;

    NetworkConfig cfg_;
    std::vector<LocalFrame> frames_;
    std::vector<bool> faulty_;
    std::vector<std::unique_ptr<ProtocolNode>> protocols_;
    std::vector<std::unique_ptr<FaultyBehavior>> faults_;
    std::unique_ptr<SchedulerPolicy> policy_;
    IcSink ic_sink_;

    std::vector<PendingEntry> pending_;
    std::vector<MessageEnvelope> traffic_;
    std::uint64_t next_msg_id_ = 1;
    std::uint64_t events_ = 0;      // deliveries + drops
    std::uint64_t free_events_ = 0; // events taken while nothing was overdue
    std::uint64_t delivered_ = 0;
    bool started_ = false;

    Rng channel_rng_;
    Rng scheduler_rng_;
    Rng adversary_rng_;
    EventTrace trace_;
};

} // namespace rfa
