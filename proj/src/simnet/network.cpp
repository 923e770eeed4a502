#include "rfa/simnet.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace rfa {

Network::Network(NetworkConfig cfg, std::vector<LocalFrame> frames, std::vector<bool> faulty, std::uint64_t seed)
    : cfg_(std::move(cfg)),
      frames_(std::move(frames)),
      faulty_(std::move(faulty)),
      channel_rng_(derive_seed(seed, 1)),
      scheduler_rng_(derive_seed(seed, 2)),
      adversary_rng_(derive_seed(seed, 3))
{
    if (cfg_.n == 0) throw ConfigError("network needs at least one node");
    if (frames_.size() != cfg_.n) throw ConfigError("one local frame per node required");
    if (faulty_.size() != cfg_.n) throw ConfigError("fault mask size must equal n");
    if (cfg_.instance_count == 0) throw ConfigError("at least one protocol instance required");
    if (cfg_.fairness_bound == 0) throw ConfigError("fairness bound must be positive");
    try {
        cfg_.estimation.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    protocols_.resize(cfg_.n);
    faults_.resize(cfg_.n);
    policy_ = std::make_unique<FifoPolicy>();

    trace_.header.n = cfg_.n;
    trace_.header.delta = cfg_.estimation.delta;
    trace_.header.qubits_per_axis = cfg_.estimation.qubits_per_axis;
    trace_.header.ideal_channel = cfg_.estimation.ideal_channel;
    trace_.header.faulty = faulty_;
    trace_.header.seed = seed;
}

void Network::attach_protocol(NodeId node, std::unique_ptr<ProtocolNode> protocol)
{
    if (node >= cfg_.n || faulty_[node]) throw ConfigError("protocols attach to correct nodes only");
    protocols_[node] = std::move(protocol);
}

void Network::attach_fault(NodeId node, std::unique_ptr<FaultyBehavior> behavior)
{
    if (node >= cfg_.n || !faulty_[node]) throw ConfigError("fault behaviours attach to faulty nodes only");
    faults_[node] = std::move(behavior);
}

void Network::set_scheduler(std::unique_ptr<SchedulerPolicy> policy)
{
    if (!policy) throw ConfigError("null scheduler policy");
    policy_ = std::move(policy);
}

void Network::start()
{
    if (started_) return;
    started_ = true;
    trace_.header.scheduler = policy_->name();
    for (NodeId i = 0; i < cfg_.n; ++i) {
        if (faulty_[i] || !protocols_[i]) continue;
        Effects fx;
        protocols_[i]->on_start(fx);
        std::vector<std::pair<NodeId, Inbound>> work;
        apply_effects(i, fx, work);
        drain(work, 0);
    }
}

void Network::send(MessageEnvelope env, NodeId true_sender)
{
    env.sender = true_sender;
    validate_envelope(env, cfg_.n, cfg_.instance_count);
    if (env.quantum && faulty_[true_sender]) {
        env.quantum->corrupted = true;
        env.quantum->qubits_per_axis = cfg_.estimation.qubits_per_axis;
    }
    env.msg_id = next_msg_id_++;

    TraceEvent ev;
    ev.kind = EventKind::send;
    ev.sender = env.sender;
    ev.receiver = env.receiver;
    ev.tag = env.classical_tag;
    ev.instance = env.instance;
    ev.msg_id = env.msg_id;
    ev.digest = payload_digest(env);
    if (env.quantum) ev.direction = env.quantum->true_direction_global.components();
    if (env.classical_bits) ev.bits = *env.classical_bits;
    trace_.append(std::move(ev));

    const bool tracked = !faulty_[env.sender] && !faulty_[env.receiver];
    traffic_.push_back(env);
    pending_.push_back(PendingEntry{std::move(env), free_events_, tracked});
}

StepOutcome Network::step()
{
    start();

    for (NodeId i = 0; i < cfg_.n; ++i) {
        if (!faulty_[i] || !faults_[i]) continue;
        AdversaryView view{i, cfg_.n, cfg_.instance_count, &faulty_, traffic_, events_};
        for (auto& env : faults_[i]->on_event(view, adversary_rng_)) send(std::move(env), i);
    }

    if (pending_.empty()) return StepOutcome::quiescent;

    SchedulerView view(pending_, free_events_, cfg_.fairness_bound, faulty_);
    const Decision d = policy_->choose(view, scheduler_rng_);
    if (d.index >= pending_.size()) throw std::logic_error("scheduler picked a non-existent envelope");
    if (view.forced() && !view.overdue(d.index)) {
        throw FairnessViolation("policy '" + policy_->name() + "' skipped msg " +
                                std::to_string(pending_[*view.forced()].env.msg_id) + " beyond the fairness bound");
    }
    if (!view.overdue(d.index)) ++free_events_;

    PendingEntry entry = std::move(pending_[d.index]);
    pending_.erase(pending_.begin() + static_cast<std::ptrdiff_t>(d.index));
    ++events_;

    if (d.drop) {
        if (!faulty_[entry.env.sender]) throw std::logic_error("scheduler may drop faulty-origin envelopes only");
        TraceEvent ev;
        ev.kind = EventKind::drop;
        ev.sender = entry.env.sender;
        ev.receiver = entry.env.receiver;
        ev.tag = entry.env.classical_tag;
        ev.instance = entry.env.instance;
        ev.msg_id = entry.env.msg_id;
        trace_.append(std::move(ev));
        return StepOutcome::dropped;
    }
    deliver(entry.env);
    return StepOutcome::delivered;
}

void Network::deliver(const MessageEnvelope& env)
{
    ++delivered_;
    TraceEvent ev;
    ev.kind = EventKind::deliver;
    ev.sender = env.sender;
    ev.receiver = env.receiver;
    ev.tag = env.classical_tag;
    ev.instance = env.instance;
    ev.msg_id = env.msg_id;

    ProtocolNode* proto = faulty_[env.receiver] ? nullptr : protocols_[env.receiver].get();
    if (!proto || !proto->listening(env.instance, env.classical_tag)) {
        trace_.append(std::move(ev));
        return;
    }

    Inbound in{env.sender, env.instance, env.classical_tag, std::nullopt, env.classical_bits};
    bool failure = false;
    if (env.quantum) {
        const Reception r = ted_receive(*env.quantum, frames_[env.receiver], channel_rng_, cfg_.estimation);
        in.direction = r.direction;
        failure = r.channel_failure;
        ev.estimate = frames_[env.receiver].to_global(r.direction).components();
    }
    ev.value = 1;
    trace_.append(std::move(ev));
    if (failure) {
        TraceEvent fe;
        fe.kind = EventKind::channel_failure;
        fe.sender = env.sender;
        fe.receiver = env.receiver;
        fe.instance = env.instance;
        fe.msg_id = env.msg_id;
        trace_.append(std::move(fe));
    }
    run_protocol(env.receiver, std::move(in));
}

void Network::run_protocol(NodeId node, Inbound msg)
{
    std::vector<std::pair<NodeId, Inbound>> work;
    work.emplace_back(node, std::move(msg));
    drain(work, 1);
}

void Network::drain(std::vector<std::pair<NodeId, Inbound>>& work, std::size_t first_self)
{
    // Work items are processed in FIFO order; self-deliveries append to the queue.
    // Items before `first_self` came from the network and were traced already.
    for (std::size_t next = 0; next < work.size(); ++next) {
        const NodeId node = work[next].first;
        const Inbound msg = work[next].second;
        ProtocolNode* proto = protocols_[node].get();
        if (next >= first_self) {
            TraceEvent ev;
            ev.kind = EventKind::self_deliver;
            ev.sender = node;
            ev.receiver = node;
            ev.tag = msg.tag;
            ev.instance = msg.instance;
            ev.direction = global_of(node, msg.direction);
            const bool live = proto->listening(msg.instance, msg.tag);
            ev.value = live ? 1 : 0;
            trace_.append(std::move(ev));
            if (!live) continue;
        }
        Effects fx;
        proto->on_deliver(msg, fx);
        apply_effects(node, fx, work);
    }
}

void Network::apply_effects(NodeId node, Effects& fx, std::vector<std::pair<NodeId, Inbound>>& work)
{
    for (const Note& note : fx.notes) {
        TraceEvent ev;
        ev.kind = note.kind;
        ev.sender = (note.kind == EventKind::duplicate || note.kind == EventKind::unexpected) ? note.origin : node;
        ev.receiver = node;
        ev.tag = note.tag;
        ev.instance = note.instance;
        ev.value = note.value;
        ev.direction = global_of(node, note.direction);
        ev.bits = note.bits;
        trace_.append(std::move(ev));
    }
    if (fx.ic_input) {
        TraceEvent ev;
        ev.kind = EventKind::ic_submit;
        ev.sender = node;
        ev.receiver = node;
        ev.bits = *fx.ic_input;
        trace_.append(std::move(ev));
        if (!ic_sink_) throw std::logic_error("node submitted an IC input but no IC sink is installed");
        for (auto& env : ic_sink_(node, *fx.ic_input)) {
            const NodeId s = env.sender;
            send(std::move(env), s);
        }
    }
    for (const Broadcast& b : fx.broadcasts) {
        const QuantumPayload payload = ted_send(b.direction, frames_[node], cfg_.estimation);
        for (NodeId r = 0; r < cfg_.n; ++r) {
            if (r == node) continue;
            MessageEnvelope env;
            env.receiver = r;
            env.instance = b.instance;
            env.classical_tag = b.tag;
            env.quantum = payload;
            send(std::move(env), node);
        }
        work.emplace_back(node, Inbound{node, b.instance, b.tag, b.direction, std::nullopt});
    }
}

RunStatus Network::run_until(const std::function<bool(const Network&)>& predicate, std::uint64_t max_events)
{
    start();
    for (;;) {
        if (predicate(*this)) return RunStatus::predicate;
        if (events_ >= max_events) return RunStatus::timeout;
        if (step() == StepOutcome::quiescent) return RunStatus::quiescent;
    }
}

void Network::note_end(RunStatus status, const std::string& detail)
{
    TraceEvent ev;
    ev.kind = EventKind::end;
    ev.value = static_cast<std::int64_t>(status);
    ev.bits = detail;
    trace_.append(std::move(ev));
}

std::optional<Vec3> Network::global_of(NodeId node, const std::optional<UnitVector>& local) const
{
    if (!local) return std::nullopt;
    return frames_[node].to_global(*local).components();
}

} // namespace rfa
