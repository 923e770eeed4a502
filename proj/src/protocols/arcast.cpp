#include "rfa/arcast.hpp"

#include <stdexcept>

namespace rfa {

namespace {

constexpr TagSet kAllReady{Tag::ready1, Tag::ready2};

} // namespace

ArCast::ArCast(const ArCastParams& params) : p_(params), epoch_(params.self == params.sender ? 0 : 1)
{
    if (p_.n == 0 || p_.self >= p_.n || p_.sender >= p_.n) throw std::invalid_argument("ArCast: bad node ids");
    if (!(p_.delta > 0.0)) throw std::invalid_argument("ArCast: delta must be positive");
}

void ArCast::start(const UnitVector& u, Effects& fx)
{
    if (p_.self != p_.sender || epoch_ != 0) throw std::logic_error("ArCast::start: not a fresh sender");
    fx.broadcasts.push_back(Broadcast{p_.instance, Tag::init, u});
    epoch_ = 1;
    last_branch_ = ArCastBranch::start;
    fx.notes.push_back(Note{EventKind::epoch, p_.instance, 1, Tag::init, u, p_.self, {}});
}

void ArCast::abort(Effects& fx)
{
    if (!active()) return;
    aborted_ = true;
    fx.notes.push_back(Note{EventKind::abort, p_.instance, epoch_, std::nullopt, std::nullopt, p_.self, {}});
}

void ArCast::deliver(const Inbound& msg, Effects& fx)
{
    if (!active()) return;
    const bool bad_init = msg.tag == Tag::init && msg.origin != p_.sender;
    if (!is_direction_tag(msg.tag) || !msg.direction || bad_init) {
        fx.notes.push_back(Note{EventKind::unexpected, p_.instance, 0, msg.tag, std::nullopt, msg.origin, {}});
        return;
    }
    if (!store_.insert(msg.origin, msg.tag, *msg.direction)) {
        fx.notes.push_back(Note{EventKind::duplicate, p_.instance, 0, msg.tag, std::nullopt, msg.origin, {}});
        return;
    }
    evaluate(fx);
}

std::optional<UnitVector> ArCast::joint_condition() const
{
    const std::size_t echo_min = p_.n - 2 * p_.t;
    const std::size_t ready_min = p_.t + 1;
    if (store_.count(kEchoTags) < echo_min || store_.count(kAllReady) < ready_min) return std::nullopt;

    const auto entries = store_.entries();
    const auto echo = maximal_clusters(entries, kEchoTags, 4.0 * p_.delta, echo_min);
    if (echo.empty()) return std::nullopt;
    const auto ready = maximal_clusters(entries, kAllReady, 10.0 * p_.delta, ready_min);
    for (const auto& w : echo) {
        for (const auto& v : ready) {
            if (distance(w.center, v.center) <= 10.0 * p_.delta) return w.center;
        }
    }
    return std::nullopt;
}

void ArCast::evaluate(Effects& fx)
{
    switch (epoch_) {
    case 1: {
        if (const auto* init = store_.find(p_.sender, Tag::init)) {
            transition(2, Tag::echo, init->direction, ArCastBranch::init, fx);
        } else if (auto w = joint_condition()) {
            transition(3, Tag::ready2, *w, ArCastBranch::ready2, fx);
        }
        break;
    }
    case 2: {
        if (auto c = find_cluster(store_.entries(), kEchoTags, 4.0 * p_.delta, p_.n - p_.t)) {
            transition(3, Tag::ready1, c->center, ArCastBranch::ready1, fx);
        } else if (auto w = joint_condition()) {
            transition(3, Tag::ready2, *w, ArCastBranch::ready2, fx);
        }
        break;
    }
    case 3: {
        if (auto c = find_cluster(store_.entries(), kAllReady, 20.0 * p_.delta, p_.n - p_.t)) {
            output_ = c->center;
            halted_ = true;
            last_branch_ = ArCastBranch::output;
            fx.notes.push_back(Note{EventKind::output, p_.instance, 0, std::nullopt, c->center, p_.self, {}});
        }
        break;
    }
    default: break;
    }
}

void ArCast::transition(int epoch, Tag tag, const UnitVector& direction, ArCastBranch branch, Effects& fx)
{
    epoch_ = epoch;
    sent_ = sent_.with(tag);
    last_branch_ = branch;
    fx.notes.push_back(Note{EventKind::epoch, p_.instance, epoch, tag, direction, p_.self, {}});
    fx.broadcasts.push_back(Broadcast{p_.instance, tag, direction});
}

ArCastNode::ArCastNode(const ArCastParams& params, std::optional<UnitVector> input)
    : machine_(params), input_(std::move(input))
{
    if ((params.self == params.sender) != input_.has_value()) {
        throw std::invalid_argument("ArCastNode: exactly the sender takes an input");
    }
}

void ArCastNode::on_start(Effects& fx)
{
    if (input_) machine_.start(*input_, fx);
}

void ArCastNode::on_deliver(const Inbound& msg, Effects& fx)
{
    if (msg.instance != machine_.params().instance) {
        fx.notes.push_back(Note{EventKind::unexpected, msg.instance, 0, msg.tag, std::nullopt, msg.origin, {}});
        return;
    }
    machine_.deliver(msg, fx);
}

bool ArCastNode::listening(InstanceId instance, Tag tag) const
{
    return instance == machine_.params().instance && machine_.listening(tag);
}

} // namespace rfa
