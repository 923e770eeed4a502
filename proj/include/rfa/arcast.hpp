#pragma once

#include "rfa/clusters.hpp"
#include "rfa/simnet.hpp"

#include <cstdint>
#include <optional>

namespace rfa {

struct ArCastParams {
    std::size_t n = 4;
    std::size_t t = 0;
    double delta = 0.02;
    InstanceId instance = 0;
    NodeId self = 0;
    NodeId sender = 0;
};

/// Which rule moved the state machine out of its previous epoch.
enum class ArCastBranch : std::uint8_t { none, start, init, ready1, ready2, output };

/// One node's view of one reliable direction broadcast. Plain value type; the owner
/// forwards deliveries and collects the emitted broadcasts and notes.
///
/// Epochs: 0 = sender before start, 1 = waiting for init, 2 = echoed, 3 = sent a ready,
/// and the machine halts once it outputs.
class ArCast {
public:
    explicit ArCast(const ArCastParams& params);

    /// Sender only: broadcasts (init, u) and enters epoch 1. Throws std::logic_error otherwise.
    void start(const UnitVector& u, Effects& fx);
    void deliver(const Inbound& msg, Effects& fx);
    /// Stops processing; no further sends for this instance.
    void abort(Effects& fx);

    bool active() const { return !halted_ && !aborted_; }
    bool listening(Tag tag) const { return active() && is_direction_tag(tag); }
    int epoch() const { return epoch_; }
    bool halted() const { return halted_; }
    bool aborted() const { return aborted_; }
    const std::optional<UnitVector>& output() const { return output_; }
    TagSet sent() const { return sent_; }
    ArCastBranch last_branch() const { return last_branch_; }
    const DirectionStore& store() const { return store_; }
    const ArCastParams& params() const { return p_; }

    /// The (n-2t) echo + (t+1) ready condition; returns the echo cluster center to send.
    std::optional<UnitVector> joint_condition() const;

private:
    void evaluate(Effects& fx);
    void transition(int epoch, Tag tag, const UnitVector& direction, ArCastBranch branch, Effects& fx);

    ArCastParams p_;
    int epoch_;
    DirectionStore store_;
    TagSet sent_;
    std::optional<UnitVector> output_;
    bool halted_ = false;
    bool aborted_ = false;
    ArCastBranch last_branch_ = ArCastBranch::none;
};

/// A correct node running a single AR-Cast instance.
class ArCastNode : public ProtocolNode {
public:
    /// `input` is required iff this node is the designated sender (local frame).
    ArCastNode(const ArCastParams& params, std::optional<UnitVector> input);

    void on_start(Effects& fx) override;
    void on_deliver(const Inbound& msg, Effects& fx) override;
    bool listening(InstanceId instance, Tag tag) const override;
    std::optional<UnitVector> output() const override { return machine_.output(); }

    const ArCast& machine() const { return machine_; }

private:
    ArCast machine_;
    std::optional<UnitVector> input_;
};

} // namespace rfa
