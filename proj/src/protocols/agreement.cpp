#include "rfa/agreement.hpp"

#include <algorithm>

namespace rfa {

BitMatrix::BitMatrix(std::size_t n, std::string bits) : n_(n), bits_(std::move(bits))
{
    if (bits_.size() != n_ * n_) throw std::invalid_argument("BitMatrix: expected n*n bits");
    if (bits_.find_first_not_of("01") != std::string::npos) throw std::invalid_argument("BitMatrix: non-bit character");
}

std::size_t BitMatrix::column_weight(std::size_t col) const
{
    std::size_t w = 0;
    for (std::size_t r = 0; r < n_; ++r) w += at(r, col) ? 1 : 0;
    return w;
}

std::size_t elect_column(const BitMatrix& b, std::size_t t)
{
    for (std::size_t c = 0; c < b.size(); ++c) {
        if (b.column_weight(c) >= t + 1) return c;
    }
    throw NoQualifyingColumn("no column of the IC matrix has " + std::to_string(t + 1) + " ones");
}

AgreementCore::AgreementCore(std::size_t n, std::size_t t, NodeId self) : n_(n), t_(t), self_(self), w_(n) {}

std::size_t AgreementCore::completed() const
{
    return static_cast<std::size_t>(std::count_if(w_.begin(), w_.end(), [](const auto& v) { return v.has_value(); }));
}

void AgreementCore::on_instance_output(InstanceId j, const UnitVector& v, Effects& fx)
{
    if (j >= n_ || w_[j]) return;
    w_[j] = v;
    if (phase_ == 0 && completed() >= 3 * t_ + 1) {
        a_.assign(n_, '0');
        for (std::size_t i = 0; i < n_; ++i) {
            if (w_[i]) a_[i] = '1';
        }
        phase_ = 1;
        fx.ic_input = a_;
    }
    try_output(fx);
}

void AgreementCore::on_ic_result(const std::string& bits, Effects& fx)
{
    const auto ic = static_cast<InstanceId>(n_);
    if (phase_ != 1) {
        fx.notes.push_back(Note{EventKind::unexpected, ic, phase_, Tag::ic_payload, std::nullopt, self_, {}});
        return;
    }
    b_ = BitMatrix(n_, bits);
    fx.notes.push_back(Note{EventKind::ic_result, ic, 0, Tag::ic_payload, std::nullopt, self_, bits});
    k_ = elect_column(*b_, t_);
    phase_ = 2;
    fx.notes.push_back(Note{EventKind::elect, ic, static_cast<std::int64_t>(*k_), std::nullopt, std::nullopt, self_, {}});
    try_output(fx);
}

void AgreementCore::try_output(Effects& fx)
{
    if (phase_ != 2 || output_ || !w_[*k_]) return;
    output_ = w_[*k_];
    fx.notes.push_back(Note{EventKind::output, static_cast<InstanceId>(n_), static_cast<std::int64_t>(*k_), std::nullopt,
                            output_, self_, {}});
}

AAgreeNode::AAgreeNode(std::size_t n, std::size_t t, double delta, NodeId self, const UnitVector& input)
    : n_(n), self_(self), input_(input), core_(n, t, self)
{
    casts_.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        casts_.emplace_back(ArCastParams{n, t, delta, static_cast<InstanceId>(j), self, static_cast<NodeId>(j)});
    }
}

void AAgreeNode::on_start(Effects& fx)
{
    casts_[self_].start(input_, fx);
}

void AAgreeNode::on_deliver(const Inbound& msg, Effects& fx)
{
    if (halted_) return;
    if (msg.instance == ic_instance()) {
        if (msg.tag != Tag::ic_payload || msg.origin != self_ || !msg.bits) {
            fx.notes.push_back(Note{EventKind::unexpected, msg.instance, 0, msg.tag, std::nullopt, msg.origin, {}});
            return;
        }
        core_.on_ic_result(*msg.bits, fx);
    } else if (msg.instance < n_) {
        ArCast& cast = casts_[msg.instance];
        const bool had = cast.output().has_value();
        cast.deliver(msg, fx);
        if (!had && cast.output()) core_.on_instance_output(msg.instance, *cast.output(), fx);
    } else {
        fx.notes.push_back(Note{EventKind::unexpected, msg.instance, 0, msg.tag, std::nullopt, msg.origin, {}});
        return;
    }
    if (core_.output()) finish(fx);
}

bool AAgreeNode::listening(InstanceId instance, Tag tag) const
{
    if (halted_) return false;
    if (instance == ic_instance()) return tag == Tag::ic_payload;
    return instance < n_ && casts_[instance].listening(tag);
}

void AAgreeNode::finish(Effects& fx)
{
    for (auto& cast : casts_) cast.abort(fx);
    halted_ = true;
}

} // namespace rfa
