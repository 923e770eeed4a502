#include "rfa/explore.hpp"

#include "rfa/agreement.hpp"
#include "rfa/arcast.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace rfa {

namespace {

constexpr Tag kTags[] = {Tag::init, Tag::echo, Tag::ready1, Tag::ready2};

// ---------------------------------------------------------------------------------------
// Broadcast model: n ArCast machines, identity frames, exact channel.

struct CastState {
    std::vector<ArCast> nodes;
    std::vector<std::vector<std::optional<UnitVector>>> sent_dir; // [node][tag]
    std::vector<int> outputs;
    std::uint64_t pending = 0; // bit (tag * n + sender) * n + receiver
};

class CastExplorer {
public:
    CastExplorer(std::size_t n, const UnitVector& u, std::uint64_t limit) : n_(n), u_(u), limit_(limit)
    {
        if (n < 1 || 4 * n * n > 64) throw std::invalid_argument("explore_arcast: n must be in [1, 4]");
    }

    ExploreReport run()
    {
        CastState s;
        for (NodeId i = 0; i < n_; ++i) s.nodes.emplace_back(ArCastParams{n_, 0, 0.02, 0, i, 0});
        s.sent_dir.assign(n_, std::vector<std::optional<UnitVector>>(4));
        s.outputs.assign(n_, 0);
        Effects fx;
        s.nodes[0].start(u_, fx);
        apply(s, 0, fx);
        dfs(s);
        return report_;
    }

private:
    std::size_t bit(Tag tag, NodeId from, NodeId to) const
    {
        return (static_cast<std::size_t>(tag) * n_ + from) * n_ + to;
    }

    void violation(std::string what)
    {
        if (report_.violations.size() < 20) report_.violations.push_back(std::move(what));
    }

    void check_notes(CastState& s, NodeId node, const Effects& fx, int epoch_before)
    {
        int prev = epoch_before;
        for (const Note& note : fx.notes) {
            if (note.kind == EventKind::epoch) {
                if (note.value <= prev) violation("epoch decreased at node " + std::to_string(node));
                if (note.tag == Tag::ready1 && prev != 2) violation("ready1 sent from epoch 1");
                prev = static_cast<int>(note.value);
            } else if (note.kind == EventKind::output) {
                if (++s.outputs[node] > 1) violation("node output twice");
            } else if (note.kind == EventKind::duplicate || note.kind == EventKind::unexpected) {
                violation("fault-free run produced a " + std::string(note.kind == EventKind::duplicate ? "duplicate"
                                                                                                  : "unexpected"));
            }
        }
    }

    // Applies a node's effects; self-deliveries run immediately and in order.
    void apply(CastState& s, NodeId node, Effects& fx)
    {
        std::vector<Broadcast> queue(fx.broadcasts.begin(), fx.broadcasts.end());
        check_notes(s, node, fx, -1);
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const Broadcast b = queue[q];
            const auto tag_index = static_cast<std::size_t>(b.tag);
            if (s.sent_dir[node][tag_index]) violation("tag sent twice");
            s.sent_dir[node][tag_index] = b.direction;
            for (NodeId r = 0; r < n_; ++r) {
                if (r != node) s.pending |= std::uint64_t{1} << bit(b.tag, node, r);
            }
            Effects inner;
            const int before = s.nodes[node].epoch();
            s.nodes[node].deliver(Inbound{node, 0, b.tag, b.direction, std::nullopt}, inner);
            check_notes(s, node, inner, before);
            queue.insert(queue.end(), inner.broadcasts.begin(), inner.broadcasts.end());
        }
    }

    std::string key(const CastState& s) const
    {
        std::string k(reinterpret_cast<const char*>(&s.pending), sizeof s.pending);
        for (NodeId i = 0; i < n_; ++i) {
            const ArCast& a = s.nodes[i];
            k.push_back(static_cast<char>(a.epoch()));
            k.push_back(static_cast<char>(a.halted()));
            k.push_back(static_cast<char>(a.sent().bits()));
            std::uint16_t have = 0;
            for (const auto& e : a.store().entries()) {
                have |= static_cast<std::uint16_t>(1u << (e.origin * 4 + static_cast<unsigned>(e.tag)));
            }
            k.append(reinterpret_cast<const char*>(&have), sizeof have);
            for (const auto& d : s.sent_dir[i]) {
                if (!d) continue;
                for (double c : d->components()) {
                    const auto b = std::bit_cast<std::uint64_t>(c);
                    k.append(reinterpret_cast<const char*>(&b), sizeof b);
                }
            }
        }
        return k;
    }

    void dfs(const CastState& s)
    {
        if (report_.truncated) return;
        if (!seen_.insert(key(s)).second) return;
        if (++report_.states >= limit_) {
            report_.truncated = true;
            return;
        }
        if (s.pending == 0) {
            ++report_.terminals;
            check_terminal(s);
            return;
        }
        for (std::uint64_t rest = s.pending; rest != 0; rest &= rest - 1) {
            const auto b = static_cast<std::size_t>(std::countr_zero(rest));
            const NodeId to = static_cast<NodeId>(b % n_);
            const NodeId from = static_cast<NodeId>((b / n_) % n_);
            const Tag tag = kTags[b / (n_ * n_)];
            CastState next = s;
            next.pending &= ~(std::uint64_t{1} << b);
            ++report_.transitions;
            ArCast& node = next.nodes[to];
            if (node.listening(tag)) {
                Effects fx;
                const int before = node.epoch();
                node.deliver(Inbound{from, 0, tag, *s.sent_dir[from][static_cast<std::size_t>(tag)], std::nullopt}, fx);
                check_notes(next, to, fx, before);
                fx.notes.clear();
                apply(next, to, fx);
            }
            dfs(next);
            if (report_.truncated) return;
        }
    }

    void check_terminal(const CastState& s)
    {
        const auto& first = s.nodes[0].output();
        for (NodeId i = 0; i < n_; ++i) {
            const auto& o = s.nodes[i].output();
            if (!o) {
                violation("terminal state where node " + std::to_string(i) + " has no output");
                continue;
            }
            if (first && !(*o == *first)) violation("outputs differ between nodes");
            if (distance(*o, u_) > 1e-12) violation("output differs from the sender input");
        }
    }

    std::size_t n_;
    UnitVector u_;
    std::uint64_t limit_;
    ExploreReport report_;
    std::unordered_set<std::string> seen_;
};

// ---------------------------------------------------------------------------------------
// Agreement-layer model: completions and IC deliveries in every order.

// Nodes interact only through the common IC matrix, and with t = 0 a node's IC row is
// fixed by the first broadcast it sees complete. Every global interleaving is therefore
// covered by (a) every assignment of first completions to nodes and (b) for each node,
// every order of its remaining completions and its IC delivery, which may land at any
// point after its own submission.

struct LocalState {
    AgreementCore core;
    std::uint32_t completed = 0;
    bool ic_delivered = false;
};

class AgreeExplorer {
public:
    AgreeExplorer(std::size_t n, std::uint64_t limit) : n_(n), limit_(limit)
    {
        if (n < 1 || n > 6) throw std::invalid_argument("explore_agreement: n must be in [1, 6]");
        for (std::size_t j = 0; j < n; ++j) {
            const double c = static_cast<double>(j + 1) / static_cast<double>(n + 1);
            inputs_.push_back(UnitVector::normalized(c, 1.0 - c, 0.5));
        }
    }

    ExploreReport run()
    {
        std::vector<NodeId> first(n_, 0);
        for (;;) {
            explore_assignment(first);
            if (report_.truncated) break;
            std::size_t pos = 0;
            while (pos < n_ && ++first[pos] == n_) first[pos++] = 0;
            if (pos == n_) break;
        }
        return report_;
    }

private:
    void violation(std::string what)
    {
        if (report_.violations.size() < 20) report_.violations.push_back(std::move(what));
    }

    void explore_assignment(const std::vector<NodeId>& first)
    {
        std::string bits;
        std::vector<LocalState> starts;
        for (NodeId i = 0; i < n_; ++i) {
            LocalState s{AgreementCore(n_, 0, i), 1u << first[i], false};
            Effects fx;
            s.core.on_instance_output(first[i], inputs_[first[i]], fx);
            if (!fx.ic_input || s.core.phase() != 1) {
                violation("node " + std::to_string(i) + " did not submit after its first completion");
                return;
            }
            bits += *fx.ic_input;
            starts.push_back(std::move(s));
            ++report_.transitions;
        }
        std::optional<std::size_t> expected_k;
        try {
            expected_k = elect_column(BitMatrix(n_, bits), 0);
        } catch (const NoQualifyingColumn&) {
            violation("no qualifying column");
            return;
        }
        for (NodeId i = 0; i < n_; ++i) {
            seen_.clear();
            dfs(starts[i], bits, *expected_k);
            if (report_.truncated) return;
        }
    }

    void dfs(const LocalState& s, const std::string& bits, std::size_t k)
    {
        if (report_.truncated) return;
        const std::uint32_t key = s.completed << 1 | (s.ic_delivered ? 1u : 0u);
        if (!seen_.insert(key).second) return;
        if (++report_.states >= limit_) {
            report_.truncated = true;
            return;
        }
        if (s.core.output()) { // halted: later events are ignored
            ++report_.terminals;
            check_terminal(s, k);
            return;
        }
        bool any = false;
        for (NodeId j = 0; j < n_; ++j) {
            if (s.completed & (1u << j)) continue;
            any = true;
            LocalState next = s;
            next.completed |= 1u << j;
            Effects fx;
            next.core.on_instance_output(j, inputs_[j], fx);
            ++report_.transitions;
            dfs(next, bits, k);
        }
        if (!s.ic_delivered) {
            any = true;
            LocalState next = s;
            next.ic_delivered = true;
            Effects fx;
            try {
                next.core.on_ic_result(bits, fx);
            } catch (const NoQualifyingColumn&) {
                violation("no qualifying column");
                return;
            }
            ++report_.transitions;
            dfs(next, bits, k);
        }
        if (!any) {
            ++report_.terminals;
            check_terminal(s, k);
        }
    }

    void check_terminal(const LocalState& s, std::size_t k)
    {
        const auto& c = s.core;
        if (!c.output() || !c.k()) {
            violation("terminal state without output");
            return;
        }
        if (*c.k() != k) violation("nodes elected different columns");
        if (!(*c.output() == inputs_[*c.k()])) violation("output is not the elected sender's input");
    }

    std::size_t n_;
    std::uint64_t limit_;
    std::vector<UnitVector> inputs_;
    ExploreReport report_;
    std::unordered_set<std::uint32_t> seen_;
};

} // namespace

ExploreReport explore_arcast(std::size_t n, const UnitVector& u, std::uint64_t state_limit)
{
    return CastExplorer(n, u, state_limit).run();
}

ExploreReport explore_agreement(std::size_t n, std::uint64_t state_limit)
{
    return AgreeExplorer(n, state_limit).run();
}

} // namespace rfa
