#include "rfa/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace rfa {

namespace {

double chord(const Vec3& a, const Vec3& b)
{
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    const double dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct SentDirection {
    NodeId sender;
    NodeId receiver;
    std::optional<Vec3> direction;
};

struct ReadySend {
    NodeId node;
    Tag tag;
    Vec3 direction;
    std::uint64_t index;
};

std::string fmt_distance(const char* what, double d, double bound, NodeId a, NodeId b, InstanceId inst)
{
    std::ostringstream os;
    os.precision(6);
    os << what << " nodes " << a << "," << b << " instance " << inst << ": distance " << d << " > " << bound;
    return os.str();
}

} // namespace

TraceAnalysis analyze_trace(const EventTrace& trace)
{
    const TraceHeader& h = trace.header;
    const std::size_t n = h.n;
    const double delta = h.delta;
    const bool agree = h.mode == "agree";
    const InstanceId final_instance = agree ? static_cast<InstanceId>(n) : 0;
    auto correct = [&](NodeId id) { return id < n && !h.faulty[id]; };

    TraceAnalysis a;
    a.terminated.assign(n, false);
    a.outputs.assign(n, std::nullopt);
    a.elected.assign(n, std::nullopt);
    auto flag = [&](std::string check, std::string detail, std::uint64_t index) {
        a.violations.push_back(Violation{std::move(check), std::move(detail), index});
    };

    std::unordered_map<std::uint64_t, SentDirection> sent;
    std::unordered_set<std::uint64_t> delivered;
    std::map<std::pair<NodeId, InstanceId>, std::int64_t> epoch_of;
    std::map<std::pair<NodeId, InstanceId>, int> output_count;
    std::map<InstanceId, std::vector<ReadySend>> readies; // first send of each (node, tag)
    std::set<std::tuple<InstanceId, NodeId, int>> ready_seen;
    std::vector<std::optional<std::string>> ic_bits(n);
    bool ended = false;

    for (const TraceEvent& e : trace.events) {
        switch (e.kind) {
        case EventKind::send:
            sent[e.msg_id] = SentDirection{e.sender, e.receiver, e.direction};
            if (correct(e.sender) && e.direction && (e.tag == Tag::ready1 || e.tag == Tag::ready2) &&
                ready_seen.insert({e.instance, e.sender, static_cast<int>(*e.tag)}).second) {
                readies[e.instance].push_back(ReadySend{e.sender, *e.tag, *e.direction, e.index});
            }
            break;
        case EventKind::deliver: {
            ++a.deliveries;
            const auto it = sent.find(e.msg_id);
            if (it == sent.end()) {
                flag("authentication", "delivery of msg " + std::to_string(e.msg_id) + " that was never sent", e.index);
                break;
            }
            if (it->second.sender != e.sender || it->second.receiver != e.receiver) {
                flag("authentication", "msg " + std::to_string(e.msg_id) + " delivered with a different origin",
                     e.index);
            }
            delivered.insert(e.msg_id);
            if (e.value == 1 && e.estimate && it->second.direction && correct(e.sender) && correct(e.receiver)) {
                ++a.link_estimates;
                if (chord(*e.estimate, *it->second.direction) > delta) {
                    ++a.link_misses;
                    a.conditioned = false;
                }
            }
            break;
        }
        case EventKind::channel_failure:
            if (correct(e.sender) && correct(e.receiver)) a.conditioned = false;
            break;
        case EventKind::epoch: {
            if (!correct(e.sender)) break;
            const auto key = std::make_pair(e.sender, e.instance);
            const auto prev = epoch_of.find(key);
            const std::int64_t before = prev == epoch_of.end() ? -1 : prev->second;
            if (e.value <= before) {
                flag("epoch-monotonic",
                     "node " + std::to_string(e.sender) + " went from epoch " + std::to_string(before) + " to " +
                         std::to_string(e.value),
                     e.index);
            }
            if (e.tag == Tag::ready1 && before != 2) {
                flag("ready1-from-epoch1", "node " + std::to_string(e.sender) + " sent ready1 from epoch " +
                                               std::to_string(before),
                     e.index);
            }
            epoch_of[key] = e.value;
            break;
        }
        case EventKind::output: {
            if (!correct(e.sender)) break;
            if (++output_count[{e.sender, e.instance}] > 1) {
                flag("single-output", "node " + std::to_string(e.sender) + " output twice", e.index);
            }
            if (e.instance == final_instance && e.direction) {
                a.outputs[e.sender] = e.direction;
                a.terminated[e.sender] = true;
            }
            break;
        }
        case EventKind::elect:
            if (correct(e.sender)) a.elected[e.sender] = e.value;
            break;
        case EventKind::ic_result:
            if (correct(e.sender)) ic_bits[e.sender] = e.bits;
            break;
        case EventKind::end:
            ended = true;
            a.status = static_cast<RunStatus>(std::clamp<std::int64_t>(e.value, 0, 3));
            a.error = e.bits;
            break;
        default: break;
        }
    }
    if (!ended) a.status = RunStatus::error;

    // Causal precedence holds on every trace: the first correct ready2 needs a correct
    // ready message inside its (t+1)-cluster, which can only be a ready1.
    for (const auto& [inst, list] : readies) {
        std::optional<std::uint64_t> first_ready1;
        for (const auto& r : list) {
            if (r.tag == Tag::ready1 && !first_ready1) first_ready1 = r.index;
        }
        for (const auto& r : list) {
            if (r.tag == Tag::ready2 && (!first_ready1 || *first_ready1 > r.index)) {
                flag("L-causal",
                     "ready2 of node " + std::to_string(r.node) + " in instance " + std::to_string(inst) +
                         " has no earlier correct ready1",
                     r.index);
            }
        }
    }

    if (a.conditioned) {
        for (const auto& [inst, list] : readies) {
            for (std::size_t i = 0; i < list.size(); ++i) {
                for (std::size_t j = i + 1; j < list.size(); ++j) {
                    const auto& x = list[i];
                    const auto& y = list[j];
                    if (x.node == y.node) continue;
                    const double d = chord(x.direction, y.direction);
                    const char* check = nullptr;
                    double bound = 0.0;
                    if (x.tag == Tag::ready1 && y.tag == Tag::ready1) {
                        check = "L-ready11";
                        bound = 10.0 * delta;
                    } else if (x.tag == Tag::ready2 && y.tag == Tag::ready2) {
                        check = "L-ready22";
                        bound = 20.0 * delta;
                    } else {
                        check = "L-ready12";
                        bound = 10.0 * delta;
                    }
                    if (d > bound + kBoundSlack) {
                        flag(check, fmt_distance(check, d, bound, x.node, y.node, inst), std::max(x.index, y.index));
                    }
                }
            }
        }
    }

    std::vector<NodeId> correct_ids;
    for (NodeId i = 0; i < n; ++i) {
        if (correct(i)) correct_ids.push_back(i);
    }
    std::size_t outputs = 0;
    for (NodeId i : correct_ids) outputs += a.terminated[i] ? 1 : 0;
    const bool everyone = outputs == correct_ids.size();
    a.correct_count = correct_ids.size();
    a.terminated_count = outputs;

    for (std::size_t x = 0; x < correct_ids.size(); ++x) {
        for (std::size_t y = x + 1; y < correct_ids.size(); ++y) {
            const auto& ox = a.outputs[correct_ids[x]];
            const auto& oy = a.outputs[correct_ids[y]];
            if (ox && oy) a.max_pairwise = std::max(a.max_pairwise, chord(*ox, *oy));
        }
    }
    if (a.conditioned && a.max_pairwise > 42.0 * delta + kBoundSlack) {
        flag("consistency", "largest pairwise output distance " + std::to_string(a.max_pairwise) + " > 42 delta", 0);
    }

    if (agree) {
        if (!everyone && a.conditioned) {
            flag("termination", std::to_string(correct_ids.size() - outputs) + " correct nodes did not output", 0);
        }
        std::optional<std::int64_t> k;
        std::optional<std::string> bits;
        for (NodeId i : correct_ids) {
            if (a.elected[i]) {
                if (k && *k != *a.elected[i]) flag("election", "correct nodes elected different columns", 0);
                k = a.elected[i];
            }
            if (ic_bits[i]) {
                if (bits && *bits != *ic_bits[i]) flag("election", "correct nodes received different IC matrices", 0);
                bits = ic_bits[i];
            }
        }
    } else {
        const bool sender_correct = h.sender && correct(*h.sender);
        if (sender_correct) {
            if (!everyone && a.conditioned) {
                flag("termination-1",
                     std::to_string(correct_ids.size() - outputs) + " correct nodes did not output under a correct sender",
                     0);
            }
            const auto& u = h.inputs.empty() ? std::nullopt : h.inputs[0];
            if (u) {
                double worst = 0.0;
                for (NodeId i : correct_ids) {
                    if (a.outputs[i]) worst = std::max(worst, chord(*u, *a.outputs[i]));
                }
                a.sender_distance = worst;
                if (a.conditioned && worst > 14.0 * delta + kBoundSlack) {
                    flag("correctness", "output " + std::to_string(worst) + " away from the sender input > 14 delta",
                         0);
                }
            }
        } else if (a.conditioned && outputs > 0 && !everyone && a.status == RunStatus::quiescent) {
            flag("termination-2", "some correct nodes output but the run went quiet without the rest", 0);
        }
    }

    if (a.status == RunStatus::quiescent) {
        for (const auto& [id, s] : sent) {
            if (correct(s.sender) && correct(s.receiver) && !delivered.count(id)) {
                flag("eventual-delivery", "msg " + std::to_string(id) + " was never delivered", 0);
                break;
            }
        }
    }
    return a;
}

std::vector<Violation> monitor_trace(const EventTrace& trace)
{
    return analyze_trace(trace).violations;
}

} // namespace rfa
