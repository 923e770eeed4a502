#include "rfa/trace.hpp"

#include <json.hpp>

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rfa {

using nlohmann::json;

namespace {

constexpr EventKind kAllKinds[] = {EventKind::send,      EventKind::deliver,   EventKind::self_deliver,
                                   EventKind::drop,      EventKind::duplicate, EventKind::unexpected,
                                   EventKind::epoch,     EventKind::output,    EventKind::abort,
                                   EventKind::ic_submit, EventKind::ic_result, EventKind::elect,
                                   EventKind::channel_failure, EventKind::end};

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

Vec3 json_vec(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

json header_json(const TraceHeader& h)
{
    json j;
    j["schema"] = kTraceSchema;
    j["mode"] = h.mode;
    j["n"] = h.n;
    j["t"] = h.t;
    j["delta"] = h.delta;
    j["qubits"] = h.qubits_per_axis;
    j["ideal"] = h.ideal_channel;
    j["sender"] = h.sender ? json(*h.sender) : json(nullptr);
    j["faulty"] = h.faulty;
    json inputs = json::array();
    for (const auto& in : h.inputs) inputs.push_back(in ? vec_json(*in) : json(nullptr));
    j["inputs"] = inputs;
    j["ic_mode"] = h.ic_mode;
    j["strategy"] = h.strategy;
    j["scheduler"] = h.scheduler;
    j["seed"] = h.seed;
    j["violation_study"] = h.violation_study;
    return j;
}

TraceHeader json_header(const json& j)
{
    TraceHeader h;
    h.mode = j.at("mode").get<std::string>();
    h.n = j.at("n").get<std::size_t>();
    h.t = j.at("t").get<std::size_t>();
    h.delta = j.at("delta").get<double>();
    h.qubits_per_axis = j.value("qubits", std::int64_t{0});
    h.ideal_channel = j.value("ideal", false);
    if (j.contains("sender") && !j["sender"].is_null()) h.sender = j["sender"].get<NodeId>();
    h.faulty = j.at("faulty").get<std::vector<bool>>();
    for (const auto& in : j.at("inputs")) {
        h.inputs.push_back(in.is_null() ? std::nullopt : std::optional<Vec3>(json_vec(in)));
    }
    h.ic_mode = j.value("ic_mode", std::string{});
    h.strategy = j.value("strategy", std::string{});
    h.scheduler = j.value("scheduler", std::string{});
    h.seed = j.value("seed", std::uint64_t{0});
    h.violation_study = j.value("violation_study", false);
    if (h.faulty.size() != h.n) throw std::runtime_error("trace header: faulty mask does not match n");
    return h;
}

json event_json(const TraceEvent& e)
{
    json j;
    j["i"] = e.index;
    j["kind"] = event_kind_name(e.kind);
    j["from"] = e.sender;
    j["to"] = e.receiver;
    if (e.tag) j["tag"] = tag_name(*e.tag);
    j["inst"] = e.instance;
    if (e.msg_id != 0) j["msg"] = e.msg_id;
    if (e.digest != 0) j["digest"] = hex_digest(e.digest);
    if (e.direction) j["dir"] = vec_json(*e.direction);
    if (e.estimate) j["est"] = vec_json(*e.estimate);
    if (e.value != 0) j["val"] = e.value;
    if (!e.bits.empty()) j["bits"] = e.bits;
    return j;
}

TraceEvent json_event(const json& j)
{
    TraceEvent e;
    e.index = j.at("i").get<std::uint64_t>();
    const auto kind = parse_event_kind(j.at("kind").get<std::string>());
    if (!kind) throw std::runtime_error("trace: unknown event kind " + j.at("kind").get<std::string>());
    e.kind = *kind;
    e.sender = j.at("from").get<NodeId>();
    e.receiver = j.at("to").get<NodeId>();
    if (j.contains("tag")) {
        const auto tag = parse_tag(j["tag"].get<std::string>());
        if (!tag) throw std::runtime_error("trace: unknown tag");
        e.tag = *tag;
    }
    e.instance = j.at("inst").get<InstanceId>();
    e.msg_id = j.value("msg", std::uint64_t{0});
    if (j.contains("digest")) e.digest = std::stoull(j["digest"].get<std::string>(), nullptr, 16);
    if (j.contains("dir")) e.direction = json_vec(j["dir"]);
    if (j.contains("est")) e.estimate = json_vec(j["est"]);
    e.value = j.value("val", std::int64_t{0});
    e.bits = j.value("bits", std::string{});
    return e;
}

} // namespace

std::string_view event_kind_name(EventKind k)
{
    switch (k) {
    case EventKind::send: return "send";
    case EventKind::deliver: return "deliver";
    case EventKind::self_deliver: return "self";
    case EventKind::drop: return "drop";
    case EventKind::duplicate: return "duplicate";
    case EventKind::unexpected: return "unexpected";
    case EventKind::epoch: return "epoch";
    case EventKind::output: return "output";
    case EventKind::abort: return "abort";
    case EventKind::ic_submit: return "ic_submit";
    case EventKind::ic_result: return "ic_result";
    case EventKind::elect: return "elect";
    case EventKind::channel_failure: return "channel_failure";
    case EventKind::end: return "end";
    }
    return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view s)
{
    for (EventKind k : kAllKinds) {
        if (event_kind_name(k) == s) return k;
    }
    return std::nullopt;
}

std::string hex_digest(std::uint64_t d)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(d));
    return buf;
}

TraceEvent& EventTrace::append(TraceEvent ev)
{
    ev.index = events.size();
    events.push_back(std::move(ev));
    return events.back();
}

void EventTrace::write_jsonl(std::ostream& out) const
{
    out << header_json(header).dump() << '\n';
    for (const auto& e : events) out << event_json(e).dump() << '\n';
}

std::string EventTrace::to_jsonl() const
{
    std::ostringstream os;
    write_jsonl(os);
    return os.str();
}

std::vector<EventTrace> read_traces(std::istream& in)
{
    std::vector<EventTrace> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
        }
        if (j.contains("schema")) {
            if (j["schema"] != kTraceSchema) throw std::runtime_error("trace: unsupported schema");
            out.push_back(EventTrace{json_header(j), {}});
            continue;
        }
        if (out.empty()) throw std::runtime_error("trace: event before header");
        out.back().events.push_back(json_event(j));
    }
    return out;
}

} // namespace rfa
