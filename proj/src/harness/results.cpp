#include "rfa/results.hpp"

#include <json.hpp>

#include <istream>
#include <ostream>
#include <stdexcept>

namespace rfa {

using nlohmann::json;

namespace {

json config_json(const ExperimentConfig& c)
{
    json j;
    j["mode"] = mode_name(c.mode);
    j["n"] = c.n;
    j["t"] = c.t;
    j["delta"] = c.delta;
    j["qubits"] = c.qubits_per_axis;
    j["ideal_channel"] = c.ideal_channel;
    j["ic_mode"] = ic_mode_name(c.ic_mode);
    j["adversary"] = fault_kind_name(c.fault);
    j["scheduler"] = policy_kind_name(c.scheduler);
    j["trials"] = c.trials;
    j["seed"] = c.master_seed;
    j["max_events"] = c.max_events;
    j["fairness_bound"] = c.fairness_bound;
    j["allow_excess_faults"] = c.allow_excess_faults;
    j["faulty_sender"] = c.faulty_sender;
    j["frames"] = c.frames == FrameChoice::random ? "random" : "identity";
    j["inputs"] = c.inputs == InputChoice::local_z ? "local_z" : "random";
    // threads is deliberately left out: it must not change the file.
    return j;
}

ExperimentConfig json_config(const json& j)
{
    ExperimentConfig c;
    for (const auto& [key, value] : j.items()) {
        if (value.is_string()) {
            apply_config_value(c, key, value.get<std::string>());
        } else if (value.is_boolean()) {
            apply_config_value(c, key, value.get<bool>() ? "true" : "false");
        } else {
            apply_config_value(c, key, value.dump());
        }
    }
    return c;
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json record_json(const RunRecord& r)
{
    json j;
    j["trial"] = r.trial;
    j["seed"] = r.seed;
    j["status"] = run_status_name(r.status);
    j["terminated"] = r.terminated;
    json outs = json::array();
    for (const auto& o : r.outputs) outs.push_back(o ? vec_json(*o) : json(nullptr));
    j["outputs"] = outs;
    j["conditioned"] = r.conditioned;
    j["max_pairwise"] = r.max_pairwise;
    j["sender_distance"] = r.sender_distance ? json(*r.sender_distance) : json(nullptr);
    j["elected"] = r.elected ? json(*r.elected) : json(nullptr);
    json vs = json::array();
    for (const auto& v : r.violations) vs.push_back({{"check", v.check}, {"detail", v.detail}, {"event", v.event_index}});
    j["violations"] = vs;
    j["event_count"] = r.event_count;
    j["error"] = r.error;
    j["expected_termination"] = r.expected_termination;
    return j;
}

RunStatus parse_status(const std::string& s)
{
    for (RunStatus st : {RunStatus::predicate, RunStatus::quiescent, RunStatus::timeout, RunStatus::error}) {
        if (run_status_name(st) == s) return st;
    }
    throw std::runtime_error("results: unknown status " + s);
}

RunRecord json_record(const json& j)
{
    RunRecord r;
    r.trial = j.at("trial").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.status = parse_status(j.at("status").get<std::string>());
    r.terminated = j.at("terminated").get<std::vector<bool>>();
    for (const auto& o : j.at("outputs")) {
        r.outputs.push_back(o.is_null() ? std::nullopt
                                        : std::optional<Vec3>(Vec3{o.at(0).get<double>(), o.at(1).get<double>(),
                                                                   o.at(2).get<double>()}));
    }
    r.conditioned = j.at("conditioned").get<bool>();
    r.max_pairwise = j.at("max_pairwise").get<double>();
    if (!j.at("sender_distance").is_null()) r.sender_distance = j["sender_distance"].get<double>();
    if (!j.at("elected").is_null()) r.elected = j["elected"].get<std::int64_t>();
    for (const auto& v : j.at("violations")) {
        r.violations.push_back(Violation{v.at("check").get<std::string>(), v.at("detail").get<std::string>(),
                                         v.at("event").get<std::uint64_t>()});
    }
    r.event_count = j.at("event_count").get<std::uint64_t>();
    r.error = j.at("error").get<std::string>();
    r.expected_termination = j.at("expected_termination").get<bool>();
    return r;
}

json summary_json(const Summary& s)
{
    json j;
    j["trials"] = s.trials;
    j["terminated"] = s.terminated;
    j["conditioned"] = s.conditioned;
    j["with_violations"] = s.with_violations;
    j["violations"] = s.violations;
    j["errors"] = s.errors;
    j["unexpected_nontermination"] = s.unexpected_nontermination;
    j["max_pairwise_conditioned"] = s.max_pairwise_conditioned;
    j["max_sender_distance_conditioned"] = s.max_sender_distance_conditioned;
    j["min_slack_42"] = s.min_slack_42;
    return j;
}

Summary json_summary(const json& j)
{
    Summary s;
    s.trials = j.at("trials").get<std::size_t>();
    s.terminated = j.at("terminated").get<std::size_t>();
    s.conditioned = j.at("conditioned").get<std::size_t>();
    s.with_violations = j.at("with_violations").get<std::size_t>();
    s.violations = j.at("violations").get<std::size_t>();
    s.errors = j.at("errors").get<std::size_t>();
    s.unexpected_nontermination = j.at("unexpected_nontermination").get<std::size_t>();
    s.max_pairwise_conditioned = j.at("max_pairwise_conditioned").get<double>();
    s.max_sender_distance_conditioned = j.at("max_sender_distance_conditioned").get<double>();
    s.min_slack_42 = j.at("min_slack_42").get<double>();
    return s;
}

} // namespace

void write_results(std::ostream& out, const ExperimentResult& result)
{
    out << json{{"schema", kResultsSchema}, {"config", config_json(result.config)}}.dump() << '\n';
    for (const auto& r : result.records) out << json{{"run", record_json(r)}}.dump() << '\n';
    out << json{{"summary", summary_json(result.summary)}}.dump() << '\n';
}

void write_traces(std::ostream& out, const std::vector<EventTrace>& traces)
{
    for (const auto& t : traces) t.write_jsonl(out);
}

ResultsFile read_results(std::istream& in)
{
    ResultsFile f;
    std::string line;
    bool header = false;
    bool summary = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        if (j.contains("schema")) {
            if (j["schema"] != kResultsSchema) throw std::runtime_error("results: unsupported schema");
            f.config = json_config(j.at("config"));
            header = true;
        } else if (j.contains("run")) {
            f.records.push_back(json_record(j["run"]));
        } else if (j.contains("summary")) {
            f.summary = json_summary(j["summary"]);
            summary = true;
        } else {
            throw std::runtime_error("results: unrecognised line");
        }
    }
    if (!header || !summary) throw std::runtime_error("results: missing header or summary");
    return f;
}

} // namespace rfa
