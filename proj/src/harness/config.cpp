#include "rfa/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <string>

namespace rfa {

namespace {

std::string normalize_key(std::string_view key)
{
    std::string k(key);
    for (char& c : k) {
        if (c == '-') c = '_';
    }
    return k;
}

template <typename T>
T parse_integer(std::string_view key, std::string_view value)
{
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("invalid integer for " + std::string(key) + ": '" + std::string(value) + "'");
    }
    return out;
}

double parse_real(std::string_view key, std::string_view value)
{
    try {
        std::size_t used = 0;
        const std::string s(value);
        const double d = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("invalid number for " + std::string(key) + ": '" + std::string(value) + "'");
    }
}

bool parse_bool(std::string_view key, std::string_view value)
{
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ConfigError("invalid boolean for " + std::string(key) + ": '" + std::string(value) + "'");
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

std::string_view mode_name(Mode m)
{
    return m == Mode::arcast ? "arcast" : "agree";
}

void ExperimentConfig::validate() const
{
    if (n < 4) throw ConfigError("n must be at least 4 (got " + std::to_string(n) + ")");
    if (n > kMaxNodes) throw ConfigError("n must be at most " + std::to_string(kMaxNodes));
    if (t >= n) throw ConfigError("t must be smaller than n");
    if (4 * t >= n && !allow_excess_faults) {
        const std::size_t max_t = (n - 1) / 4;
        throw ConfigError("t < n/4 requires t <= " + std::to_string(max_t) + " for n = " + std::to_string(n) +
                          " (got t = " + std::to_string(t) + "; pass --allow-excess-faults for a violation study)");
    }
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
    if (qubits_per_axis < 1) throw ConfigError("qubits per axis must be at least 1");
    if (trials < 1) throw ConfigError("trials must be at least 1");
    if (max_events < 1) throw ConfigError("max_events must be at least 1");
    if (fairness_bound < 1) throw ConfigError("fairness bound must be at least 1");
    if (threads < 1) throw ConfigError("threads must be at least 1");
    if (faulty_sender && t == 0) throw ConfigError("a faulty sender needs t >= 1");
}

void apply_config_value(ExperimentConfig& cfg, std::string_view raw_key, std::string_view value)
{
    const std::string key = normalize_key(raw_key);
    if (key == "mode") {
        if (value == "arcast") cfg.mode = Mode::arcast;
        else if (value == "agree") cfg.mode = Mode::agree;
        else throw ConfigError("mode must be arcast or agree");
    } else if (key == "n") {
        cfg.n = parse_integer<std::size_t>(key, value);
    } else if (key == "t") {
        cfg.t = parse_integer<std::size_t>(key, value);
    } else if (key == "delta") {
        cfg.delta = parse_real(key, value);
    } else if (key == "qubits" || key == "qubits_per_axis") {
        cfg.qubits_per_axis = parse_integer<std::int64_t>(key, value);
    } else if (key == "ideal_channel") {
        cfg.ideal_channel = parse_bool(key, value);
    } else if (key == "ic_mode") {
        const auto m = parse_ic_mode(value);
        if (!m) throw ConfigError("ic_mode must be strict or core_set");
        cfg.ic_mode = *m;
    } else if (key == "adversary" || key == "fault_strategy") {
        const auto k = parse_fault_kind(value);
        if (!k) throw ConfigError("unknown adversary '" + std::string(value) + "'");
        cfg.fault = *k;
    } else if (key == "scheduler" || key == "scheduler_policy") {
        const auto k = parse_policy_kind(value);
        if (!k) throw ConfigError("unknown scheduler '" + std::string(value) + "'");
        cfg.scheduler = *k;
    } else if (key == "trials") {
        cfg.trials = parse_integer<std::size_t>(key, value);
    } else if (key == "seed" || key == "master_seed") {
        cfg.master_seed = parse_integer<std::uint64_t>(key, value);
    } else if (key == "max_events") {
        cfg.max_events = parse_integer<std::uint64_t>(key, value);
    } else if (key == "fairness_bound") {
        cfg.fairness_bound = parse_integer<std::uint64_t>(key, value);
    } else if (key == "allow_excess_faults") {
        cfg.allow_excess_faults = parse_bool(key, value);
    } else if (key == "faulty_sender") {
        cfg.faulty_sender = parse_bool(key, value);
    } else if (key == "frames") {
        if (value == "random") cfg.frames = FrameChoice::random;
        else if (value == "identity") cfg.frames = FrameChoice::identity;
        else throw ConfigError("frames must be random or identity");
    } else if (key == "inputs") {
        if (value == "local_z") cfg.inputs = InputChoice::local_z;
        else if (value == "random") cfg.inputs = InputChoice::random;
        else throw ConfigError("inputs must be local_z or random");
    } else if (key == "threads") {
        cfg.threads = parse_integer<std::size_t>(key, value);
    } else {
        throw ConfigError("unknown configuration key '" + std::string(raw_key) + "'");
    }
}

void load_config(std::istream& in, ExperimentConfig& cfg)
{
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = line;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        apply_config_value(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
}

void load_config_file(const std::string& path, ExperimentConfig& cfg)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    load_config(in, cfg);
}

} // namespace rfa
