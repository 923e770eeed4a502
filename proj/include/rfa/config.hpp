#pragma once

#include "rfa/byzantine.hpp"
#include "rfa/ic_oracle.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace rfa {

enum class Mode : std::uint8_t { arcast, agree };
std::string_view mode_name(Mode m);

/// How node frames and agreement inputs are drawn.
enum class FrameChoice : std::uint8_t { random, identity };
enum class InputChoice : std::uint8_t { local_z, random };

inline constexpr std::size_t kMaxNodes = 32;

struct ExperimentConfig {
    Mode mode = Mode::arcast;
    std::size_t n = 9;
    std::size_t t = 2;
    double delta = 0.02;
    std::int64_t qubits_per_axis = 20000;
    bool ideal_channel = false;
    IcMode ic_mode = IcMode::strict;
    FaultKind fault = FaultKind::silent;
    PolicyKind scheduler = PolicyKind::fifo;
    std::size_t trials = 1;
    std::uint64_t master_seed = 1;
    std::uint64_t max_events = 1000000;
    std::uint64_t fairness_bound = 10000;
    bool allow_excess_faults = false;
    bool faulty_sender = false; // arcast: node 0 (the sender) is among the faulty nodes
    FrameChoice frames = FrameChoice::random;
    InputChoice inputs = InputChoice::local_z;
    std::size_t threads = 1;

    /// Throws ConfigError with a readable message.
    void validate() const;
    /// t >= n/4, only legal with allow_excess_faults. Bounds are recorded, not asserted.
    bool violation_study() const { return 4 * t >= n; }
    bool operator==(const ExperimentConfig&) const = default;
};

/// Sets one field from its textual key (the long CLI flag name without dashes, with '_'
/// or '-' separators). Throws ConfigError on unknown keys or bad values.
void apply_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Reads `key = value` lines; '#' starts a comment.
void load_config(std::istream& in, ExperimentConfig& cfg);
void load_config_file(const std::string& path, ExperimentConfig& cfg);

} // namespace rfa
