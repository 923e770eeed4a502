#pragma once

#include "rfa/config.hpp"
#include "rfa/monitor.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rfa {

struct RunRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    RunStatus status = RunStatus::error;
    std::vector<bool> terminated;
    std::vector<std::optional<Vec3>> outputs; // global frame
    bool conditioned = false;
    double max_pairwise = 0.0;
    std::optional<double> sender_distance;
    std::optional<std::int64_t> elected; // common k, agree mode
    std::vector<Violation> violations;
    std::uint64_t event_count = 0;
    std::string error;
    bool expected_termination = true; // false when a faulty sender may legitimately stall

    bool operator==(const RunRecord&) const = default;
};

/// Recomputable from the records alone.
struct Summary {
    std::size_t trials = 0;
    std::size_t terminated = 0;  // runs in which every correct node terminated
    std::size_t conditioned = 0;
    std::size_t with_violations = 0;
    std::size_t violations = 0;
    std::size_t errors = 0;
    std::size_t unexpected_nontermination = 0;
    double max_pairwise_conditioned = 0.0;
    double max_sender_distance_conditioned = 0.0;
    double min_slack_42 = 0.0; // 42 delta minus the largest conditioned pairwise distance

    bool operator==(const Summary&) const = default;
};

struct TrialResult {
    RunRecord record;
    EventTrace trace;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<RunRecord> records;
    Summary summary;
    std::vector<EventTrace> traces; // empty unless requested
};

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial);

/// One seeded run. Never throws for protocol or adversary failures; they land in the
/// record's error field and status.
TrialResult run_trial(const ExperimentConfig& cfg, std::size_t trial);

/// Validates cfg, then runs every trial (across cfg.threads workers); records come back in
/// trial order regardless of the worker count.
ExperimentResult run_experiment(const ExperimentConfig& cfg, bool keep_traces = false);

Summary summarize(const ExperimentConfig& cfg, const std::vector<RunRecord>& records);

/// Exit-code rule: no violations (outside violation studies), no errors, no unexpected
/// non-termination.
bool experiment_passed(const ExperimentConfig& cfg, const Summary& s);

} // namespace rfa
