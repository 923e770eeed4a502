#pragma once

#include "rfa/simnet.hpp"
#include "rfa/trace.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rfa {

/// Numerical slack added to every distance bound.
inline constexpr double kBoundSlack = 1e-9;

struct Violation {
    std::string check; // e.g. "L-ready11", "consistency", "election"
    std::string detail;
    std::uint64_t event_index = 0;

    bool operator==(const Violation&) const = default;
};

/// Everything derived from one trace. The lemma checks (ready proximity, termination,
/// correctness, consistency) only run on conditioned traces; L-causal, election and the
/// structural checks run on every trace.
struct TraceAnalysis {
    RunStatus status = RunStatus::error;
    std::string error;
    bool conditioned = true;
    std::size_t link_estimates = 0; // correct -> correct measured deliveries
    std::size_t link_misses = 0;    // ... whose estimate was farther than delta
    std::size_t correct_count = 0;
    std::size_t terminated_count = 0; // correct nodes with a final output
    std::vector<bool> terminated;     // per node; false for faulty nodes
    std::vector<std::optional<Vec3>> outputs;
    double max_pairwise = 0.0;
    std::optional<double> sender_distance;
    std::vector<std::optional<std::int64_t>> elected;
    std::uint64_t deliveries = 0;
    std::vector<Violation> violations;

    bool all_correct_terminated() const { return terminated_count == correct_count; }
};

TraceAnalysis analyze_trace(const EventTrace& trace);

/// The violation list of analyze_trace.
std::vector<Violation> monitor_trace(const EventTrace& trace);

} // namespace rfa
