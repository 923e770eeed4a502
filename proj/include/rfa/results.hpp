#pragma once

#include "rfa/experiment.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace rfa {

inline constexpr const char* kResultsSchema = "rfa-results/1";

/// Line-delimited JSON: schema/config header, one line per run, then the summary.
void write_results(std::ostream& out, const ExperimentResult& result);
void write_traces(std::ostream& out, const std::vector<EventTrace>& traces);

struct ResultsFile {
    ExperimentConfig config;
    std::vector<RunRecord> records;
    Summary summary;
};

/// Throws std::runtime_error on malformed input.
ResultsFile read_results(std::istream& in);

} // namespace rfa
