#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace specdiff {

/// One acceptance criterion: thresholds are fixed in acceptance.cpp.
struct ClauseResult {
    int id = 0;
    std::string title;
    std::string field;         // report field carrying the verdict
    bool pass = false;
    nlohmann::json measured;
    nlohmann::json thresholds;
    std::string summary;       // one-line digest of the deciding numbers
    double seconds = 0.0;      // wall time; kept out of the JSON report
};

struct AcceptanceOptions {
    std::uint64_t seed = 7;    // first seed of the random identity suite
    int jobs = 1;
};

struct AcceptanceReport {
    std::vector<ClauseResult> clauses;  // ordered by id
    bool pass = false;
    double seconds = 0.0;
    nlohmann::json json;                // deterministic per seed (no timings)
    nlohmann::json timing;
};

AcceptanceReport verify_all(const AcceptanceOptions& options);

/// "[PASS] 6 hankel-suite: ..." style line.
std::string format_clause(const ClauseResult& clause);

}  // namespace specdiff
