#pragma once

#include <string>
#include <vector>

#include "pathlaw/experiments.hpp"

namespace pathlaw {

// UTF-8 JSON with IEEE-754 doubles at 17 significant digits and a stable
// key order: {spec, tests[], overall_pass, wall_time_s}.
std::string to_json(const ExperimentReport& report);

// RFC-4180 CSV, one row per member test across all reports.
std::string reports_csv(const std::vector<ExperimentReport>& reports);

// Suite summary with build id, seed, and every resolved spec.
std::string suite_summary_json(const std::vector<ExperimentReport>& reports,
                               std::uint64_t seed,
                               const std::string& build_id);
std::string suite_summary_csv(const std::vector<ExperimentReport>& reports,
                              std::uint64_t seed,
                              const std::string& build_id);

}  // namespace pathlaw
