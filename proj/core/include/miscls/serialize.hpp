#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "miscls/fitters.hpp"
#include "miscls/inference.hpp"
#include "miscls/simulate.hpp"

namespace miscls {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Writes to <path>.tmp and renames, so readers never observe partial files.
void atomic_write_file(const std::string& path, const std::string& content);

nlohmann::json fit_result_to_json(const FitResult& fit);
FitResult fit_result_from_json(const nlohmann::json& j);
FitResult load_fit_result(const std::string& path);

// Coefficient table: name, estimate, se, lo, hi (blank outside the support).
std::string coefficients_csv(const FitResult& fit, const std::vector<Interval>& intervals);

nlohmann::json metrics_report_to_json(const MetricsReport& report, const SimSetting& st);

// Long-format per-replication table: one row per (replication, coefficient).
std::string replications_csv(const std::vector<ReplicationRecord>& records, const SimSetting& st);

std::string tuning_trace_csv(const std::vector<TuneCandidate>& trace);

}  // namespace miscls
