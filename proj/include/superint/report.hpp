#pragma once

// The JSON report layout shared by every command: schema version, command name, echoed
// inputs, results and an overall pass flag. Wall-clock data lives only under "timestamp".

#include <string>

#include <json.hpp>

namespace superint {

inline constexpr int kReportSchema = 1;
inline constexpr const char* kLibraryVersion = "0.1.0";

/// Skeleton with schema, command, versions and inputs.
nlohmann::json make_report(const std::string& command, const nlohmann::json& inputs);

/// Sets "passed" and the "timestamp" object (UTC start time plus any timing data).
void finish_report(nlohmann::json& report, bool passed, const std::string& started_utc,
                   const nlohmann::json& timing = nlohmann::json::object());

/// Current UTC time as ISO 8601.
std::string utc_now();

}  // namespace superint
