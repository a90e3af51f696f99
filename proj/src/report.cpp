#include <chrono>
#include <ctime>

#include <Eigen/Core>

#include "superint/report.hpp"

namespace superint {

nlohmann::json make_report(const std::string& command, const nlohmann::json& inputs) {
    const std::string eigen = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION);
    const std::string json = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                             std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                             std::to_string(NLOHMANN_JSON_VERSION_PATCH);
    return {{"schema", kReportSchema},
            {"command", command},
            {"versions", {{"superint", kLibraryVersion}, {"eigen", eigen}, {"nlohmann_json", json}}},
            {"inputs", inputs}};
}

void finish_report(nlohmann::json& report, bool passed, const std::string& started_utc, const nlohmann::json& timing) {
    report["passed"] = passed;
    nlohmann::json ts = timing.is_object() ? timing : nlohmann::json::object();
    ts["started_utc"] = started_utc;
    ts["finished_utc"] = utc_now();
    report["timestamp"] = ts;
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace superint
