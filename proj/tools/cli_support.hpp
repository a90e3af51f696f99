#pragma once

// Plumbing for the command-line tool: config files, tolerance overrides, output paths and
// loading potentials from their JSON headers.

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "superint/error.hpp"
#include "superint/observables.hpp"
#include "superint/potential_spec.hpp"

namespace superint::cli {

/// Bad flags, config keys or input files. Maps to exit status 1.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Fills options of `app` that were not given on the command line from a JSON object whose
/// keys are option names without the leading dashes. "tol" may hold an object of
/// tolerance overrides, returned as name=value strings. Unknown keys are rejected.
std::vector<std::string> apply_config(CLI::App& app, const nlohmann::json& config);

/// Named tolerances with defaults. Overrides for names a command does not use are rejected.
class Tolerances {
public:
    explicit Tolerances(std::map<std::string, double> defaults) : values_(std::move(defaults)) {}
    void apply(const std::vector<std::string>& overrides);
    double operator[](const std::string& name) const { return values_.at(name); }
    nlohmann::json to_json() const { return values_; }

private:
    std::map<std::string, double> values_;
};

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

/// --out if given, else $SUPERINT_OUT, else "superint-out". Created on demand.
std::filesystem::path output_directory(const std::string& flag);

/// Rebuilds a potential from a header file. Analytic families come back from their
/// parameters; tabulated ones need a "table" entry naming a `theta,S` CSV next to the header.
PotentialSpec load_potential(const std::filesystem::path& header_path);

/// Header JSON for a potential, with the table reference when one was written.
nlohmann::json potential_header(const PotentialSpec& v, const std::string& table_file = "");

/// Angular window where S is finite and meaningful: the table range for sampled
/// potentials, one wedge for sector families, the full circle otherwise.
std::pair<double, double> theta_window(const PotentialSpec& v);

/// Random phase points with r in [0.5, 2], theta inside `window` (kept 5% away from its
/// ends) and momenta in [-1.5, 1.5]; points where |V| exceeds 1e6 are redrawn.
std::vector<PhasePoint> sample_points(const PotentialSpec& v, int count, std::mt19937_64& rng);

PhasePoint phase_point_from_json(const nlohmann::json& j);

}  // namespace superint::cli
