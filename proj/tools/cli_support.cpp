#include "cli_support.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>

#include "superint/compat.hpp"
#include "superint/integrals.hpp"
#include "superint/potentials.hpp"

namespace superint::cli {

namespace fs = std::filesystem;

namespace {

std::string scalar_text(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw UsageError("config value " + v.dump() + " is not a scalar");
}

}  // namespace

std::vector<std::string> apply_config(CLI::App& app, const nlohmann::json& config) {
    if (!config.is_object()) throw UsageError("config must be a JSON object");
    std::vector<std::string> tolerances;
    for (const auto& [key, value] : config.items()) {
        if (key == "tol") {
            if (!value.is_object()) throw UsageError("config key 'tol' must be an object");
            for (const auto& [name, v] : value.items()) tolerances.push_back(name + "=" + scalar_text(v));
            continue;
        }
        CLI::Option* opt = app.get_option_no_throw("--" + key);
        if (opt == nullptr || key == "config") throw UsageError("unknown config key '" + key + "'");
        if (opt->count() > 0) continue;  // the command line wins
        if (value.is_array()) {
            for (const auto& v : value) opt->add_result(scalar_text(v));
        } else {
            opt->add_result(scalar_text(value));
        }
        try {
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError("config key '" + key + "': " + e.what());
        }
    }
    return tolerances;
}

void Tolerances::apply(const std::vector<std::string>& overrides) {
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("tolerance override '" + item + "' is not name=value");
        const std::string name = item.substr(0, eq);
        const auto it = values_.find(name);
        if (it == values_.end()) throw UsageError("unknown tolerance '" + name + "' for this command");
        try {
            std::size_t used = 0;
            const double v = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1 || !(v > 0.0)) throw std::invalid_argument("bad");
            it->second = v;
        } catch (const std::exception&) {
            throw UsageError("tolerance '" + name + "' needs a positive number");
        }
    }
}

nlohmann::json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(path.string() + ": " + e.what());
    }
}

void write_json_file(const fs::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

fs::path output_directory(const std::string& flag) {
    fs::path dir = "superint-out";
    if (!flag.empty()) {
        dir = flag;
    } else if (const char* env = std::getenv("SUPERINT_OUT"); env != nullptr && *env != '\0') {
        dir = env;
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw UsageError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

PotentialSpec load_potential(const fs::path& header_path) {
    nlohmann::json header = read_json_file(header_path);
    if (!header.is_object() || !header.contains("family")) throw UsageError(header_path.string() + ": missing 'family'");
    if (header.contains("table")) {
        const fs::path table = header_path.parent_path() / header["table"].get<std::string>();
        header.erase("table");
        std::ifstream csv(table);
        if (!csv) throw UsageError("cannot open potential table " + table.string());
        return read_potential(header, csv);
    }
    const std::string family = header["family"].get<std::string>();
    const nlohmann::json p = header.value("parameters", nlohmann::json::object());
    const double hbar = header.value("hbar", 0.0);
    PotentialSpec v;
    if (family == "ttw") {
        v = p.contains("m") ? ttw(p.at("b"), p.at("alpha"), p.at("beta"), p.at("m"), p.at("n"))
                            : ttw_real_k(p.at("b"), p.at("alpha"), p.at("beta"), p.at("k"));
    } else if (family == "pw") {
        v = pw(p.at("a"), p.at("mu"), p.at("nu"), p.at("m"), p.at("n"));
    } else if (family.rfind("standard-", 0) == 0) {
        const AngularFamily f = parse_angular_family(family.substr(9));
        const PolarLeadingSpec spec = any_spec_to_polar(p.at("leading"));
        const auto names = angular_family_basis(spec, f).names;
        std::vector<double> constants;
        for (const auto& n : names) constants.push_back(p.at("constants").at(n).get<double>());
        v = standard_quantum_T(spec, f, constants, hbar, p.value("radial_coefficient", 1.0));
    } else {
        throw UsageError("family '" + family + "' is tabulated; its header needs a 'table' entry");
    }
    v.hbar = hbar;
    return v;
}

nlohmann::json potential_header(const PotentialSpec& v, const std::string& table_file) {
    nlohmann::json h = v.header_json();
    if (!table_file.empty()) h["table"] = table_file;
    return h;
}

std::pair<double, double> theta_window(const PotentialSpec& v) {
    if (v.angular_table) return {v.angular_table->front(), v.angular_table->back()};
    if (v.sector && v.parameters.contains("k")) {
        const double k = v.parameters["k"].get<double>();
        const double width = v.family == "pw" ? std::numbers::pi / k : std::numbers::pi / (2.0 * k);
        return {0.0, width};
    }
    return {0.0, 2.0 * std::numbers::pi};
}

std::vector<PhasePoint> sample_points(const PotentialSpec& v, int count, std::mt19937_64& rng) {
    const auto [lo, hi] = theta_window(v);
    const double margin = 0.05 * (hi - lo);
    std::uniform_real_distribution<double> radius(0.5, 2.0), angle(lo + margin, hi - margin), momentum(-1.5, 1.5);
    const FieldExpr V = v.polar_field();
    std::vector<PhasePoint> out;
    int attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > 100 * count + 1000) throw DomainError("could not sample points where the potential is finite");
        const double r = radius(rng), t = angle(rng);
        const double px = momentum(rng), py = momentum(rng);
        const double value = V.eval(r, t);
        if (!std::isfinite(value) || std::abs(value) > 1e6) continue;
        out.push_back({r * std::cos(t), r * std::sin(t), px, py});
    }
    return out;
}

PhasePoint phase_point_from_json(const nlohmann::json& j) {
    try {
        if (j.is_array() && j.size() == 4) return {j[0], j[1], j[2], j[3]};
        for (const auto& [key, value] : j.items())
            if (key != "x" && key != "y" && key != "px" && key != "py") throw UsageError("unknown initial condition key '" + key + "'");
        return {j.at("x"), j.at("y"), j.at("px"), j.at("py")};
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("initial condition needs x, y, px, py: ") + e.what());
    }
}

}  // namespace superint::cli
