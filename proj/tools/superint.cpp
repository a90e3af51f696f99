// superint: command-line front end. Every command writes <out>/<command>.json with the
// shared report layout and exits 0 when its checks pass, 2 when they fail and 1 on bad
// usage or configuration.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>

#include "cli_support.hpp"
#include "criteria.hpp"
#include "superint/compat.hpp"
#include "superint/dynamics.hpp"
#include "superint/integrals.hpp"
#include "superint/parallel.hpp"
#include "superint/potentials.hpp"
#include "superint/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace superint::cli {
namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;

struct Common {
    std::string out;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::string config;
    std::vector<std::string> tol;
};

struct Outcome {
    json inputs = json::object();
    json results = json::object();
    json tolerances = json::object();
    bool passed = false;
    std::vector<std::string> lines;  // printed after the report is written
};

using Runner = std::function<Outcome(const fs::path& out)>;

int run_command(const std::string& name, const Common& common, const Runner& body) {
    const fs::path out = output_directory(common.out);
    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body(out);
    } catch (const UsageError&) {
        throw;
    } catch (const InvalidArgument&) {
        throw;
    } catch (const OrderOverflow&) {
        throw;  // the inputs ask for more derivatives than they carry
    } catch (const Error& e) {
        // Numerical failure: the checks did not pass, but the run itself was well formed.
        o.passed = false;
        o.results = {{"error", e.what()}};
        o.lines.push_back(std::string("error: ") + e.what());
    }
    o.inputs["seed"] = common.seed;
    o.inputs["jobs"] = common.jobs;
    json report = make_report(name, o.inputs);
    report["tolerances"] = o.tolerances;
    report["results"] = o.results;
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    finish_report(report, o.passed, started, {{"seconds", seconds}});
    const fs::path path = out / (name + ".json");
    write_json_file(path, report);
    for (const auto& l : o.lines) std::cout << l << '\n';
    std::cout << name << ": " << (o.passed ? "passed" : "FAILED") << " (" << path.string() << ")\n";
    return o.passed ? kExitPass : kExitFail;
}

RadialPart radial_from(const std::string& kind, double a, double b, double d) {
    switch (parse_radial_kind(kind)) {
        case RadialKind::zero: return RadialPart::zero();
        case RadialKind::kepler: return RadialPart::kepler(a);
        case RadialKind::oscillator: return RadialPart::oscillator(b);
        case RadialKind::onofri: return RadialPart::onofri(a, d);
        default: throw UsageError("radial kind '" + kind + "' cannot be built from flags");
    }
}

// lcc-check -----------------------------------------------------------------------------

struct LccOpts {
    std::string spec, potential, radial = "zero";
    double a = -1.0, b = 1.0, d = 1.0;
    int trials = 100;
    int harmonics = 4;
};

FieldExpr random_trig_s(std::mt19937_64& rng, int harmonics) {
    std::uniform_real_distribution<double> base(1.0, 2.0), amp(-0.3, 0.3);
    const FieldExpr th = FieldExpr::variable(0);
    FieldExpr s(base(rng));
    for (int h = 1; h <= harmonics; ++h)
        s = s + (amp(rng) / h) * cos(static_cast<double>(h) * th) + (amp(rng) / h) * sin(static_cast<double>(h) * th);
    return s;
}

Outcome lcc_check(const Common& c, const LccOpts& o) {
    Tolerances tol({{"lcc", 1e-8}});
    tol.apply(c.tol);
    if (o.trials < 1) throw UsageError("--trials must be >= 1");
    const PolarLeadingSpec polar = any_spec_to_polar(read_json_file(o.spec));
    const LeadingTermSpec spec = b_to_a(polar);
    std::optional<PotentialSpec> fixed;
    if (!o.potential.empty()) fixed = load_potential(o.potential);
    const RadialPart radial = radial_from(o.radial, o.a, o.b, o.d);

    // Each trial draws its own S (unless a potential file fixes V) and point.
    std::vector<double> worst(static_cast<std::size_t>(o.trials));
    std::vector<std::uint64_t> seeds(worst.size());
    std::mt19937_64 master(c.seed);
    for (auto& s : seeds) s = master();
    parallel_for(worst.size(), c.jobs, [&](std::size_t i) {
        std::mt19937_64 rng(seeds[i]);
        PotentialSpec v;
        if (fixed) {
            v = *fixed;
        } else {
            v.radial = radial;
            v.angular = random_trig_s(rng, o.harmonics);
        }
        const PhasePoint p = sample_points(v, 1, rng).front();
        worst[i] = lcc_cartesian(spec, v.cartesian_field(), {p.x, p.y}).relative();
    });
    const double max_rel = *std::max_element(worst.begin(), worst.end());
    Outcome out;
    out.inputs = {{"spec", o.spec}, {"leading", to_json(polar)}, {"trials", o.trials}};
    if (fixed) {
        out.inputs["potential"] = o.potential;
    } else {
        out.inputs["R"] = {{"kind", o.radial}, {"a", o.a}, {"b", o.b}, {"d", o.d}};
        out.inputs["harmonics"] = o.harmonics;
    }
    out.tolerances = tol.to_json();
    out.results = {{"max_relative_residual", max_rel}, {"trials", o.trials}};
    out.passed = max_rel < tol["lcc"];
    std::ostringstream s;
    s << "max relative LCC residual " << max_rel << " over " << o.trials << " trials";
    out.lines.push_back(s.str());
    return out;
}

// radial-scan ---------------------------------------------------------------------------

struct RadialOpts {
    int N = 4;
    std::string radial = "zero";
    double a = -1.0, b = 1.0, d = 1.0;
    int radii = 16;
    bool singlets = false;
    std::string expect = "nontrivial";
};

Outcome radial_scan(const Common& c, const RadialOpts& o) {
    Tolerances tol({{"threshold", 1e-8}, {"gap", 1e2}});
    tol.apply(c.tol);
    if (o.expect != "nontrivial" && o.expect != "empty" && o.expect != "any")
        throw UsageError("--expect must be nontrivial, empty or any");
    RadialScanOptions opt;
    opt.radii = o.radii;
    opt.include_singlets = o.singlets;
    opt.jobs = c.jobs;
    opt.nullspace.threshold = tol["threshold"];
    opt.nullspace.gap = tol["gap"];
    const auto sys = admissible_b_space(o.N, radial_from(o.radial, o.a, o.b, o.d), opt);
    Outcome out;
    out.inputs = {{"N", o.N}, {"radial", {{"kind", o.radial}, {"a", o.a}, {"b", o.b}, {"d", o.d}}}, {"radii", o.radii},
                  {"include_singlets", o.singlets}, {"expect", o.expect}};
    out.tolerances = tol.to_json();
    out.results = sys.to_json();
    const int dim = sys.nullspace.dimension;
    const bool decided = sys.nullspace.gap >= tol["gap"];
    out.passed = decided && (o.expect == "any" || (o.expect == "nontrivial" ? dim >= 1 : dim == 0));
    std::ostringstream s;
    s << "nullspace dimension " << dim << ", gap " << sys.nullspace.gap;
    out.lines.push_back(s.str());
    return out;
}

// construct -----------------------------------------------------------------------------

struct ConstructOpts {
    std::string family, name;
    double b = 1.0, alpha = 0.1, beta = 0.1, k = 1.0, a = -1.0, mu = 0.1, nu = 0.1;
    int m = 1, n = 1;
    std::string spec, angular = "oscillator";
    std::vector<double> constants;
    double hbar = 0.0, radial_coefficient = 1.0;
    int N = 4;
    std::vector<double> cs = {0.1, 0.2, 0.0, 0.3};
    std::string tau_kind = "cos2";
    int branch = 1;
    double theta_lo = 0.2, theta_hi = 1.2, theta0 = 0.5, T0 = 0.5;
    std::vector<double> gammas = {0.125, -0.125, 0.125, 0.375};
    double tau0 = 0.5, P0 = 0.2, dP0 = 0.0;
    int table_points = 1024;
    int trials = 100;
};

Outcome construct(const Common& c, const ConstructOpts& o, const fs::path& dir) {
    Tolerances tol({{"separability", 1e-9}});
    tol.apply(c.tol);
    PotentialSpec v;
    json extra = json::object();
    bool tabulated = false;
    if (o.family == "ttw") {
        v = ttw(o.b, o.alpha, o.beta, o.m, o.n);
    } else if (o.family == "ttw-k") {
        v = ttw_real_k(o.b, o.alpha, o.beta, o.k);
    } else if (o.family == "pw") {
        v = pw(o.a, o.mu, o.nu, o.m, o.n);
    } else if (o.family == "standard") {
        if (o.spec.empty()) throw UsageError("--family standard needs --spec");
        v = standard_quantum_T(any_spec_to_polar(read_json_file(o.spec)), parse_angular_family(o.angular), o.constants,
                               o.hbar, o.radial_coefficient);
    } else if (o.family == "exotic-classical") {
        if (o.cs.size() != 4) throw UsageError("--c needs 4 values");
        ExoticClassicalOptions opt;
        opt.N = o.N;
        opt.c = {o.cs[0], o.cs[1], o.cs[2], o.cs[3]};
        opt.tau_kind = parse_tau_kind(o.tau_kind);
        opt.branch = o.branch;
        opt.theta_lo = o.theta_lo;
        opt.theta_hi = o.theta_hi;
        opt.theta0 = o.theta0;
        opt.T0 = o.T0;
        opt.b = o.b;
        const auto sol = exotic_classical_T(opt);
        v = sol.spec;
        extra["branch_events"] = sol.branch_events;
        tabulated = true;
    } else if (o.family == "exotic-quantum") {
        if (o.gammas.size() != 4) throw UsageError("--gammas needs 4 values");
        const auto sol = p6_solve({o.gammas[0], o.gammas[1], o.gammas[2], o.gammas[3]}, o.tau0, o.P0, o.dP0);
        ExoticQuantumOptions opt;
        opt.tau_kind = parse_tau_kind(o.tau_kind);
        opt.b = o.b;
        opt.table_points = o.table_points;
        v = exotic_quantum_T(o.N, sol, o.hbar, opt);
        extra["p6_segments"] = sol.segments.size();
        tabulated = true;
    } else {
        throw UsageError("unknown family '" + o.family + "' (ttw, ttw-k, pw, standard, exotic-classical, exotic-quantum)");
    }
    const std::string stem = o.name.empty() ? o.family : o.name;
    std::string table;
    if (tabulated) {
        table = stem + ".csv";
        std::ofstream csv(dir / table);
        const auto [lo, hi] = theta_window(v);
        write_angular_csv(csv, v, lo, hi, o.table_points);
    }
    write_json_file(dir / (stem + ".json"), potential_header(v, table));

    // Separability check: {X, H} vanishes wherever the potential is finite.
    const MomentumPolynomial x = x_of(v), h = hamiltonian_of(v);
    const MomentumPolynomial bracket = poisson(x, h);
    std::mt19937_64 rng(c.seed);
    double worst = 0.0;
    for (const auto& p : sample_points(v, o.trials, rng)) {
        const double scale = (1.0 + std::abs(x.evaluate(p))) * (1.0 + std::abs(h.evaluate(p)));
        worst = std::max(worst, std::abs(bracket.evaluate(p)) / scale);
    }
    Outcome out;
    out.inputs = {{"family", o.family}, {"name", stem}, {"parameters", v.parameters}};
    out.tolerances = tol.to_json();
    out.results = {{"potential", potential_header(v, table)},
                   {"files", tabulated ? json{stem + ".json", table} : json{stem + ".json"}},
                   {"separability_residual", worst},
                   {"details", extra}};
    out.passed = worst < tol["separability"];
    out.lines.push_back("wrote " + (dir / (stem + ".json")).string());
    return out;
}

// orbit ---------------------------------------------------------------------------------

struct OrbitOpts {
    std::string potential, init;
    int periods = 20;
    double dt = 1e-3;
    int order = 4;
    long q_max = 32;
    double max_time = 1e4;
    bool no_trajectory = false;
    std::string expect = "any";
};

Outcome orbit(const Common& c, const OrbitOpts& o, const fs::path& dir) {
    Tolerances tol({{"closure", 1e-5}, {"rational", 1e-6}, {"drift", 1e-8}});
    tol.apply(c.tol);
    if (o.expect != "any" && o.expect != "closed" && o.expect != "open")
        throw UsageError("--expect must be any, closed or open");
    const PotentialSpec v = load_potential(o.potential);
    const PhasePoint init = phase_point_from_json(read_json_file(o.init));
    OrbitOptions opt;
    opt.control.dt = o.dt;
    opt.control.order = o.order;
    opt.control.seed = c.seed;
    opt.closure_tolerance = tol["closure"];
    opt.rational_tolerance = tol["rational"];
    opt.q_max = o.q_max;
    opt.max_time = o.max_time;
    opt.keep_trajectory = !o.no_trajectory;
    const OrbitReport rep = orbit_report(v, init, o.periods, opt);
    if (rep.trajectory) {
        std::ofstream csv(dir / "trajectory.csv");
        write_trajectory_csv(csv, *rep.trajectory);
    }
    double drift = 0.0;
    for (const auto& [name, d] : rep.drift) drift = std::max(drift, d);
    Outcome out;
    out.inputs = {{"potential", potential_header(v)},
                  {"init", {{"x", init.x}, {"y", init.y}, {"px", init.px}, {"py", init.py}}},
                  {"periods", o.periods},
                  {"dt", o.dt},
                  {"order", o.order},
                  {"expect", o.expect}};
    out.tolerances = tol.to_json();
    out.results = rep.to_json();
    if (rep.trajectory) out.results["trajectory_csv"] = "trajectory.csv";
    const bool expectation = o.expect == "any" || (o.expect == "closed") == rep.closed;
    out.passed = rep.bounded && drift < tol["drift"] && expectation;
    std::ostringstream s;
    s << (rep.closed ? "closed" : "not closed") << ", closure distance " << rep.closure_distance << ", rotation number "
      << rep.rotation_number << ", max drift " << drift;
    out.lines.push_back(s.str());
    return out;
}

// p6 ------------------------------------------------------------------------------------

struct P6Opts {
    std::vector<double> gammas = {0.125, -0.125, 0.125, 0.375};
    double tau0 = 0.5, P0 = 0.2, dP0 = 0.0;
    double lo = 0.05, hi = 0.95;
    int count = 1801;
};

Outcome p6(const Common& c, const P6Opts& o) {
    Tolerances tol({{"plug_back", 1e-7}});
    tol.apply(c.tol);
    if (o.gammas.size() != 4) throw UsageError("--gammas needs 4 values");
    const P6Gammas g{o.gammas[0], o.gammas[1], o.gammas[2], o.gammas[3]};
    const P6Solution sol = p6_solve(g, o.tau0, o.P0, o.dP0, P6Grid{o.lo, o.hi, o.count});
    double plug = 0.0;
    int checked = 0, flagged = 0;
    for (std::size_t i = 0; i < sol.tau.size(); ++i) {
        if (sol.flagged[i]) ++flagged;
        if (const auto r = p6_plug_back(sol, i)) {
            plug = std::max(plug, *r);
            ++checked;
        }
    }
    Outcome out;
    out.inputs = {{"gammas", o.gammas}, {"tau0", o.tau0}, {"P0", o.P0}, {"dP0", o.dP0}, {"grid", {o.lo, o.hi, o.count}}};
    out.tolerances = tol.to_json();
    out.results = {{"solution", sol.to_json()}, {"plug_back", plug}, {"checked_nodes", checked}, {"flagged_nodes", flagged}};
    out.passed = checked > 0 && plug < tol["plug_back"];
    std::ostringstream s;
    s << "plug-back " << plug << " at " << checked << " nodes, " << sol.segments.size() << " singular segments";
    out.lines.push_back(s.str());
    return out;
}

// dependence ----------------------------------------------------------------------------

struct DependenceOpts {
    std::string potential;
    std::vector<std::string> observables = {"H", "X", "Lz"};
    int samples = 300;
    int degree = 3;
    std::string expect = "any";
};

MomentumPolynomial named_observable(const std::string& name, const PotentialSpec& v) {
    if (name == "H") return hamiltonian_of(v);
    if (name == "X") return x_of(v);
    if (name == "Lz") return angular_momentum();
    if (name == "px") return momentum_x();
    if (name == "py") return momentum_y();
    if (name == "P2") return momentum_squared();
    throw UsageError("unknown observable '" + name + "' (H, X, Lz, px, py, P2)");
}

Outcome dependence(const Common& c, const DependenceOpts& o) {
    Tolerances tol({{"threshold", 1e-8}});
    tol.apply(c.tol);
    if (o.expect != "any" && o.expect != "syzygy" && o.expect != "independent")
        throw UsageError("--expect must be any, syzygy or independent");
    const PotentialSpec v = load_potential(o.potential);
    std::vector<MomentumPolynomial> obs;
    for (const auto& n : o.observables) obs.push_back(named_observable(n, v));
    std::mt19937_64 rng(c.seed);
    const auto points = sample_points(v, o.samples, rng);
    DependenceOptions opt;
    opt.max_degree = o.degree;
    opt.threshold = tol["threshold"];
    opt.seed = c.seed;
    const auto res = dependence_detect(sample_observables(obs, points, c.jobs), opt);
    Outcome out;
    out.inputs = {{"potential", potential_header(v)}, {"observables", o.observables}, {"samples", o.samples},
                  {"degree", o.degree}, {"expect", o.expect}};
    out.tolerances = tol.to_json();
    out.results = res.to_json(o.observables);
    out.passed = o.expect == "any" || (o.expect == "syzygy") == res.syzygy;
    out.lines.push_back(res.syzygy ? "syzygy at degree " + std::to_string(res.degree)
                                   : "no syzygy up to degree " + std::to_string(o.degree));
    return out;
}

// suite / report ------------------------------------------------------------------------

int suite(const Common& c, const std::string& name) {
    acceptance::suite_criteria(name);  // rejects unknown names before any work
    if (!c.tol.empty()) throw UsageError("the suites run at fixed tolerances; --tol is not accepted");
    const fs::path out = output_directory(c.out);
    acceptance::SuiteConfig config{name, c.seed, c.jobs};
    json report = acceptance::run_suite(config, [](const acceptance::CriterionResult& r) {
        std::cout << acceptance::result_line(r) << std::endl;
    });
    report["inputs"]["jobs"] = c.jobs;
    const fs::path path = out / ("suite-" + name + ".json");
    write_json_file(path, report);
    const bool passed = report.at("passed").get<bool>();
    std::cout << "suite " << name << ": " << (passed ? "passed" : "FAILED") << " (" << path.string() << ")\n";
    return passed ? kExitPass : kExitFail;
}

void require_report(const json& j, const std::string& path) {
    if (!j.is_object() || j.value("schema", 0) != kReportSchema || !j.contains("command") || !j.contains("passed"))
        throw UsageError(path + " is not a schema " + std::to_string(kReportSchema) + " report");
}

Outcome report_cmd(const std::string& input, const std::string& compare) {
    const json a = read_json_file(input);
    require_report(a, input);
    Outcome out;
    out.inputs = {{"input", input}};
    out.results = {{"command", a["command"]}, {"input_passed", a["passed"]}};
    out.lines.push_back(input + ": " + a["command"].get<std::string>() + ", " + (a["passed"].get<bool>() ? "passed" : "failed"));
    const json& res = a.value("results", json::object());
    if (res.contains("criteria")) {
        for (const auto& r : res["criteria"])
            out.lines.push_back("  criterion " + r["id"].dump() + " " + r["name"].get<std::string>() + ": " +
                                (r["passed"].get<bool>() ? "PASS" : "FAIL"));
    }
    if (res.contains("nullspace")) out.lines.push_back("  nullspace " + res["nullspace"].dump());
    out.passed = a["passed"].get<bool>();
    if (!compare.empty()) {
        const json b = read_json_file(compare);
        require_report(b, compare);
        const bool same = acceptance::deterministic_dump(a) == acceptance::deterministic_dump(b);
        out.inputs["compare"] = compare;
        out.results["identical"] = same;
        out.lines.push_back(std::string("reports are ") + (same ? "identical" : "different") + " apart from timestamps");
        out.passed = same;
    }
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Superintegrable systems separating in polar coordinates: construction and checks", "superint"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    app.set_version_flag("--version", kLibraryVersion);
    Common common;
    app.add_option("--out", common.out, "Output directory (default $SUPERINT_OUT or ./superint-out)");
    app.add_option("--seed", common.seed, "Seed for every random draw");
    app.add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--config", common.config, "JSON file of option values; unknown keys are rejected");
    app.add_option("--tol", common.tol, "Tolerance override name=value (repeatable)");

    LccOpts lcc;
    auto* s_lcc = app.add_subcommand("lcc-check", "Linear compatibility conditions of a leading term against potentials");
    s_lcc->add_option("--spec", lcc.spec, "Leading-term spec JSON (A or B form)");
    s_lcc->add_option("--potential", lcc.potential, "Potential header JSON; otherwise random S with --R");
    s_lcc->add_option("--R", lcc.radial, "Radial part: zero, kepler, oscillator, onofri");
    s_lcc->add_option("--a", lcc.a);
    s_lcc->add_option("--b", lcc.b);
    s_lcc->add_option("--d", lcc.d);
    s_lcc->add_option("--trials", lcc.trials);
    s_lcc->add_option("--harmonics", lcc.harmonics);

    RadialOpts rad;
    auto* s_rad = app.add_subcommand("radial-scan", "Admissible leading terms for a radial function");
    s_rad->add_option("--N", rad.N);
    s_rad->add_option("--radial", rad.radial, "zero, kepler, oscillator, onofri");
    s_rad->add_option("--a", rad.a);
    s_rad->add_option("--b", rad.b);
    s_rad->add_option("--d", rad.d);
    s_rad->add_option("--radii", rad.radii);
    s_rad->add_flag("--include-singlets", rad.singlets);
    s_rad->add_option("--expect", rad.expect, "nontrivial, empty or any");

    ConstructOpts con;
    auto* s_con = app.add_subcommand("construct", "Build a potential and write its header (and table)");
    s_con->add_option("--family", con.family);
    s_con->add_option("--name", con.name, "File stem (default: the family)");
    for (auto [flag, target] : std::initializer_list<std::pair<const char*, double*>>{
             {"--b", &con.b}, {"--alpha", &con.alpha}, {"--beta", &con.beta}, {"--k", &con.k}, {"--a", &con.a},
             {"--mu", &con.mu}, {"--nu", &con.nu}, {"--hbar", &con.hbar}, {"--radial-coefficient", &con.radial_coefficient},
             {"--theta-lo", &con.theta_lo}, {"--theta-hi", &con.theta_hi}, {"--theta0", &con.theta0}, {"--T0", &con.T0},
             {"--tau0", &con.tau0}, {"--P0", &con.P0}, {"--dP0", &con.dP0}})
        s_con->add_option(flag, *target);
    s_con->add_option("--m", con.m);
    s_con->add_option("--n", con.n);
    s_con->add_option("--N", con.N);
    s_con->add_option("--spec", con.spec);
    s_con->add_option("--angular", con.angular, "kepler, oscillator, free-odd, free-even");
    s_con->add_option("--constants", con.constants);
    s_con->add_option("--c", con.cs, "Four ODE constants");
    s_con->add_option("--tau-kind", con.tau_kind, "cos2, sin2, tan");
    s_con->add_option("--branch", con.branch);
    s_con->add_option("--gammas", con.gammas);
    s_con->add_option("--table-points", con.table_points);
    s_con->add_option("--trials", con.trials);

    OrbitOpts orb;
    auto* s_orb = app.add_subcommand("orbit", "Integrate an orbit and report closure and rotation number");
    s_orb->add_option("--potential", orb.potential);
    s_orb->add_option("--init", orb.init, "JSON with x, y, px, py");
    s_orb->add_option("--periods", orb.periods);
    s_orb->add_option("--dt", orb.dt);
    s_orb->add_option("--order", orb.order, "2 or 4");
    s_orb->add_option("--q-max", orb.q_max);
    s_orb->add_option("--max-time", orb.max_time);
    s_orb->add_flag("--no-trajectory", orb.no_trajectory);
    s_orb->add_option("--expect", orb.expect, "any, closed or open");

    P6Opts p6o;
    auto* s_p6 = app.add_subcommand("p6", "Solve Painleve VI on a grid with plug-back checks");
    s_p6->add_option("--gammas", p6o.gammas);
    s_p6->add_option("--tau0", p6o.tau0);
    s_p6->add_option("--P0", p6o.P0);
    s_p6->add_option("--dP0", p6o.dP0);
    s_p6->add_option("--grid-lo", p6o.lo);
    s_p6->add_option("--grid-hi", p6o.hi);
    s_p6->add_option("--grid-count", p6o.count);

    DependenceOpts dep;
    auto* s_dep = app.add_subcommand("dependence", "Search for polynomial relations among observables");
    s_dep->add_option("--potential", dep.potential);
    s_dep->add_option("--observables", dep.observables, "Any of H, X, Lz, px, py, P2")->delimiter(',');
    s_dep->add_option("--samples", dep.samples);
    s_dep->add_option("--degree", dep.degree);
    s_dep->add_option("--expect", dep.expect, "any, syzygy or independent");

    std::string suite_name = "acceptance";
    auto* s_suite = app.add_subcommand("suite", "Run a named check suite");
    s_suite->add_option("--name", suite_name, "acceptance or smoke");

    std::string input, compare;
    auto* s_rep = app.add_subcommand("report", "Summarize a report, optionally comparing two");
    s_rep->add_option("--input", input);
    s_rep->add_option("--compare", compare);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }
    CLI::App* sub = app.get_subcommands().front();
    if (!common.config.empty()) {
        const json cfg = read_json_file(common.config);
        // Global keys go to the top level, everything else to the subcommand.
        json local = json::object(), global = json::object();
        for (const auto& [k, v] : cfg.items())
            (k == "out" || k == "seed" || k == "jobs" ? global : local)[k] = v;
        apply_config(app, global);
        const auto tol = apply_config(*sub, local);
        common.tol.insert(common.tol.begin(), tol.begin(), tol.end());
    }
    if (common.jobs < 1) throw UsageError("--jobs must be >= 1");
    // Checked here rather than by the parser so that a config file can supply them.
    const std::map<std::string, std::vector<std::string>> required = {
        {"lcc-check", {"--spec"}},         {"radial-scan", {"--N"}},       {"construct", {"--family"}},
        {"orbit", {"--potential", "--init"}}, {"dependence", {"--potential"}}, {"report", {"--input"}}};
    if (const auto it = required.find(sub->get_name()); it != required.end())
        for (const auto& flag : it->second)
            if (sub->get_option(flag)->count() == 0) throw UsageError(flag + " is required");

    const std::string name = sub->get_name();
    if (name == "lcc-check") return run_command(name, common, [&](const fs::path&) { return lcc_check(common, lcc); });
    if (name == "radial-scan") return run_command(name, common, [&](const fs::path&) { return radial_scan(common, rad); });
    if (name == "construct") return run_command(name, common, [&](const fs::path& d) { return construct(common, con, d); });
    if (name == "orbit") return run_command(name, common, [&](const fs::path& d) { return orbit(common, orb, d); });
    if (name == "p6") return run_command(name, common, [&](const fs::path&) { return p6(common, p6o); });
    if (name == "dependence") return run_command(name, common, [&](const fs::path&) { return dependence(common, dep); });
    if (name == "suite") return suite(common, suite_name);
    return run_command(name, common, [&](const fs::path&) { return report_cmd(input, compare); });
}

}  // namespace
}  // namespace superint::cli

int main(int argc, char** argv) {
    try {
        return superint::cli::run(argc, argv);
    } catch (const superint::cli::UsageError& e) {
        std::cerr << "superint: " << e.what() << '\n';
    } catch (const superint::InvalidArgument& e) {
        std::cerr << "superint: " << e.what() << '\n';
    } catch (const superint::OrderOverflow& e) {
        std::cerr << "superint: " << e.what() << '\n';
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "superint: bad JSON input: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "superint: " << e.what() << '\n';
    }
    return 1;
}
