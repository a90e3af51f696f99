#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "superint/dynamics.hpp"
#include "superint/error.hpp"
#include "superint/potentials.hpp"
#include "observable_support.hpp"

using namespace superint;
using testing::Rng;

namespace {

const FieldExpr X = FieldExpr::variable(0);
const FieldExpr Y = FieldExpr::variable(1);

PotentialSpec kepler() {
    PotentialSpec v;
    v.family = "kepler";
    v.radial = RadialPart::kepler(-1.0);
    return v;
}

PotentialSpec oscillator() {
    PotentialSpec v;
    v.family = "oscillator";
    v.radial = RadialPart::oscillator(1.0);
    return v;
}

// Laplace-Runge-Lenz components p x L - r/|r| for V = -1/r.
MomentumPolynomial lrl_x() {
    const FieldExpr r = sqrt(X * X + Y * Y);
    return MomentumPolynomial::monomial(0, 2, X) + MomentumPolynomial::monomial(1, 1, -Y) +
           MomentumPolynomial::scalar(-X / r);
}

MomentumPolynomial lrl_y() {
    const FieldExpr r = sqrt(X * X + Y * Y);
    return MomentumPolynomial::monomial(2, 0, Y) + MomentumPolynomial::monomial(1, 1, -X) +
           MomentumPolynomial::scalar(-Y / r);
}

double scaled_distance(const PhasePoint& a, const PhasePoint& b) {
    return std::hypot(std::hypot(a.x - b.x, a.y - b.y), std::hypot(a.px - b.px, a.py - b.py));
}

const PhasePoint kTtwInit{0.8, 0.3, 0.2, 0.5};

}  // namespace

TEST_CASE("free motion is exact") {
    const PotentialSpec free;
    const PhasePoint init{1.0, 0.5, 0.3, -0.2};
    const auto traj = integrate(free, init, 10.0, {.dt = 0.01});
    const auto& end = traj.samples.back();
    CHECK(std::abs(end.x - (1.0 + 3.0)) < 1e-12);
    CHECK(std::abs(end.y - (0.5 - 2.0)) < 1e-12);
    CHECK(end.px == init.px);
    CHECK(traj.energy_drift < 1e-13);
    const auto drift = drift_report(traj, {{"H", hamiltonian_of(free)},
                                           {"px", momentum_x()},
                                           {"py", momentum_y()},
                                           {"Lz", angular_momentum()}});
    for (const auto& [name, d] : drift) CHECK_MESSAGE(d < 1e-12, name);
}

TEST_CASE("isotropic oscillator period") {
    const PhasePoint init{1.0, 0.2, -0.3, 0.7};
    const double period = std::numbers::pi * std::sqrt(2.0);
    const auto traj = integrate(oscillator(), init, period, {.dt = 1e-3});
    CHECK(scaled_distance(traj.samples.back(), init) < 1e-9);
    const auto half = integrate(oscillator(), init, 0.5 * period, {.dt = 1e-3});
    CHECK(scaled_distance(half.samples.back(), {-init.x, -init.y, -init.px, -init.py}) < 1e-9);
}

TEST_CASE("Kepler integrals over 100 periods") {
    // a = 1 / (2 |E|), E = 0.5 * 0.8^2 - 1 = -0.68.
    const PhasePoint init{1.0, 0.0, 0.0, 0.8};
    const double a = 1.0 / (2.0 * 0.68);
    const double period = 2.0 * std::numbers::pi * std::pow(a, 1.5);
    const auto traj = integrate(kepler(), init, 100.0 * period, {.dt = 5e-4, .sample_every = 50});
    const auto drift = drift_report(traj, {{"H", hamiltonian_of(kepler())},
                                           {"Lz", angular_momentum()},
                                           {"Ax", lrl_x()},
                                           {"Ay", lrl_y()}});
    CHECK(drift.at("H") < 1e-8);
    CHECK(drift.at("Lz") < 1e-8);
    // Ay starts at zero, so its drift is reported against the floor; compare with |A| instead.
    const double amag = std::abs(lrl_x().evaluate(init));
    CHECK(drift.at("Ax") < 1e-8);
    CHECK(drift.at("Ay") * 1e-12 / amag < 1e-8);
}

TEST_CASE("splitting order") {
    const PhasePoint init{1.0, 0.0, 0.0, 0.8};
    auto drift_at = [&](int order, double dt) {
        return integrate(kepler(), init, 20.0, {.dt = dt, .order = order, .drift_budget = 1.0}).energy_drift;
    };
    const double r2 = drift_at(2, 0.01) / drift_at(2, 0.005);
    const double r4 = drift_at(4, 0.02) / drift_at(4, 0.01);
    CHECK(r2 == doctest::Approx(4.0).epsilon(0.15));
    CHECK(r4 == doctest::Approx(16.0).epsilon(0.2));
}

TEST_CASE("time reversal") {
    const auto v = ttw(1.0, 0.1, 0.1, 2, 1);
    const auto fwd = integrate(v, kTtwInit, 7.3, {.dt = 1e-3});
    PhasePoint back = fwd.samples.back();
    back.px = -back.px;
    back.py = -back.py;
    const auto rev = integrate(v, back, 7.3, {.dt = 1e-3});
    PhasePoint end = rev.samples.back();
    end.px = -end.px;
    end.py = -end.py;
    CHECK(scaled_distance(end, kTtwInit) < 1e-9);
}

TEST_CASE("drift budget and errors") {
    const auto v = ttw(1.0, 0.1, 0.1, 2, 1);
    const auto traj = integrate(v, kTtwInit, 5.0, {.dt = 0.2, .drift_budget = 1e-6});
    CHECK(traj.rejections > 0);
    CHECK(traj.energy_drift <= 1e-6);
    CHECK_THROWS_AS(integrate(v, kTtwInit, 5.0, {.dt = 0.2, .drift_budget = 1e-16, .max_halvings = 1}),
                    IntegrationError);
    PotentialSpec quantum = v;
    quantum.hbar = 1.0;
    CHECK_THROWS_AS(integrate(quantum, kTtwInit, 1.0), InvalidArgument);
    CHECK_THROWS_AS(integrate(v, {0.0, 0.0, 1.0, 0.0}, 1.0), InvalidArgument);
    // A head-on Kepler fall reaches the singularity guard.
    CHECK_THROWS_AS(integrate(kepler(), {1.0, 0.0, 0.0, 0.0}, 2.0, {.dt = 1e-3, .r_min = 1e-3}), DomainError);
}

TEST_CASE("TTW integrals are conserved and a mismatched X is not") {
    const auto v = ttw(1.0, 0.1, 0.1, 2, 1);
    const auto traj = integrate(v, kTtwInit, 30.0, {.dt = 1e-3, .sample_every = 5});
    const auto wrong = ttw(1.0, 0.3, 0.1, 2, 1);
    const auto drift = drift_report(traj, {{"H", hamiltonian_of(v)}, {"X", x_of(v)}, {"X_wrong", x_of(wrong)}});
    CHECK(drift.at("H") < 1e-8);
    CHECK(drift.at("X") < 1e-8);
    CHECK(drift.at("X_wrong") > 1e-2);
}

TEST_CASE("rational approximants") {
    CHECK(rational_approximant(0.5, 32).q == 2);
    const auto third = rational_approximant(1.0 / 3.0 + 1e-12, 32);
    CHECK(third.p == 1);
    CHECK(third.q == 3);
    CHECK(third.error < 1e-11);
    const auto pi = rational_approximant(std::numbers::pi, 200);
    CHECK(pi.p == 355);
    CHECK(pi.q == 113);
    CHECK(rational_approximant(std::sqrt(2.0), 8).error > 1e-3);
    CHECK(rational_approximant(-1.5, 8).p == -3);
}

TEST_CASE("Bertrand orbits close") {
    const auto k = orbit_report(kepler(), {1.0, 0.0, 0.0, 0.8}, 5);
    CHECK(k.closed);
    CHECK(k.rotation_number == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(k.angular_mode == "rotation");
    const auto o = orbit_report(oscillator(), {1.0, 0.0, 0.0, 0.8}, 5);
    CHECK(o.closed);
    REQUIRE(o.rational);
    CHECK(o.rational->p == 1);
    CHECK(o.rational->q == 2);
    CHECK(o.period_estimate == doctest::Approx(std::numbers::pi / std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("TTW closes for rational k only") {
    const auto closed = orbit_report(ttw(1.0, 0.1, 0.1, 2, 1), kTtwInit, 20);
    CHECK(closed.bounded);
    CHECK(closed.closed);
    CHECK(closed.closure_distance < 1e-5);
    REQUIRE(closed.rational);
    CHECK(closed.rational->q <= 8);
    CHECK(closed.drift.at("H") < 1e-8);
    CHECK(closed.drift.at("X") < 1e-8);

    const auto open = orbit_report(ttw_real_k(1.0, 0.1, 0.1, std::sqrt(2.0)), kTtwInit, 50);
    CHECK(open.radial_periods == 50);
    CHECK_FALSE(open.closed);
    CHECK(open.closure_distance > 1e-2);

    const auto p = orbit_report(pw(-1.0, 0.1, 0.1, 1, 1), {0.1, 1.0, -0.6, 0.1}, 20);
    CHECK(p.closed);
}

TEST_CASE("rotation number does not depend on the time origin") {
    const auto v = ttw(1.0, 0.1, 0.1, 2, 1);
    OrbitOptions opt;
    opt.keep_trajectory = true;
    const auto a = orbit_report(v, kTtwInit, 6, opt);
    // Restart exactly at the third section crossing.
    const double t3 = a.crossing_times.at(3);
    const auto head = integrate(v, kTtwInit, t3, {.dt = t3 / std::ceil(t3 / 1e-3)});
    const auto b = orbit_report(v, head.samples.back(), 6);
    CHECK(std::abs(a.rotation_number - b.rotation_number) < 1e-8);

    const auto k1 = orbit_report(kepler(), {1.0, 0.0, 0.0, 0.8}, 3);
    const auto k2 = orbit_report(kepler(), {-0.3, 0.9, -0.7, -0.35}, 3);
    CHECK(k1.rotation_number == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(k2.rotation_number == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("unbounded orbits") {
    const auto r = orbit_report(kepler(), {1.0, 0.0, 0.0, 2.0}, 3, {.max_time = 1e3});
    CHECK_FALSE(r.bounded);
    CHECK_FALSE(r.closed);
    CHECK(r.to_json()["closure_distance"].is_null());
    PotentialSpec free;
    CHECK_FALSE(orbit_report(free, {1.0, 0.0, 1.0, 0.0}, 3).bounded);
    // Inward motion with no potential never reaches a maximum of r before the horizon.
    OrbitOptions short_horizon;
    short_horizon.max_time = 0.5;
    CHECK_THROWS_AS(orbit_report(free, {1.0, 0.0, -0.1, 0.0}, 3, short_horizon), IntegrationError);
}

TEST_CASE("planted syzygy Y = X H") {
    const auto v = ttw(1.0, 0.1, 0.2, 1, 1);
    const auto H = hamiltonian_of(v);
    const auto Xo = x_of(v);
    Rng rng(3);
    std::vector<PhasePoint> pts;
    while (pts.size() < 200) {
        const auto p = testing::random_phase_point(rng);
        if (std::abs(p.x) > 0.2 && std::abs(p.y) > 0.2) pts.push_back(p);
    }
    Eigen::MatrixXd values = sample_observables({H, Xo}, pts, 4);
    values.conservativeResize(Eigen::NoChange, 3);
    values.col(2) = values.col(0).cwiseProduct(values.col(1));
    const auto res = dependence_detect(values, {.max_degree = 2});
    REQUIRE(res.syzygy);
    CHECK(res.degree == 2);
    // Expected: (XH - Y) / sqrt(2).
    double err = 0.0;
    for (std::size_t k = 0; k < res.monomials.size(); ++k) {
        const auto& e = res.monomials[k];
        double want = 0.0;
        if (e == std::vector<int>{1, 1, 0}) want = 1.0 / std::sqrt(2.0);
        if (e == std::vector<int>{0, 0, 1}) want = -1.0 / std::sqrt(2.0);
        err = std::max(err, std::abs(std::abs(res.coefficients[k]) - std::abs(want)));
    }
    CHECK(err < 1e-8);

    // Rescaling a column leaves the decision and rescales the relation.
    Eigen::MatrixXd scaled = values;
    scaled.col(2) *= 1e3;
    const auto res2 = dependence_detect(scaled, {.max_degree = 2});
    CHECK(res2.syzygy);
    CHECK(res2.degree == 2);

    CHECK_THROWS_AS(dependence_detect(values.topRows(20), {.max_degree = 2}), InvalidArgument);
}

TEST_CASE("free-motion singlet syzygy") {
    // V = 0: X = L_z^2, H = P^2 / 2 and Y = L_z P^2 satisfy Y^2 = 4 X H^2.
    const PotentialSpec free;
    const auto Yo = angular_momentum() * momentum_squared();
    Rng rng(9);
    std::vector<PhasePoint> pts;
    for (int i = 0; i < 300; ++i) pts.push_back(testing::random_phase_point(rng));
    const auto values = sample_observables({hamiltonian_of(free), x_of(free), Yo}, pts);
    const auto res = dependence_detect(values, {.max_degree = 3});
    REQUIRE(res.syzygy);
    CHECK(res.degree == 3);
    double y2 = 0.0, xh2 = 0.0, rest = 0.0;
    for (std::size_t k = 0; k < res.monomials.size(); ++k) {
        const auto& e = res.monomials[k];
        if (e == std::vector<int>{0, 0, 2})
            y2 = res.coefficients[k];
        else if (e == std::vector<int>{2, 1, 0})
            xh2 = res.coefficients[k];
        else
            rest = std::max(rest, std::abs(res.coefficients[k]));
    }
    CHECK(xh2 / y2 == doctest::Approx(-4.0).epsilon(1e-8));
    CHECK(rest < 1e-8);
}

TEST_CASE("independence certificate") {
    const auto v = ttw(1.0, 0.1, 0.2, 1, 1);
    Rng rng(5);
    std::vector<PhasePoint> pts;
    while (pts.size() < 200) {
        const auto p = testing::random_phase_point(rng);
        if (std::abs(p.x) > 0.2 && std::abs(p.y) > 0.2) pts.push_back(p);
    }
    const auto values = sample_observables({hamiltonian_of(v), x_of(v), momentum_x()}, pts);
    const auto res = dependence_detect(values, {.max_degree = 2});
    CHECK_FALSE(res.syzygy);
    CHECK(res.smallest_singular_value > 1e-4);
    CHECK(res.to_json()["syzygy"] == false);
}

TEST_CASE("trajectory export") {
    const auto traj = integrate(oscillator(), {1.0, 0.0, 0.0, 1.0}, 0.01, {.dt = 0.005});
    std::ostringstream out;
    write_trajectory_csv(out, traj);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,x,y,px,py");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3);
}
