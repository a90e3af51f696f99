#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "hermite.hpp"
#include "superint/error.hpp"
#include "superint/ode.hpp"
#include "superint/potentials.hpp"

namespace superint {

double exotic_classical_residual(double tau, double T, double dT, const ClassicalOdeConstants& c) {
    const double t2 = tau * tau;
    return 3.0 * t2 * (t2 + 1.0) * dT * dT + 4.0 * tau * (c.c1 * tau + c.c2) * dT + 2.0 * tau * T * dT -
           T * (T + 4.0 * c.c2) + c.c3 / std::sqrt(t2 + 1.0) + c.c4;
}

double tau_of_theta(TauKind kind, int N, double theta) {
    const double u = (N - 2) * theta;
    switch (kind) {
        case TauKind::cos2: return std::cos(0.5 * u) * std::cos(0.5 * u);
        case TauKind::sin2: return std::sin(0.5 * u) * std::sin(0.5 * u);
        case TauKind::tan: return std::tan(u);
    }
    return 0.0;
}

double dtau_dtheta(TauKind kind, int N, double theta) {
    const double n = N - 2;
    const double u = n * theta;
    switch (kind) {
        case TauKind::cos2: return -0.5 * n * std::sin(u);
        case TauKind::sin2: return 0.5 * n * std::sin(u);
        case TauKind::tan: return n / (std::cos(u) * std::cos(u));
    }
    return 0.0;
}

namespace {

double d2tau_dtheta2(TauKind kind, int N, double theta) {
    const double n = N - 2;
    const double u = n * theta;
    switch (kind) {
        case TauKind::cos2: return -0.5 * n * n * std::cos(u);
        case TauKind::sin2: return 0.5 * n * n * std::cos(u);
        case TauKind::tan: return 2.0 * n * n * std::tan(u) / (std::cos(u) * std::cos(u));
    }
    return 0.0;
}

// Quadratic a T'^2 + b T' + c = 0 of the classical exotic ODE at (tau, T).
struct Quadratic {
    double a, b, c, disc;
};

Quadratic quadratic(double tau, double T, const ClassicalOdeConstants& k) {
    const double t2 = tau * tau;
    Quadratic q{};
    q.a = 3.0 * t2 * (t2 + 1.0);
    q.b = 4.0 * tau * (k.c1 * tau + k.c2) + 2.0 * tau * T;
    q.c = -T * (T + 4.0 * k.c2) + k.c3 / std::sqrt(t2 + 1.0) + k.c4;
    q.disc = q.b * q.b - 4.0 * q.a * q.c;
    return q;
}

double slope(double tau, double T, const ClassicalOdeConstants& k, int branch) {
    const Quadratic q = quadratic(tau, T, k);
    if (std::abs(q.a) < 1e-12 * (std::abs(q.b) + std::abs(q.c) + 1.0))
        throw IntegrationError("parabolic degeneracy of the classical ODE at tau = " + std::to_string(tau));
    if (q.disc < 0.0) throw IntegrationError("negative discriminant (no real T') at tau = " + std::to_string(tau));
    const double root = branch * std::sqrt(q.disc);
    // Pick the form without cancellation.
    const double num = -q.b + root;
    const double alt = -q.b - root;
    if (std::abs(num) >= std::abs(alt)) return num / (2.0 * q.a);
    return 2.0 * q.c / alt;
}

// d^2 T / d tau^2 by implicit differentiation of F(tau, T, T') = 0.
double second_slope(double tau, double T, double dT, const ClassicalOdeConstants& k) {
    const double t2 = tau * tau;
    const Quadratic q = quadratic(tau, T, k);
    const double a_t = 12.0 * t2 * tau + 6.0 * tau;
    const double b_t = 8.0 * k.c1 * tau + 4.0 * k.c2 + 2.0 * T;
    const double c_t = -k.c3 * tau / std::pow(t2 + 1.0, 1.5);
    const double f_tau = a_t * dT * dT + b_t * dT + c_t;
    const double f_T = 2.0 * tau * dT - 2.0 * T - 4.0 * k.c2;
    const double f_dT = 2.0 * q.a * dT + q.b;
    if (f_dT == 0.0) return 0.0;
    return -(f_tau + f_T * dT) / f_dT;
}

FieldExpr closed_form_field(const FieldExpr& z) {
    const FieldExpr s = sqrt(4.0 + 3.0 * z * z);
    return pow(z, 1.0 / 3.0) * pow(3.0 * z * z + 2.0 * s + 5.0, 1.0 / 6.0) / pow(s + 2.0, 2.0 / 3.0);
}

}  // namespace

ExoticClassicalSolution exotic_classical_T(const ExoticClassicalOptions& options) {
    const int N = options.N;
    if (N < 3) throw InvalidArgument("the classical exotic family needs N >= 3");
    if (N % 2 == 1 && options.c.c3 != 0.0) throw InvalidArgument("odd N requires c3 = 0");
    if (N % 2 == 1 && options.b != 0.0) throw InvalidArgument("odd N requires b = 0");
    if (options.branch != 1 && options.branch != -1) throw InvalidArgument("branch must be +1 or -1");
    if (!(options.theta_hi > options.theta_lo) || options.theta0 < options.theta_lo || options.theta0 > options.theta_hi)
        throw InvalidArgument("need theta_lo <= theta0 <= theta_hi and a nonempty window");
    if (options.samples < 3) throw InvalidArgument("need at least 3 samples");

    const auto& k = options.c;
    const TauKind kind = options.tau_kind;
    auto rhs = [&](double th, const Eigen::VectorXd& y) {
        Eigen::VectorXd d(1);
        d(0) = slope(tau_of_theta(kind, N, th), y(0), k, options.branch) * dtau_dtheta(kind, N, th);
        return d;
    };

    ExoticClassicalSolution sol;
    sol.options = options;
    const auto n = static_cast<std::size_t>(options.samples);
    sol.theta.resize(n);
    sol.T.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        sol.theta[i] = options.theta_lo + (options.theta_hi - options.theta_lo) * static_cast<double>(i) / (n - 1);

    OdeOptions ode;
    ode.rtol = options.rtol;
    ode.atol = options.atol;
    Eigen::VectorXd y0(1);
    y0(0) = options.T0;
    // March outward from theta0 in both directions, filling nodes from the dense output.
    for (int dir : {+1, -1}) {
        const double end = dir > 0 ? options.theta_hi : options.theta_lo;
        std::vector<std::size_t> nodes;
        for (std::size_t i = 0; i < n; ++i)
            if ((dir > 0 && sol.theta[i] >= options.theta0) || (dir < 0 && sol.theta[i] < options.theta0)) nodes.push_back(i);
        if (dir < 0) std::reverse(nodes.begin(), nodes.end());
        if (nodes.empty()) continue;
        if (end == options.theta0) {
            for (auto i : nodes) sol.T[i] = options.T0;
            continue;
        }
        Dopri5<double> stepper(rhs, options.theta0, y0, end, ode);
        std::size_t next = 0;
        while (next < nodes.size() && sol.theta[nodes[next]] == options.theta0) sol.T[nodes[next++]] = options.T0;
        while (next < nodes.size()) {
            if (stepper.done()) {
                sol.T[nodes[next++]] = stepper.y()(0);
                continue;
            }
            stepper.step();
            while (next < nodes.size() && dir * (stepper.t() - sol.theta[nodes[next]]) >= 0.0) {
                sol.T[nodes[next]] = stepper.dense(sol.theta[nodes[next]])(0);
                ++next;
            }
        }
    }

    sol.tau.resize(n);
    sol.dT_dtau.resize(n);
    sol.S.resize(n);
    sol.dS.resize(n);
    sol.discriminant.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = sol.theta[i];
        const double tau = tau_of_theta(kind, N, th);
        const Quadratic q = quadratic(tau, sol.T[i], k);
        sol.tau[i] = tau;
        sol.discriminant[i] = q.disc;
        if (q.disc <= 1e-10 * (q.b * q.b + std::abs(4.0 * q.a * q.c))) sol.branch_events.push_back(th);
        const double d1 = slope(tau, sol.T[i], k, options.branch);
        const double d2 = second_slope(tau, sol.T[i], d1, k);
        const double tt = dtau_dtheta(kind, N, th);
        sol.dT_dtau[i] = d1;
        sol.S[i] = d1 * tt;
        sol.dS[i] = d2 * tt * tt + d1 * d2tau_dtheta2(kind, N, th);
    }

    auto spline = std::make_shared<const CubicSpline>(CubicSpline::natural(sol.theta, sol.S));
    PotentialSpec& v = sol.spec;
    v.family = "exotic-classical";
    v.radial = options.b != 0.0 ? RadialPart::oscillator(options.b) : RadialPart::zero();
    v.angular_table = spline;
    v.angular = FieldExpr::tabulated(spline, FieldExpr::variable(0));
    v.n_tag = N;
    v.tau_kind = kind;
    v.sector = true;
    v.flags.push_back("sector");
    if (!sol.branch_events.empty()) v.flags.push_back("branch-event");
    v.parameters = {{"c", {k.c1, k.c2, k.c3, k.c4}}, {"branch", options.branch}, {"theta0", options.theta0},
                    {"T0", options.T0}, {"theta_lo", options.theta_lo}, {"theta_hi", options.theta_hi},
                    {"b", options.b}};
    return sol;
}

std::pair<double, double> ExoticClassicalSolution::at_theta(double th) const {
    if (theta.empty() || th < theta.front() || th > theta.back()) throw DomainError("theta outside the solved window");
    auto it = std::upper_bound(theta.begin(), theta.end(), th);
    std::size_t i = static_cast<std::size_t>(std::distance(theta.begin(), it));
    i = std::clamp<std::size_t>(i, 1, theta.size() - 1);
    return detail::hermite5(theta[i - 1], theta[i], T[i - 1], S[i - 1], dS[i - 1], T[i], S[i], dS[i], th);
}

double exotic_closedform_of_z(double z) {
    const double s = std::sqrt(4.0 + 3.0 * z * z);
    return std::cbrt(z) * std::pow(3.0 * z * z + 2.0 * s + 5.0, 1.0 / 6.0) / std::pow(s + 2.0, 2.0 / 3.0);
}

double exotic_closedform_T(int N, double theta, double scale) {
    if (N < 3) throw InvalidArgument("the closed form needs N >= 3");
    const double u = (N - 2) * theta;
    if (std::abs(std::cos(u)) < 1e-12) throw DomainError("tan((N - 2) theta) has a pole here");
    return scale * exotic_closedform_of_z(std::tan(u));
}

ClosedFormFit fit_closed_form(TauKind reading, int samples) {
    if (samples < 8) throw InvalidArgument("need at least 8 samples for the fit");
    const FieldExpr tau = FieldExpr::variable(0);
    FieldExpr z;
    ClosedFormFit fit;
    fit.reading = reading;
    fit.samples = samples;
    // Windows keep z > 0 and stay clear of tau = 0, 1/2, 1.
    switch (reading) {
        case TauKind::tan:
            z = tau;
            fit.tau_lo = 0.05;
            fit.tau_hi = 3.0;
            break;
        case TauKind::cos2:
            z = 2.0 * sqrt(tau * (1.0 - tau)) / (2.0 * tau - 1.0);
            fit.tau_lo = 0.52;
            fit.tau_hi = 0.98;
            break;
        case TauKind::sin2:
            z = 2.0 * sqrt(tau * (1.0 - tau)) / (1.0 - 2.0 * tau);
            fit.tau_lo = 0.02;
            fit.tau_hi = 0.48;
            break;
    }
    const FieldExpr T = closed_form_field(z);
    Eigen::MatrixXd a(samples, 4);
    Eigen::VectorXd rhs(samples);
    for (int i = 0; i < samples; ++i) {
        const double t = fit.tau_lo + (fit.tau_hi - fit.tau_lo) * i / (samples - 1);
        const Jet2 j = T.jet({t, 0.0}, 1);
        const double v = j.value();
        const double d = j.partial(1, 0);
        a(i, 0) = 4.0 * t * t * d;
        a(i, 1) = 4.0 * t * d - 4.0 * v;
        a(i, 2) = 1.0 / std::sqrt(t * t + 1.0);
        a(i, 3) = 1.0;
        rhs(i) = -(3.0 * t * t * (t * t + 1.0) * d * d + 2.0 * t * v * d - v * v);
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(rhs);
    fit.c = {c(0), c(1), c(2), c(3)};
    fit.relative_residual = (a * c - rhs).norm() / rhs.norm();
    return fit;
}

ClosedFormVerdict closed_form_readings(int samples, double threshold) {
    ClosedFormVerdict out;
    out.threshold = threshold;
    double best = std::numeric_limits<double>::infinity();
    for (TauKind k : {TauKind::tan, TauKind::cos2, TauKind::sin2}) {
        out.fits.push_back(fit_closed_form(k, samples));
        const double r = out.fits.back().relative_residual;
        if (r < threshold && r < best) {
            best = r;
            out.winner = k;
        }
    }
    return out;
}

}  // namespace superint
