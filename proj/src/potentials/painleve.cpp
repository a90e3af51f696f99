#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "hermite.hpp"
#include "superint/error.hpp"
#include "superint/ode.hpp"
#include "superint/potentials.hpp"

namespace superint {

double composite_gamma(const P6Gammas& g) {
    if (g[0] < 0.0) throw InvalidArgument("gamma_1 must be >= 0 (it enters through sqrt(2 gamma_1))");
    return (g[1] + g[3]) - (g[0] + g[2]) + std::sqrt(2.0 * g[0]) - 0.75;
}

namespace {

template <class S>
std::pair<S, double> rhs_terms(S tau, S P, S dP, const P6Gammas& g) {
    const S one(1.0);
    const S t1 = 0.5 * (one / P + one / (P - one) + one / (P - tau)) * dP * dP;
    const S t2 = -(one / tau + one / (tau - one) + one / (P - tau)) * dP;
    const S pre = P * (P - one) * (P - tau) / (tau * tau * (tau - one) * (tau - one));
    const S t3 = pre * g[0];
    const S t4 = pre * (g[1] * tau / (P * P));
    const S t5 = pre * (g[2] * (tau - one) / ((P - one) * (P - one)));
    const S t6 = pre * (g[3] * tau * (tau - one) / ((P - tau) * (P - tau)));
    const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4) + std::abs(t5) + std::abs(t6);
    return {t1 + t2 + t3 + t4 + t5 + t6, scale};
}

enum class Trouble { none, pole, zero, one, diagonal };

const char* trouble_name(Trouble t) {
    switch (t) {
        case Trouble::pole: return "pole";
        case Trouble::zero: return "zero";
        case Trouble::one: return "one";
        case Trouble::diagonal: return "diagonal";
        case Trouble::none: break;
    }
    return "none";
}

Trouble trouble(double tau, double P, const P6Options& o, double loosen = 1.0) {
    if (!std::isfinite(P) || std::abs(P) > o.blowup / loosen) return Trouble::pole;
    if (std::abs(P) < o.approach * loosen) return Trouble::zero;
    if (std::abs(P - 1.0) < o.approach * loosen) return Trouble::one;
    if (std::abs(P - tau) < o.approach * loosen) return Trouble::diagonal;
    return Trouble::none;
}

struct Landing {
    bool ok = false;
    double tau = 0.0;
    Eigen::Vector2d y;
    double imaginary = 0.0;
};

// Continue the solution from (t_a, y_a) to t_a + 2 dir rho along a half circle in the complex
// tau plane. Painleve VI solutions are meromorphic away from 0, 1, so the landing value is
// real up to integration error.
Landing detour(double t_a, const Eigen::Vector2d& y_a, double rho, double dir, const P6Gammas& g, const P6Options& o) {
    using C = std::complex<double>;
    const double c = t_a + dir * rho;
    const C iu(0.0, 1.0);
    auto path = [&](double s) { return C(c) - dir * rho * std::exp(-iu * std::numbers::pi * s); };
    auto speed = [&](double s) { return dir * rho * iu * std::numbers::pi * std::exp(-iu * std::numbers::pi * s); };
    auto rhs = [&](double s, const Eigen::VectorXcd& y) {
        const C tau = path(s);
        const C v = speed(s);
        Eigen::VectorXcd d(2);
        d(0) = y(1) * v;
        d(1) = rhs_terms<C>(tau, y(0), y(1), g).first * v;
        return d;
    };
    Eigen::VectorXcd y0(2);
    y0 << C(y_a(0)), C(y_a(1));
    OdeOptions opt;
    opt.rtol = o.rtol;
    opt.atol = o.atol;
    opt.max_steps = 200000;
    Landing out;
    try {
        Dopri5<C> stepper(rhs, 0.0, y0, 1.0, opt);
        const Eigen::VectorXcd y = stepper.run();
        out.tau = t_a + 2.0 * dir * rho;
        out.y << y(0).real(), y(1).real();
        out.imaginary = std::max(std::abs(y(0).imag()) / std::max(1.0, std::abs(y(0))),
                                 std::abs(y(1).imag()) / std::max(1.0, std::abs(y(1))));
        out.ok = out.imaginary < 1e-6 && trouble(out.tau, out.y(0), o, 2.0) == Trouble::none;
    } catch (const IntegrationError&) {
        out.ok = false;
    }
    return out;
}

}  // namespace

double p6_rhs(double tau, double P, double dP, const P6Gammas& g) { return rhs_terms<double>(tau, P, dP, g).first; }

std::pair<double, double> p6_rhs_with_scale(double tau, double P, double dP, const P6Gammas& g) {
    return rhs_terms<double>(tau, P, dP, g);
}

P6Solution p6_solve(const P6Gammas& gammas, double tau0, double P0, double dP0, const P6Grid& grid,
                    const P6Options& options) {
    if (!(grid.lo > 0.0 && grid.hi < 1.0 && grid.lo < grid.hi && grid.count >= 5))
        throw InvalidArgument("P6 grid must satisfy 0 < lo < hi < 1 with at least 5 points");
    if (!(tau0 > 0.0 && tau0 < 1.0)) throw InvalidArgument("tau0 must lie in (0, 1)");
    if (trouble(tau0, P0, options) != Trouble::none)
        throw InvalidArgument("initial data on a singular locus of Painleve VI (P0 near 0, 1, tau0 or too large)");

    P6Solution sol;
    sol.gammas = gammas;
    sol.gamma = composite_gamma(gammas);
    sol.tau0 = tau0;
    sol.P0 = P0;
    sol.dP0 = dP0;
    const auto n = static_cast<std::size_t>(grid.count);
    sol.tau.resize(n);
    for (std::size_t i = 0; i < n; ++i) sol.tau[i] = grid.lo + (grid.hi - grid.lo) * static_cast<double>(i) / (n - 1);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    sol.P.assign(n, nan);
    sol.dP.assign(n, nan);
    sol.flagged.assign(n, false);

    auto rhs = [&](double t, const Eigen::VectorXd& y) {
        Eigen::VectorXd d(2);
        d(0) = y(1);
        d(1) = p6_rhs(t, y(0), y(1), gammas);
        return d;
    };
    OdeOptions opt;
    opt.rtol = options.rtol;
    opt.atol = options.atol;
    opt.h_max = (grid.hi - grid.lo) / 50.0;

    int detours = 0;
    for (double dir : {+1.0, -1.0}) {
        const double end = dir > 0 ? grid.hi : grid.lo;
        std::vector<std::size_t> nodes;
        for (std::size_t i = 0; i < n; ++i)
            if ((dir > 0 && sol.tau[i] >= tau0) || (dir < 0 && sol.tau[i] < tau0)) nodes.push_back(i);
        if (dir < 0) std::reverse(nodes.begin(), nodes.end());
        std::size_t next = 0;
        double t = tau0;
        Eigen::Vector2d y(P0, dP0);
        while (next < nodes.size() && dir * (end - t) > 0.0) {
            Dopri5<double> stepper(rhs, t, y, end, opt);
            double t_safe = t;
            Eigen::Vector2d y_safe = y;
            Trouble hit = Trouble::none;
            double t_hit = t;
            while (!stepper.done()) {
                try {
                    stepper.step();
                } catch (const IntegrationError&) {
                    hit = Trouble::pole;
                    t_hit = stepper.t();
                    break;
                }
                hit = trouble(stepper.t(), stepper.y()(0), options);
                if (hit != Trouble::none) {
                    t_hit = stepper.t();
                    break;
                }
                while (next < nodes.size() && dir * (stepper.t() - sol.tau[nodes[next]]) >= 0.0) {
                    const Eigen::VectorXd v = stepper.dense(sol.tau[nodes[next]]);
                    sol.P[nodes[next]] = v(0);
                    sol.dP[nodes[next]] = v(1);
                    ++next;
                }
                t_safe = stepper.t();
                y_safe = stepper.y();
            }
            if (hit == Trouble::none) break;
            if (++detours > options.max_detours) throw IntegrationError("too many singular points on the P6 grid");

            // Detour around the singular point, growing the radius until the landing is clean.
            const double room = dir > 0 ? (1.0 - t_safe) : t_safe;
            double rho = std::max(2.0 * std::abs(t_hit - t_safe), 2e-3);
            Landing land;
            for (int attempt = 0; attempt < 12 && 2.0 * rho < 0.9 * room; ++attempt, rho *= 1.6) {
                land = detour(t_safe, y_safe, rho, dir, gammas, options);
                if (land.ok) break;
            }
            if (!land.ok) throw IntegrationError("could not continue P6 past the singular point near tau = " + std::to_string(t_hit));
            sol.detour_imaginary = std::max(sol.detour_imaginary, land.imaginary);
            sol.segments.push_back({std::min(t_safe, land.tau), std::max(t_safe, land.tau), trouble_name(hit)});
            while (next < nodes.size() && dir * (land.tau - sol.tau[nodes[next]]) >= 0.0) {
                sol.flagged[nodes[next]] = true;
                ++next;
            }
            t = land.tau;
            y = land.y;
        }
    }
    // Nodes close to a singular segment or a singular value of P are flagged too: they are
    // not on a usable segment.
    const double spacing = (grid.hi - grid.lo) / (grid.count - 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (sol.flagged[i]) continue;
        bool near = !std::isfinite(sol.P[i]) || trouble(sol.tau[i], sol.P[i], options, 10.0) != Trouble::none;
        if (!near) {
            // Local estimate of the distance to a pole (exact for P ~ r / (tau - tau_p)); this
            // also catches poles just outside the grid.
            const double d1 = std::abs(sol.dP[i]);
            const double d2 = std::abs(p6_rhs(sol.tau[i], sol.P[i], sol.dP[i], gammas));
            const double reach = std::max(d1 > 0.0 ? std::abs(sol.P[i]) / d1 : HUGE_VAL, d2 > 0.0 ? 2.0 * d1 / d2 : HUGE_VAL);
            if (reach < options.pole_reach * spacing) near = true;
        }
        for (const auto& s : sol.segments) {
            const double margin = std::max(s.hi - s.lo, options.segment_margin);
            if (sol.tau[i] > s.lo - margin && sol.tau[i] < s.hi + margin) near = true;
        }
        sol.flagged[i] = near;
    }
    return sol;
}

std::pair<double, double> P6Solution::at(double t) const {
    if (tau.size() < 2 || t < tau.front() || t > tau.back()) throw DomainError("tau outside the P6 grid");
    auto it = std::upper_bound(tau.begin(), tau.end(), t);
    std::size_t i = static_cast<std::size_t>(std::distance(tau.begin(), it));
    i = std::clamp<std::size_t>(i, 1, tau.size() - 1);
    // A node closing a pole-free run is reachable from its left interval.
    if (t == tau[i - 1] && flagged[i] && i >= 2 && !flagged[i - 2]) --i;
    if (flagged[i - 1] || flagged[i]) throw DomainError("tau = " + std::to_string(t) + " is on a flagged P6 segment");
    const double s0 = p6_rhs(tau[i - 1], P[i - 1], dP[i - 1], gammas);
    const double s1 = p6_rhs(tau[i], P[i], dP[i], gammas);
    return detail::hermite5(tau[i - 1], tau[i], P[i - 1], dP[i - 1], s0, P[i], dP[i], s1, t);
}

nlohmann::json P6Solution::to_json() const {
    nlohmann::json j;
    j["gammas"] = gammas;
    j["gamma"] = gamma;
    j["tau0"] = tau0;
    j["P0"] = P0;
    j["dP0"] = dP0;
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : segments) segs.push_back({{"lo", s.lo}, {"hi", s.hi}, {"reason", s.reason}});
    j["segments"] = segs;
    j["detour_imaginary"] = detour_imaginary;
    std::size_t flagged_count = 0;
    for (bool f : flagged) flagged_count += f ? 1 : 0;
    j["grid"] = {{"lo", tau.front()}, {"hi", tau.back()}, {"count", tau.size()}, {"flagged", flagged_count}};
    return j;
}

std::optional<double> p6_plug_back(const P6Solution& sol, std::size_t i) {
    if (i < 4 || i + 4 >= sol.tau.size()) return std::nullopt;
    for (std::size_t k = i - 4; k <= i + 4; ++k)
        if (sol.flagged[k]) return std::nullopt;
    const double h = sol.tau[i + 1] - sol.tau[i];
    static constexpr double w[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
    double d2 = 0.0;
    for (std::size_t k = 1; k <= 4; ++k) d2 += w[k - 1] * (sol.dP[i + k] - sol.dP[i - k]);
    d2 /= h;
    const auto [f, scale] = p6_rhs_with_scale(sol.tau[i], sol.P[i], sol.dP[i], sol.gammas);
    return std::abs(d2 - f) / std::max({scale, std::abs(d2), 1e-300});
}

double w_of(double tau, double P, double dP, const P6Gammas& g) {
    if (P == 0.0 || P == 1.0 || P == tau) throw DomainError("W is singular where P6 equals 0, 1 or tau");
    const double q = dP - P * (P - 1.0) / (tau * (tau - 1.0));
    const double t1 = tau * tau * (tau - 1.0) * (tau - 1.0) / (4.0 * P * (P - 1.0) * (P - tau)) * q * q;
    const double s = 1.0 - std::sqrt(2.0 * g[0]);
    const double t2 = 0.125 * s * s * (1.0 - 2.0 * P);
    const double t3 = -0.25 * g[1] * (1.0 - 2.0 * tau / P);
    const double t4 = -0.25 * g[2] * (1.0 - 2.0 * (tau - 1.0) / (P - 1.0));
    const double t5 = (0.125 - 0.25 * g[3]) * (1.0 - 2.0 * tau * (P - 1.0) / (P - tau));
    return t1 + t2 + t3 + t4 + t5;
}

double w_of_p6(const P6Solution& sol, double tau) {
    const auto [P, dP] = sol.at(tau);
    return w_of(tau, P, dP, sol.gammas);
}

namespace detail {

std::vector<double> derivative6(const std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    if (n < 7) throw InvalidArgument("sixth-order differences need at least 7 samples");
    std::vector<double> d(n);
    // Weights for a 7-point window at offset position p (0..6), from the Taylor conditions.
    auto weights = [](int p) {
        Eigen::Matrix<double, 7, 7> a;
        Eigen::Matrix<double, 7, 1> rhs = Eigen::Matrix<double, 7, 1>::Zero();
        for (int m = 0; m < 7; ++m)
            for (int k = 0; k < 7; ++k) a(m, k) = std::pow(static_cast<double>(k - p), m);
        rhs(1) = 1.0;
        return Eigen::Matrix<double, 7, 1>(a.fullPivLu().solve(rhs));
    };
    const auto central = weights(3);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t start;
        Eigen::Matrix<double, 7, 1> w;
        if (i < 3) {
            start = 0;
            w = weights(static_cast<int>(i));
        } else if (i + 3 >= n) {
            start = n - 7;
            w = weights(static_cast<int>(i - start));
        } else {
            start = i - 3;
            w = central;
        }
        double acc = 0.0;
        for (int k = 0; k < 7; ++k) acc += w(k) * y[start + static_cast<std::size_t>(k)];
        d[i] = acc / h;
    }
    return d;
}

}  // namespace detail

ExoticQuantumProfile exotic_quantum_profile(int N, const P6Solution& sol, double hbar, const ExoticQuantumOptions& options) {
    if (N < 3) throw InvalidArgument("the quantum exotic family needs N >= 3");
    if (hbar < 0.0) throw InvalidArgument("hbar must be >= 0");
    if (options.tau_kind == TauKind::tan) throw InvalidArgument("the quantum exotic family reads tau as cos2 or sin2");
    if (options.table_points < 7) throw InvalidArgument("need at least 7 table points");
    const auto& g = sol.gammas;
    if (N % 2 == 1) {
        if (options.b != 0.0 || options.a) throw InvalidArgument("odd N requires a vanishing radial part");
        const double c = (g[1] + g[2]) * (g[0] + g[3] - std::sqrt(2.0 * g[0]));
        if (std::abs(c) > 1e-10)
            throw InvalidArgument("odd N requires (g2 + g3)(g1 + g4 - sqrt(2 g1)) = 0, got " + std::to_string(c));
    }
    if (options.a && options.b != 0.0) throw InvalidArgument("choose either a Kepler or an oscillator radial part");

    // Longest run of unflagged grid nodes.
    std::size_t best_lo = 0, best_len = 0;
    for (std::size_t i = 0; i < sol.tau.size();) {
        if (sol.flagged[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < sol.tau.size() && !sol.flagged[j]) ++j;
        if (j - i > best_len) {
            best_len = j - i;
            best_lo = i;
        }
        i = j;
    }
    if (best_len < 2) throw DomainError("the P6 solution has no pole-free segment");
    const double tau_a = sol.tau[best_lo];
    const double tau_b = sol.tau[best_lo + best_len - 1];

    const double k = N - 2;
    auto theta_of = [&](double t) {
        return options.tau_kind == TauKind::cos2 ? 2.0 * std::acos(std::sqrt(t)) / k : 2.0 * std::asin(std::sqrt(t)) / k;
    };
    double th_lo = theta_of(tau_a), th_hi = theta_of(tau_b);
    if (th_lo > th_hi) std::swap(th_lo, th_hi);

    ExoticQuantumProfile out;
    const auto m = static_cast<std::size_t>(options.table_points);
    out.theta.resize(m);
    out.tau.resize(m);
    out.T.resize(m);
    const double pref = hbar * hbar * (N - 2);
    for (std::size_t i = 0; i < m; ++i) {
        const double th = th_lo + (th_hi - th_lo) * static_cast<double>(i) / (m - 1);
        const double t = std::clamp(tau_of_theta(options.tau_kind, N, th), tau_a, tau_b);
        const double root = std::sqrt(t * (1.0 - t));
        out.theta[i] = th;
        out.tau[i] = t;
        if (pref == 0.0) {
            out.T[i] = 0.0;
            continue;
        }
        const double w = w_of_p6(sol, t);
        out.T[i] = pref * (w / root + sol.gamma * (1.0 - 2.0 * t) / (4.0 * root));
    }
    out.S = detail::derivative6(out.T, (th_hi - th_lo) / (m - 1));

    auto spline = std::make_shared<const CubicSpline>(CubicSpline::natural(out.theta, out.S));
    PotentialSpec& v = out.spec;
    v.family = "exotic-quantum";
    v.hbar = hbar;
    v.n_tag = N;
    v.tau_kind = options.tau_kind;
    v.angular_table = spline;
    v.angular = FieldExpr::tabulated(spline, FieldExpr::variable(0));
    v.sector = true;
    v.flags.push_back("sector");
    if (options.a) {
        v.radial = RadialPart::kepler(*options.a);
        v.flags.push_back("unverified-pairing");
    } else if (options.b != 0.0) {
        v.radial = RadialPart::oscillator(options.b);
    }
    if (!sol.segments.empty()) v.flags.push_back("p6-poles-skipped");
    v.parameters = {{"gammas", g},        {"gamma", sol.gamma},   {"tau0", sol.tau0},     {"P0", sol.P0},
                    {"dP0", sol.dP0},     {"theta_lo", th_lo},    {"theta_hi", th_hi},    {"w_reading", "z=tau"}};
    return out;
}

PotentialSpec exotic_quantum_T(int N, const P6Solution& sol, double hbar, const ExoticQuantumOptions& options) {
    return exotic_quantum_profile(N, sol, hbar, options).spec;
}

}  // namespace superint
