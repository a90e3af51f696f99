#include "superint/observables.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "superint/error.hpp"

namespace superint {

PolarPoint to_polar(const PhasePoint& pt) {
    const double r = std::hypot(pt.x, pt.y);
    if (r == 0.0) throw DomainError("polar coordinates undefined at the origin");
    const double c = pt.x / r;
    const double s = pt.y / r;
    return {r, std::atan2(pt.y, pt.x), c * pt.px + s * pt.py, pt.x * pt.py - pt.y * pt.px};
}

PhasePoint from_polar(const PolarPoint& pt) {
    const double c = std::cos(pt.theta);
    const double s = std::sin(pt.theta);
    return {pt.r * c, pt.r * s, c * pt.pr - s / pt.r * pt.lz, s * pt.pr + c / pt.r * pt.lz};
}

MomentumPolynomial MomentumPolynomial::monomial(int i, int j, FieldExpr coeff) {
    MomentumPolynomial p;
    p.add_term(i, j, coeff);
    return p;
}

int MomentumPolynomial::degree() const noexcept {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
    return d;
}

FieldExpr MomentumPolynomial::coefficient(int i, int j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? FieldExpr(0.0) : it->second;
}

double MomentumPolynomial::evaluate(const PhasePoint& pt) const {
    double acc = 0.0;
    for (const auto& [e, c] : terms_)
        acc += c.eval(pt.x, pt.y) * std::pow(pt.px, e.first) * std::pow(pt.py, e.second);
    return acc;
}

double MomentumPolynomial::coefficient_of(int i, int j, Point2 config) const {
    if (i < 0 || j < 0) throw InvalidArgument("negative momentum exponent");
    auto it = terms_.find({i, j});
    return it == terms_.end() ? 0.0 : it->second.eval(config);
}

MomentumPolynomial& MomentumPolynomial::add_term(int i, int j, const FieldExpr& coeff) {
    if (i < 0 || j < 0) throw InvalidArgument("negative momentum exponent");
    if (coeff.is_zero()) return *this;
    auto [it, inserted] = terms_.try_emplace({i, j}, coeff);
    if (!inserted) {
        it->second = it->second + coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
    return *this;
}

MomentumPolynomial& MomentumPolynomial::operator+=(const MomentumPolynomial& rhs) {
    for (const auto& [e, c] : rhs.terms_) add_term(e.first, e.second, c);
    return *this;
}

MomentumPolynomial& MomentumPolynomial::operator-=(const MomentumPolynomial& rhs) {
    for (const auto& [e, c] : rhs.terms_) add_term(e.first, e.second, -c);
    return *this;
}

MomentumPolynomial operator*(const MomentumPolynomial& a, const MomentumPolynomial& b) {
    MomentumPolynomial out;
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) out.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
    return out;
}

MomentumPolynomial operator*(const MomentumPolynomial& a, const FieldExpr& s) {
    MomentumPolynomial out;
    for (const auto& [e, c] : a.terms_) out.add_term(e.first, e.second, c * s);
    return out;
}

namespace {

// Output terms are gathered per exponent and summed in one node each, so the bracket
// DAG stays shallow.
struct Accumulator {
    std::map<MomentumPolynomial::Exponent, std::pair<std::vector<FieldExpr>, std::vector<double>>> slots;

    void add(int i, int j, FieldExpr term, double weight) {
        if (term.is_zero() || weight == 0.0) return;
        auto& [terms, weights] = slots[{i, j}];
        terms.push_back(std::move(term));
        weights.push_back(weight);
    }
};

struct Partials {
    FieldExpr value, dx, dy;
};

std::vector<std::pair<MomentumPolynomial::Exponent, Partials>> with_partials(const MomentumPolynomial& p) {
    std::vector<std::pair<MomentumPolynomial::Exponent, Partials>> out;
    for (const auto& [e, c] : p.terms())
        out.push_back({e, {c, derivative(c, 1, 0), derivative(c, 0, 1)}});
    return out;
}

}  // namespace

MomentumPolynomial poisson(const MomentumPolynomial& f, const MomentumPolynomial& g) {
    const auto fs = with_partials(f);
    const auto gs = with_partials(g);
    Accumulator acc;
    for (const auto& [ef, pf] : fs) {
        const auto [a, b] = ef;
        for (const auto& [eg, pg] : gs) {
            const auto [c, d] = eg;
            // dF/dx dG/dpx + dF/dy dG/dpy
            if (c > 0) acc.add(a + c - 1, b + d, pf.dx * pg.value, c);
            if (d > 0) acc.add(a + c, b + d - 1, pf.dy * pg.value, d);
            // - dF/dpx dG/dx - dF/dpy dG/dy
            if (a > 0) acc.add(a - 1 + c, b + d, pf.value * pg.dx, -a);
            if (b > 0) acc.add(a + c, b - 1 + d, pf.value * pg.dy, -b);
        }
    }
    MomentumPolynomial out;
    for (auto& [e, tw] : acc.slots) out.add_term(e.first, e.second, linear_combination(tw.first, tw.second));
    return out;
}

MomentumPolynomial momentum_x() { return MomentumPolynomial::monomial(1, 0); }
MomentumPolynomial momentum_y() { return MomentumPolynomial::monomial(0, 1); }

MomentumPolynomial angular_momentum() {
    MomentumPolynomial l;
    l.add_term(0, 1, FieldExpr::variable(0));
    l.add_term(1, 0, -FieldExpr::variable(1));
    return l;
}

MomentumPolynomial momentum_squared() {
    MomentumPolynomial p;
    p.add_term(2, 0, 1.0);
    p.add_term(0, 2, 1.0);
    return p;
}

MomentumPolynomial hamiltonian(const FieldExpr& v_cartesian) {
    MomentumPolynomial h;
    h.add_term(2, 0, 0.5);
    h.add_term(0, 2, 0.5);
    h.add_term(0, 0, v_cartesian);
    return h;
}

MomentumPolynomial hamiltonian_of(const PotentialSpec& v) { return hamiltonian(v.cartesian_field()); }

MomentumPolynomial x_of(const FieldExpr& s_theta, bool check_periodic) {
    const FieldExpr x = FieldExpr::variable(0);
    const FieldExpr y = FieldExpr::variable(1);
    MomentumPolynomial out;
    out.add_term(0, 2, x * x);
    out.add_term(1, 1, -2.0 * x * y);
    out.add_term(2, 0, y * y);
    if (!s_theta.is_zero()) {
        if (check_periodic) require_periodic(s_theta);
        out.add_term(0, 0, 2.0 * angular_to_cartesian(s_theta));
    }
    return out;
}

MomentumPolynomial x_of(const PotentialSpec& v) { return x_of(v.angular, !v.sector); }

}  // namespace superint
