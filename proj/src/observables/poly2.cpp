#include "superint/poly2.hpp"

#include <algorithm>
#include <cmath>

namespace superint {

Poly2 Poly2::constant(double c) { return monomial(0, 0, c); }

Poly2 Poly2::monomial(int i, int j, double c) {
    Poly2 p;
    p.add(i, j, c);
    return p;
}

void Poly2::add(int i, int j, double c) {
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace({i, j}, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

double Poly2::coeff(int i, int j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? 0.0 : it->second;
}

int Poly2::degree() const noexcept {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
    return d;
}

double Poly2::eval(double x, double y) const {
    double acc = 0.0;
    for (const auto& [e, c] : terms_) acc += c * std::pow(x, e.first) * std::pow(y, e.second);
    return acc;
}

Jet2 Poly2::jet(Point2 p, int order) const {
    Jet2 acc(p, order);
    if (terms_.empty()) return acc;
    const int deg = degree();
    std::vector<Jet2> xs{Jet2::constant(p, order, 1.0)}, ys{Jet2::constant(p, order, 1.0)};
    const Jet2 x = Jet2::variable(p, order, 0);
    const Jet2 y = Jet2::variable(p, order, 1);
    for (int k = 1; k <= deg; ++k) {
        xs.push_back(xs.back() * x);
        ys.push_back(ys.back() * y);
    }
    for (const auto& [e, c] : terms_) {
        Jet2 term = xs[static_cast<std::size_t>(e.first)] * ys[static_cast<std::size_t>(e.second)];
        term *= c;
        acc += term;
    }
    return acc;
}

FieldExpr Poly2::to_field() const {
    const FieldExpr x = FieldExpr::variable(0);
    const FieldExpr y = FieldExpr::variable(1);
    std::vector<FieldExpr> monos;
    std::vector<double> weights;
    for (const auto& [e, c] : terms_) {
        monos.push_back(ipow(x, e.first) * ipow(y, e.second));
        weights.push_back(c);
    }
    return linear_combination(monos, weights);
}

Poly2& Poly2::operator+=(const Poly2& rhs) {
    for (const auto& [e, c] : rhs.terms_) add(e.first, e.second, c);
    return *this;
}

Poly2& Poly2::operator-=(const Poly2& rhs) {
    for (const auto& [e, c] : rhs.terms_) add(e.first, e.second, -c);
    return *this;
}

Poly2& Poly2::operator*=(double rhs) {
    if (rhs == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= rhs;
    return *this;
}

Poly2 operator*(const Poly2& a, const Poly2& b) {
    Poly2 out;
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) out.add(ea.first + eb.first, ea.second + eb.second, ca * cb);
    return out;
}

double Poly2::max_abs_diff(const Poly2& a, const Poly2& b) {
    double m = 0.0;
    for (const auto& [e, c] : (a - b).terms_) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace superint
