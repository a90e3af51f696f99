#include "superint/jet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "superint/error.hpp"
#include "superint/kernels.hpp"

namespace superint {
namespace {

const std::array<double, kJetHardLimit + 1>& factorial_table() {
    static const auto table = [] {
        std::array<double, kJetHardLimit + 1> t{};
        t[0] = 1.0;
        for (int n = 1; n <= kJetHardLimit; ++n) t[n] = t[n - 1] * n;
        return t;
    }();
    return table;
}

void check_order(int order) {
    if (order < 0 || order > kJetHardLimit)
        throw OrderOverflow("jet order " + std::to_string(order) + " outside [0, " +
                            std::to_string(kJetHardLimit) + "]");
}

}  // namespace

double factorial(int n) {
    if (n < 0 || n > kJetHardLimit) throw InvalidArgument("factorial argument out of range");
    return factorial_table()[static_cast<std::size_t>(n)];
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

Jet2::Jet2(Point2 base, int order) : base_(base), order_(order) {
    check_order(order);
    coeffs_.assign(kernels::tri_size(order), 0.0);
}

Jet2 Jet2::constant(Point2 base, int order, double value) {
    Jet2 j(base, order);
    j.coeffs_[0] = value;
    return j;
}

Jet2 Jet2::variable(Point2 base, int order, int index) {
    if (index != 0 && index != 1) throw InvalidArgument("jet variable index must be 0 or 1");
    Jet2 j(base, order);
    j.coeffs_[0] = index == 0 ? base.u : base.v;
    if (order >= 1) j.coeff(index == 0 ? 1 : 0, index == 0 ? 0 : 1) = 1.0;
    return j;
}

std::size_t Jet2::index(int i, int j) const {
    if (i < 0 || j < 0 || i + j > order_)
        throw InvalidArgument("jet coefficient (" + std::to_string(i) + "," + std::to_string(j) +
                              ") outside order " + std::to_string(order_));
    return kernels::tri_row(order_, i) + static_cast<std::size_t>(j);
}

double Jet2::coeff(int i, int j) const { return coeffs_[index(i, j)]; }
double& Jet2::coeff(int i, int j) { return coeffs_[index(i, j)]; }

double Jet2::partial(int i, int j) const { return coeff(i, j) * factorial(i) * factorial(j); }

Jet2 Jet2::derivative(int di, int dj) const {
    if (di < 0 || dj < 0) throw InvalidArgument("negative derivative order");
    if (di + dj > order_)
        throw OrderOverflow("derivative of total order " + std::to_string(di + dj) +
                            " requested from a jet of order " + std::to_string(order_));
    Jet2 out(base_, order_ - di - dj);
    for (int i = 0; i <= out.order_; ++i) {
        for (int j = 0; i + j <= out.order_; ++j) {
            const double scale = factorial(i + di) / factorial(i) * (factorial(j + dj) / factorial(j));
            out.coeff(i, j) = coeff(i + di, j + dj) * scale;
        }
    }
    return out;
}

Jet2 Jet2::truncated(int order) const {
    if (order > order_) throw OrderOverflow("cannot raise the order of a jet by truncation");
    Jet2 out(base_, order);
    for (int i = 0; i <= order; ++i)
        for (int j = 0; i + j <= order; ++j) out.coeff(i, j) = coeff(i, j);
    return out;
}

Jet2 Jet2::nilpotent() const {
    Jet2 out = *this;
    out.coeffs_[0] = 0.0;
    return out;
}

double Jet2::max_abs() const noexcept {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

void Jet2::require_compatible(const Jet2& rhs) const {
    if (order_ != rhs.order_ || !(base_ == rhs.base_))
        throw InvalidArgument("jet arithmetic requires equal order and base point");
}

Jet2& Jet2::operator+=(const Jet2& rhs) {
    require_compatible(rhs);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
    return *this;
}

Jet2& Jet2::operator-=(const Jet2& rhs) {
    require_compatible(rhs);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
    return *this;
}

Jet2& Jet2::operator*=(const Jet2& rhs) {
    *this = *this * rhs;
    return *this;
}

Jet2& Jet2::operator+=(double rhs) noexcept {
    coeffs_[0] += rhs;
    return *this;
}

Jet2& Jet2::operator*=(double rhs) noexcept {
    for (double& c : coeffs_) c *= rhs;
    return *this;
}

Jet2 operator*(const Jet2& lhs, const Jet2& rhs) {
    lhs.require_compatible(rhs);
    Jet2 out(lhs.base_, lhs.order_);
    if (lhs.order_ == 0) {
        out.coeffs_[0] = lhs.coeffs_[0] * rhs.coeffs_[0];
        return out;
    }
    kernels::tri_convolve(lhs.order_, lhs.coeffs_, rhs.coeffs_, out.coeffs_);
    return out;
}

Jet2 operator/(const Jet2& lhs, const Jet2& rhs) { return lhs * reciprocal(rhs); }

Jet2 compose_univariate(const Jet2& x, std::span<const double> taylor) {
    const int order = x.order();
    const Jet2 delta = x.nilpotent();
    auto at = [&](int n) { return n < static_cast<int>(taylor.size()) ? taylor[static_cast<std::size_t>(n)] : 0.0; };
    Jet2 result = Jet2::constant(x.base(), order, at(order));
    for (int n = order - 1; n >= 0; --n) {
        result = result * delta;
        result += at(n);
    }
    return result;
}

Jet2 compose(const Jet2& outer, const Jet2& g0, const Jet2& g1) {
    if (g0.order() != g1.order() || !(g0.base() == g1.base()))
        throw InvalidArgument("compose: inner jets must share order and base point");
    const int order = g0.order();
    if (outer.order() < order) throw OrderOverflow("compose: outer jet order below inner order");
    const Jet2 du = g0.nilpotent();
    const Jet2 dv = g1.nilpotent();
    Jet2 result(g0.base(), order);
    for (int i = order; i >= 0; --i) {
        // row_i(dv) = sum_j outer[i][j] dv^j
        Jet2 row = Jet2::constant(g0.base(), order, outer.coeff(i, order - i));
        for (int j = order - i - 1; j >= 0; --j) {
            row = row * dv;
            row += outer.coeff(i, j);
        }
        result = (i == order) ? row : result * du + row;
    }
    return result;
}

Jet2 reciprocal(const Jet2& x) {
    const double x0 = x.value();
    if (x0 == 0.0 || !std::isfinite(1.0 / x0)) throw DivisionByZero("reciprocal of a jet with zero value");
    std::vector<double> t(static_cast<std::size_t>(x.order()) + 1);
    double p = 1.0 / x0;
    for (std::size_t n = 0; n < t.size(); ++n) {
        t[n] = (n % 2 == 0 ? p : -p);
        p /= x0;
    }
    return compose_univariate(x, t);
}

namespace {

std::vector<double> sincos_taylor(double x0, int order, bool is_sin) {
    const double s = std::sin(x0);
    const double c = std::cos(x0);
    // derivative cycle of sin: s, c, -s, -c; of cos: c, -s, -c, s
    const std::array<double, 4> cycle = is_sin ? std::array<double, 4>{s, c, -s, -c}
                                               : std::array<double, 4>{c, -s, -c, s};
    std::vector<double> t(static_cast<std::size_t>(order) + 1);
    for (int n = 0; n <= order; ++n) t[static_cast<std::size_t>(n)] = cycle[static_cast<std::size_t>(n % 4)] / factorial(n);
    return t;
}

}  // namespace

Jet2 sin(const Jet2& x) { return compose_univariate(x, sincos_taylor(x.value(), x.order(), true)); }
Jet2 cos(const Jet2& x) { return compose_univariate(x, sincos_taylor(x.value(), x.order(), false)); }

Jet2 exp(const Jet2& x) {
    const double e = std::exp(x.value());
    std::vector<double> t(static_cast<std::size_t>(x.order()) + 1);
    for (int n = 0; n <= x.order(); ++n) t[static_cast<std::size_t>(n)] = e / factorial(n);
    return compose_univariate(x, t);
}

Jet2 log(const Jet2& x) {
    const double x0 = x.value();
    if (!(x0 > 0.0)) throw DomainError("log of a non-positive value");
    std::vector<double> t(static_cast<std::size_t>(x.order()) + 1);
    t[0] = std::log(x0);
    double p = 1.0;
    for (int n = 1; n <= x.order(); ++n) {
        p /= x0;
        t[static_cast<std::size_t>(n)] = (n % 2 == 1 ? 1.0 : -1.0) * p / n;
    }
    return compose_univariate(x, t);
}

Jet2 pow(const Jet2& x, double exponent) {
    const double x0 = x.value();
    if (x0 < 0.0) throw DomainError("real power of a negative base");
    if (x0 == 0.0) {
        if (x.order() == 0 && exponent > 0.0) return Jet2::constant(x.base(), 0, 0.0);
        throw DomainError("real power of a zero base has no Taylor expansion");
    }
    std::vector<double> t(static_cast<std::size_t>(x.order()) + 1);
    double coef = 1.0;  // generalized binomial(exponent, n)
    for (int n = 0; n <= x.order(); ++n) {
        t[static_cast<std::size_t>(n)] = coef * std::pow(x0, exponent - n);
        coef *= (exponent - n) / (n + 1);
    }
    return compose_univariate(x, t);
}

Jet2 sqrt(const Jet2& x) {
    if (x.value() < 0.0) throw DomainError("sqrt of a negative value");
    return pow(x, 0.5);
}

Jet2 ipow(const Jet2& x, int exponent) {
    if (exponent < 0) return reciprocal(ipow(x, -exponent));
    Jet2 result = Jet2::constant(x.base(), x.order(), 1.0);
    Jet2 base = x;
    unsigned e = static_cast<unsigned>(exponent);
    while (e != 0) {
        if (e & 1u) result = result * base;
        e >>= 1u;
        if (e != 0) base = base * base;
    }
    return result;
}

Jet2 atan2(const Jet2& y, const Jet2& x) {
    if (y.order() != x.order() || !(y.base() == x.base()))
        throw InvalidArgument("atan2: jets must share order and base point");
    const double x0 = x.value();
    const double y0 = y.value();
    if (x0 == 0.0 && y0 == 0.0) throw DomainError("atan2 at the origin");
    const double theta0 = std::atan2(y0, x0);
    // atan2(y, x) - theta0 = atan(t), t = (x0 y - y0 x) / (x0 x + y0 y), t(base) = 0
    Jet2 num = x0 * y - y0 * x;
    Jet2 den = x0 * x + y0 * y;
    Jet2 t = num * reciprocal(den);
    std::vector<double> series(static_cast<std::size_t>(x.order()) + 1, 0.0);
    for (int n = 1; n <= x.order(); n += 2) series[static_cast<std::size_t>(n)] = ((n / 2) % 2 == 0 ? 1.0 : -1.0) / n;
    Jet2 result = compose_univariate(t, series);
    result += theta0;
    return result;
}

}  // namespace superint
