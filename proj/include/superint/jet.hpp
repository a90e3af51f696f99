#pragma once

// Truncated bivariate Taylor series ("jets").
//
// A Jet2 of order K at base point (u0, v0) stores c[i][j] for i + j <= K, the Taylor
// coefficients d^{i+j} f / du^i dv^j (u0, v0) / (i! j!). Arithmetic is exact up to
// roundoff in the retained coefficients.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace superint {

struct Point2 {
    double u = 0.0;
    double v = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Largest order a jet can be built with. Public entry points use the smaller,
/// configurable JetConfig::max_order.
inline constexpr int kJetHardLimit = 40;

/// n! as a double, for 0 <= n <= kJetHardLimit.
double factorial(int n);

double binomial(int n, int k);

class Jet2 {
public:
    Jet2() : Jet2(Point2{}, 0) {}
    Jet2(Point2 base, int order);

    static Jet2 constant(Point2 base, int order, double value);
    /// The coordinate function u (index 0) or v (index 1).
    static Jet2 variable(Point2 base, int order, int index);

    int order() const noexcept { return order_; }
    Point2 base() const noexcept { return base_; }
    double value() const noexcept { return coeffs_[0]; }

    double coeff(int i, int j) const;
    double& coeff(int i, int j);

    /// The partial derivative d^{i+j} f / du^i dv^j at the base point.
    double partial(int i, int j) const;

    std::span<const double> coeffs() const noexcept { return coeffs_; }
    std::span<double> coeffs() noexcept { return coeffs_; }

    /// Jet of d^{di+dj} f / du^di dv^dj; its order drops by di + dj.
    Jet2 derivative(int di, int dj) const;

    /// Same series cut to a lower order.
    Jet2 truncated(int order) const;

    /// The series minus its constant term.
    Jet2 nilpotent() const;

    /// Largest absolute coefficient.
    double max_abs() const noexcept;

    Jet2& operator+=(const Jet2& rhs);
    Jet2& operator-=(const Jet2& rhs);
    Jet2& operator*=(const Jet2& rhs);
    Jet2& operator+=(double rhs) noexcept;
    Jet2& operator*=(double rhs) noexcept;

    friend Jet2 operator+(Jet2 lhs, const Jet2& rhs) { return lhs += rhs; }
    friend Jet2 operator-(Jet2 lhs, const Jet2& rhs) { return lhs -= rhs; }
    friend Jet2 operator*(const Jet2& lhs, const Jet2& rhs);
    friend Jet2 operator/(const Jet2& lhs, const Jet2& rhs);
    friend Jet2 operator*(Jet2 lhs, double rhs) { return lhs *= rhs; }
    friend Jet2 operator*(double lhs, Jet2 rhs) { return rhs *= lhs; }
    friend Jet2 operator+(Jet2 lhs, double rhs) { return lhs += rhs; }
    friend Jet2 operator-(const Jet2& operand) { return operand * -1.0; }

private:
    void require_compatible(const Jet2& rhs) const;
    std::size_t index(int i, int j) const;

    Point2 base_;
    int order_;
    std::vector<double> coeffs_;
};

/// sum_n taylor[n] * (x - x(base))^n, where taylor holds the univariate Taylor
/// coefficients of the outer function at x's constant term. Entries past the order are ignored.
Jet2 compose_univariate(const Jet2& x, std::span<const double> taylor);

/// f(g0, g1) where `outer` is the jet of f at (g0(base), g1(base)).
Jet2 compose(const Jet2& outer, const Jet2& g0, const Jet2& g1);

Jet2 reciprocal(const Jet2& x);
Jet2 sin(const Jet2& x);
Jet2 cos(const Jet2& x);
Jet2 exp(const Jet2& x);
Jet2 log(const Jet2& x);
Jet2 sqrt(const Jet2& x);
/// Real power; the base must be strictly positive unless the jet has order 0.
Jet2 pow(const Jet2& x, double exponent);
/// Integer power, any sign of base (a zero base with a negative exponent is an error).
Jet2 ipow(const Jet2& x, int exponent);
/// Two-argument arctangent with range (-pi, pi].
Jet2 atan2(const Jet2& y, const Jet2& x);

}  // namespace superint
