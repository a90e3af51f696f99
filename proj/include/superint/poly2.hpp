#pragma once

#include <map>
#include <utility>

#include "superint/field.hpp"
#include "superint/jet.hpp"

namespace superint {

/// Sparse bivariate polynomial sum c_{ij} x^i y^j with real coefficients. Used for the
/// exactly known coefficient fields (leading terms, compatibility polynomials).
class Poly2 {
public:
    using Exponent = std::pair<int, int>;

    Poly2() = default;
    static Poly2 constant(double c);
    static Poly2 monomial(int i, int j, double c = 1.0);

    double coeff(int i, int j) const;
    const std::map<Exponent, double>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    int degree() const noexcept;

    double eval(double x, double y) const;
    /// Exact Taylor jet at p (re-expansion of the monomials about p).
    Jet2 jet(Point2 p, int order) const;
    FieldExpr to_field() const;

    Poly2& operator+=(const Poly2& rhs);
    Poly2& operator-=(const Poly2& rhs);
    Poly2& operator*=(double rhs);
    friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
    friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
    friend Poly2 operator*(Poly2 a, double s) { return a *= s; }
    friend Poly2 operator*(double s, Poly2 a) { return a *= s; }
    friend Poly2 operator*(const Poly2& a, const Poly2& b);
    friend bool operator==(const Poly2&, const Poly2&) = default;

    /// Largest absolute coefficient difference between two polynomials.
    static double max_abs_diff(const Poly2& a, const Poly2& b);

private:
    void add(int i, int j, double c);
    std::map<Exponent, double> terms_;
};

}  // namespace superint
