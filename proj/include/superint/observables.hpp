#pragma once

// Phase-space observables polynomial in the momenta, with field coefficients, and the
// canonical Poisson bracket on them.

#include <map>
#include <utility>

#include "superint/field.hpp"
#include "superint/potential_spec.hpp"

namespace superint {

struct PhasePoint {
    double x = 0.0;
    double y = 0.0;
    double px = 0.0;
    double py = 0.0;

    friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

struct PolarPoint {
    double r = 0.0;
    double theta = 0.0;
    double pr = 0.0;
    double lz = 0.0;
};

/// Throws DomainError at the origin.
PolarPoint to_polar(const PhasePoint& pt);
PhasePoint from_polar(const PolarPoint& pt);

/// sum_{ij} c_ij(x, y) px^i py^j. Missing exponents are zero.
class MomentumPolynomial {
public:
    using Exponent = std::pair<int, int>;

    MomentumPolynomial() = default;
    static MomentumPolynomial monomial(int i, int j, FieldExpr coeff = FieldExpr(1.0));
    static MomentumPolynomial scalar(FieldExpr coeff) { return monomial(0, 0, std::move(coeff)); }

    /// Highest total momentum degree among stored terms (0 when empty).
    int degree() const noexcept;
    const std::map<Exponent, FieldExpr>& terms() const noexcept { return terms_; }
    FieldExpr coefficient(int i, int j) const;
    bool is_zero() const noexcept { return terms_.empty(); }

    double evaluate(const PhasePoint& pt) const;
    /// Value of the (i, j) coefficient field at a configuration point.
    double coefficient_of(int i, int j, Point2 config) const;

    MomentumPolynomial& add_term(int i, int j, const FieldExpr& coeff);

    MomentumPolynomial& operator+=(const MomentumPolynomial& rhs);
    MomentumPolynomial& operator-=(const MomentumPolynomial& rhs);
    friend MomentumPolynomial operator+(MomentumPolynomial a, const MomentumPolynomial& b) { return a += b; }
    friend MomentumPolynomial operator-(MomentumPolynomial a, const MomentumPolynomial& b) { return a -= b; }
    friend MomentumPolynomial operator*(const MomentumPolynomial& a, const MomentumPolynomial& b);
    friend MomentumPolynomial operator*(const MomentumPolynomial& a, const FieldExpr& s);
    friend MomentumPolynomial operator*(const FieldExpr& s, const MomentumPolynomial& a) { return a * s; }

private:
    std::map<Exponent, FieldExpr> terms_;
};

/// sum_q dF/dq dG/dp_q - dF/dp_q dG/dq.
MomentumPolynomial poisson(const MomentumPolynomial& f, const MomentumPolynomial& g);

MomentumPolynomial momentum_x();
MomentumPolynomial momentum_y();
/// L_z = x p_y - y p_x.
MomentumPolynomial angular_momentum();
/// p_x^2 + p_y^2.
MomentumPolynomial momentum_squared();

/// H = (px^2 + py^2)/2 + V(x, y).
MomentumPolynomial hamiltonian(const FieldExpr& v_cartesian);
MomentumPolynomial hamiltonian_of(const PotentialSpec& v);

/// X = L_z^2 + 2 S(theta). S takes theta as variable 0 and must be 2 pi periodic unless
/// `check_periodic` is false.
MomentumPolynomial x_of(const FieldExpr& s_theta, bool check_periodic = true);
/// X built from the angular part of a potential (the periodicity check follows spec.sector).
MomentumPolynomial x_of(const PotentialSpec& v);

}  // namespace superint
