#pragma once

// Scalar fields on a two-variable configuration space, as immutable expression DAGs.
//
// Every node evaluates on plain doubles and on Jet2 arguments, which yields exact
// (to roundoff) partial derivatives of any composite field. Nodes are shared, never
// mutated, and safe to evaluate concurrently.

#include <memory>
#include <optional>
#include <vector>

#include "superint/jet.hpp"
#include "superint/spline.hpp"

namespace superint {

struct JetConfig {
    /// Largest total derivative order accepted by the public jet entry points.
    int max_order = 12;
};

/// Largest derivative order a tabulated (spline) node will serve.
inline constexpr int kTabulatedMaxOrder = 2;

namespace detail {
struct Node;
}

struct Interval {
    double lo;
    double hi;
};

class FieldExpr {
public:
    /// The zero field.
    FieldExpr();
    FieldExpr(double value);  // NOLINT(google-explicit-constructor): constants read naturally

    static FieldExpr constant(double value) { return FieldExpr(value); }
    /// Coordinate function: index 0 is the first variable (x, r, or theta), index 1 the second.
    static FieldExpr variable(int index);
    static FieldExpr tabulated(std::shared_ptr<const CubicSpline> spline, const FieldExpr& argument);

    double eval(Point2 p) const;
    double eval(double u, double v) const { return eval(Point2{u, v}); }
    /// Taylor jet at p. Throws OrderOverflow when order > config.max_order.
    Jet2 jet(Point2 p, int order, const JetConfig& config = {}) const;

    std::optional<double> constant_value() const;
    bool is_zero() const;

    /// Number of distinct nodes reachable from this expression.
    std::size_t node_count() const;
    /// Valid argument ranges of every non-periodic tabulated node.
    std::vector<Interval> tabulated_domains() const;

    const detail::Node* node() const noexcept { return node_.get(); }

    friend FieldExpr operator+(const FieldExpr& a, const FieldExpr& b);
    friend FieldExpr operator-(const FieldExpr& a, const FieldExpr& b);
    friend FieldExpr operator*(const FieldExpr& a, const FieldExpr& b);
    friend FieldExpr operator/(const FieldExpr& a, const FieldExpr& b);
    friend FieldExpr operator-(const FieldExpr& a);

    FieldExpr& operator+=(const FieldExpr& b) { return *this = *this + b; }
    FieldExpr& operator*=(const FieldExpr& b) { return *this = *this * b; }

private:
    explicit FieldExpr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
    friend struct FieldBuilder;

    std::shared_ptr<const detail::Node> node_;
};

FieldExpr sin(const FieldExpr& a);
FieldExpr cos(const FieldExpr& a);
FieldExpr exp(const FieldExpr& a);
FieldExpr log(const FieldExpr& a);
FieldExpr sqrt(const FieldExpr& a);
FieldExpr pow(const FieldExpr& a, double exponent);
FieldExpr ipow(const FieldExpr& a, int exponent);
FieldExpr atan2(const FieldExpr& y, const FieldExpr& x);

/// Weighted sum  sum_k weights[k] * terms[k].
FieldExpr linear_combination(const std::vector<FieldExpr>& terms, const std::vector<double>& weights);

/// d^{di+dj} f / du^di dv^dj as a new node.
FieldExpr derivative(const FieldExpr& f, int di, int dj);

/// f(g0(u, v), g1(u, v)).
FieldExpr compose(const FieldExpr& f, const FieldExpr& g0, const FieldExpr& g1);

/// Convenience: a function of one variable (variable 0) composed with g.
inline FieldExpr compose(const FieldExpr& f, const FieldExpr& g) { return compose(f, g, FieldExpr(0.0)); }

/// d^{i+j} f / du^i dv^j at p, recovered from a jet of order i + j.
double deriv_at(const FieldExpr& f, Point2 p, int i, int j, const JetConfig& config = {});

}  // namespace superint
