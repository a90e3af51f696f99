#include "superint/field.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "superint/error.hpp"

namespace superint {
namespace detail {

enum class Kind {
    constant,
    variable,
    sum,
    product,
    quotient,
    real_pow,
    int_pow,
    sin,
    cos,
    sqrt,
    exp,
    log,
    atan2,
    tabulated,
    derivative,
    compose,
};

struct Node {
    Kind kind = Kind::constant;
    double value = 0.0;  // constant value or real exponent
    int a = 0;           // variable index, integer exponent, or d/du order
    int b = 0;           // d/dv order
    std::vector<std::shared_ptr<const Node>> children;
    std::vector<double> weights;  // sum nodes
    std::shared_ptr<const CubicSpline> spline;
};

}  // namespace detail

using detail::Kind;
using detail::Node;
using NodePtr = std::shared_ptr<const Node>;

struct FieldBuilder {
    static FieldExpr make(Node n) { return FieldExpr(std::make_shared<const Node>(std::move(n))); }
    static const NodePtr& ptr(const FieldExpr& f) { return f.node_; }
    static FieldExpr wrap(NodePtr p) { return FieldExpr(std::move(p)); }
};

namespace {

FieldExpr make_unary(Kind kind, const FieldExpr& a) {
    Node n;
    n.kind = kind;
    n.children = {FieldBuilder::ptr(a)};
    return FieldBuilder::make(std::move(n));
}

FieldExpr make_binary(Kind kind, const FieldExpr& a, const FieldExpr& b) {
    Node n;
    n.kind = kind;
    n.children = {FieldBuilder::ptr(a), FieldBuilder::ptr(b)};
    return FieldBuilder::make(std::move(n));
}

double checked_real_pow(double base, double exponent) {
    if (base < 0.0) throw DomainError("real power of a negative base");
    return std::pow(base, exponent);
}

double checked_sqrt(double x) {
    if (x < 0.0) throw DomainError("sqrt of a negative value");
    return std::sqrt(x);
}

double checked_log(double x) {
    if (!(x > 0.0)) throw DomainError("log of a non-positive value");
    return std::log(x);
}

double checked_div(double a, double b) {
    if (b == 0.0) throw DivisionByZero("quotient node with zero denominator");
    return a / b;
}

double checked_atan2(double y, double x) {
    if (x == 0.0 && y == 0.0) throw DomainError("atan2 at the origin");
    return std::atan2(y, x);
}

struct JetKey {
    const Node* node;
    int order;
    bool operator==(const JetKey&) const = default;
};

struct JetKeyHash {
    std::size_t operator()(const JetKey& k) const noexcept {
        return std::hash<const void*>()(k.node) ^ (static_cast<std::size_t>(k.order) * 0x9e3779b97f4a7c15ULL);
    }
};

class JetEvaluator {
public:
    explicit JetEvaluator(Point2 p) : p_(p) {}

    Jet2 eval(const Node* n, int order) {
        if (order > kJetHardLimit)
            throw OrderOverflow("expression requires derivatives beyond order " + std::to_string(kJetHardLimit));
        const JetKey key{n, order};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Jet2 result = compute(n, order);
        memo_.emplace(key, result);
        return result;
    }

private:
    Jet2 child(const Node* n, std::size_t k, int order) { return eval(n->children[k].get(), order); }

    Jet2 compute(const Node* n, int order) {
        switch (n->kind) {
            case Kind::constant: return Jet2::constant(p_, order, n->value);
            case Kind::variable: return Jet2::variable(p_, order, n->a);
            case Kind::sum: {
                Jet2 acc(p_, order);
                for (std::size_t k = 0; k < n->children.size(); ++k) {
                    Jet2 term = child(n, k, order);
                    term *= n->weights[k];
                    acc += term;
                }
                return acc;
            }
            case Kind::product: return child(n, 0, order) * child(n, 1, order);
            case Kind::quotient: {
                const Jet2 den = child(n, 1, order);
                if (den.value() == 0.0) throw DivisionByZero("quotient node with zero denominator");
                return child(n, 0, order) * reciprocal(den);
            }
            case Kind::real_pow: return pow(child(n, 0, order), n->value);
            case Kind::int_pow: return ipow(child(n, 0, order), n->a);
            case Kind::sin: return sin(child(n, 0, order));
            case Kind::cos: return cos(child(n, 0, order));
            case Kind::sqrt: return sqrt(child(n, 0, order));
            case Kind::exp: return exp(child(n, 0, order));
            case Kind::log: return log(child(n, 0, order));
            case Kind::atan2: return atan2(child(n, 0, order), child(n, 1, order));
            case Kind::tabulated: {
                if (order > kTabulatedMaxOrder)
                    throw OrderOverflow("tabulated node serves derivatives up to order " +
                                        std::to_string(kTabulatedMaxOrder) + ", requested " + std::to_string(order));
                const Jet2 arg = child(n, 0, order);
                const auto d = n->spline->derivatives(arg.value());
                const double taylor[3] = {d[0], d[1], 0.5 * d[2]};
                return compose_univariate(arg, taylor);
            }
            case Kind::derivative: return child(n, 0, order + n->a + n->b).derivative(n->a, n->b);
            case Kind::compose: {
                const Jet2 g0 = child(n, 1, order);
                const Jet2 g1 = child(n, 2, order);
                JetEvaluator inner(Point2{g0.value(), g1.value()});
                const Jet2 outer = inner.eval(n->children[0].get(), order);
                return compose(outer, g0, g1);
            }
        }
        throw Error("unknown field node kind");
    }

    Point2 p_;
    std::unordered_map<JetKey, Jet2, JetKeyHash> memo_;
};

class ValueEvaluator {
public:
    explicit ValueEvaluator(Point2 p) : p_(p) {}

    double eval(const Node* n) {
        if (auto it = memo_.find(n); it != memo_.end()) return it->second;
        const double v = compute(n);
        memo_.emplace(n, v);
        return v;
    }

private:
    double child(const Node* n, std::size_t k) { return eval(n->children[k].get()); }

    double compute(const Node* n) {
        switch (n->kind) {
            case Kind::constant: return n->value;
            case Kind::variable: return n->a == 0 ? p_.u : p_.v;
            case Kind::sum: {
                double acc = 0.0;
                for (std::size_t k = 0; k < n->children.size(); ++k) acc += n->weights[k] * child(n, k);
                return acc;
            }
            case Kind::product: return child(n, 0) * child(n, 1);
            case Kind::quotient: return checked_div(child(n, 0), child(n, 1));
            case Kind::real_pow: return checked_real_pow(child(n, 0), n->value);
            case Kind::int_pow: {
                const double base = child(n, 0);
                if (base == 0.0 && n->a < 0) throw DivisionByZero("negative integer power of zero");
                return std::pow(base, n->a);
            }
            case Kind::sin: return std::sin(child(n, 0));
            case Kind::cos: return std::cos(child(n, 0));
            case Kind::sqrt: return checked_sqrt(child(n, 0));
            case Kind::exp: return std::exp(child(n, 0));
            case Kind::log: return checked_log(child(n, 0));
            case Kind::atan2: return checked_atan2(child(n, 0), child(n, 1));
            case Kind::tabulated: return n->spline->derivatives(child(n, 0))[0];
            case Kind::derivative: {
                if (!jets_) jets_ = std::make_unique<JetEvaluator>(p_);
                return jets_->eval(n->children[0].get(), n->a + n->b).partial(n->a, n->b);
            }
            case Kind::compose: {
                ValueEvaluator inner(Point2{child(n, 1), child(n, 2)});
                return inner.eval(n->children[0].get());
            }
        }
        throw Error("unknown field node kind");
    }

    Point2 p_;
    std::unordered_map<const Node*, double> memo_;
    std::unique_ptr<JetEvaluator> jets_;
};

}  // namespace

FieldExpr::FieldExpr() : FieldExpr(0.0) {}

FieldExpr::FieldExpr(double value) {
    Node n;
    n.kind = Kind::constant;
    n.value = value;
    node_ = std::make_shared<const Node>(std::move(n));
}

FieldExpr FieldExpr::variable(int index) {
    if (index != 0 && index != 1) throw InvalidArgument("field variable index must be 0 or 1");
    Node n;
    n.kind = Kind::variable;
    n.a = index;
    return FieldBuilder::make(std::move(n));
}

FieldExpr FieldExpr::tabulated(std::shared_ptr<const CubicSpline> spline, const FieldExpr& argument) {
    if (!spline) throw InvalidArgument("tabulated node without spline");
    Node n;
    n.kind = Kind::tabulated;
    n.spline = std::move(spline);
    n.children = {argument.node_};
    return FieldBuilder::make(std::move(n));
}

double FieldExpr::eval(Point2 p) const {
    ValueEvaluator ev(p);
    return ev.eval(node_.get());
}

Jet2 FieldExpr::jet(Point2 p, int order, const JetConfig& config) const {
    if (order < 0 || order > config.max_order)
        throw OrderOverflow("jet order " + std::to_string(order) + " exceeds configured maximum " +
                            std::to_string(config.max_order));
    JetEvaluator ev(p);
    return ev.eval(node_.get(), order);
}

std::optional<double> FieldExpr::constant_value() const {
    if (node_->kind == Kind::constant) return node_->value;
    return std::nullopt;
}

bool FieldExpr::is_zero() const { return node_->kind == Kind::constant && node_->value == 0.0; }

std::size_t FieldExpr::node_count() const {
    std::unordered_set<const Node*> seen;
    std::vector<const Node*> stack{node_.get()};
    while (!stack.empty()) {
        const Node* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        for (const auto& c : n->children) stack.push_back(c.get());
    }
    return seen.size();
}

std::vector<Interval> FieldExpr::tabulated_domains() const {
    std::vector<Interval> out;
    std::unordered_set<const Node*> seen;
    std::vector<const Node*> stack{node_.get()};
    while (!stack.empty()) {
        const Node* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        if (n->kind == Kind::tabulated && n->spline->boundary() != CubicSpline::Boundary::periodic)
            out.push_back({n->spline->front(), n->spline->back()});
        for (const auto& c : n->children) stack.push_back(c.get());
    }
    return out;
}

FieldExpr linear_combination(const std::vector<FieldExpr>& terms, const std::vector<double>& weights) {
    if (terms.size() != weights.size()) throw InvalidArgument("linear_combination: size mismatch");
    Node n;
    n.kind = Kind::sum;
    double constant = 0.0;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        if (weights[k] == 0.0) continue;
        if (auto c = terms[k].constant_value()) {
            constant += weights[k] * *c;
            continue;
        }
        n.children.push_back(FieldBuilder::ptr(terms[k]));
        n.weights.push_back(weights[k]);
    }
    if (n.children.empty()) return FieldExpr(constant);
    if (constant != 0.0) {
        n.children.push_back(FieldBuilder::ptr(FieldExpr(constant)));
        n.weights.push_back(1.0);
    }
    if (n.children.size() == 1 && n.weights[0] == 1.0) return FieldBuilder::wrap(n.children[0]);
    return FieldBuilder::make(std::move(n));
}

FieldExpr operator+(const FieldExpr& a, const FieldExpr& b) { return linear_combination({a, b}, {1.0, 1.0}); }
FieldExpr operator-(const FieldExpr& a, const FieldExpr& b) { return linear_combination({a, b}, {1.0, -1.0}); }
FieldExpr operator-(const FieldExpr& a) { return linear_combination({a}, {-1.0}); }

FieldExpr operator*(const FieldExpr& a, const FieldExpr& b) {
    const auto ca = a.constant_value();
    const auto cb = b.constant_value();
    if (ca && cb) return FieldExpr(*ca * *cb);
    if (ca) return linear_combination({b}, {*ca});
    if (cb) return linear_combination({a}, {*cb});
    return make_binary(Kind::product, a, b);
}

FieldExpr operator/(const FieldExpr& a, const FieldExpr& b) {
    const auto cb = b.constant_value();
    if (cb) {
        if (*cb == 0.0) throw DivisionByZero("division by the constant zero field");
        return a * FieldExpr(1.0 / *cb);
    }
    if (a.is_zero()) return a;
    return make_binary(Kind::quotient, a, b);
}

FieldExpr sin(const FieldExpr& a) {
    if (auto c = a.constant_value()) return FieldExpr(std::sin(*c));
    return make_unary(Kind::sin, a);
}

FieldExpr cos(const FieldExpr& a) {
    if (auto c = a.constant_value()) return FieldExpr(std::cos(*c));
    return make_unary(Kind::cos, a);
}

FieldExpr exp(const FieldExpr& a) {
    if (auto c = a.constant_value()) return FieldExpr(std::exp(*c));
    return make_unary(Kind::exp, a);
}

FieldExpr log(const FieldExpr& a) {
    if (auto c = a.constant_value()) return FieldExpr(checked_log(*c));
    return make_unary(Kind::log, a);
}

FieldExpr sqrt(const FieldExpr& a) {
    if (auto c = a.constant_value()) return FieldExpr(checked_sqrt(*c));
    return make_unary(Kind::sqrt, a);
}

FieldExpr pow(const FieldExpr& a, double exponent) {
    if (exponent == 0.0) return FieldExpr(1.0);
    if (exponent == 1.0) return a;
    if (auto c = a.constant_value()) return FieldExpr(checked_real_pow(*c, exponent));
    Node n;
    n.kind = Kind::real_pow;
    n.value = exponent;
    n.children = {FieldBuilder::ptr(a)};
    return FieldBuilder::make(std::move(n));
}

FieldExpr ipow(const FieldExpr& a, int exponent) {
    if (exponent == 0) return FieldExpr(1.0);
    if (exponent == 1) return a;
    if (auto c = a.constant_value()) {
        if (*c == 0.0 && exponent < 0) throw DivisionByZero("negative integer power of zero");
        return FieldExpr(std::pow(*c, exponent));
    }
    Node n;
    n.kind = Kind::int_pow;
    n.a = exponent;
    n.children = {FieldBuilder::ptr(a)};
    return FieldBuilder::make(std::move(n));
}

FieldExpr atan2(const FieldExpr& y, const FieldExpr& x) {
    const auto cy = y.constant_value();
    const auto cx = x.constant_value();
    if (cy && cx) return FieldExpr(checked_atan2(*cy, *cx));
    return make_binary(Kind::atan2, y, x);
}

FieldExpr derivative(const FieldExpr& f, int di, int dj) {
    if (di < 0 || dj < 0) throw InvalidArgument("negative derivative order");
    if (di + dj == 0) return f;
    const Node* n = f.node();
    if (n->kind == Kind::constant) return FieldExpr(0.0);
    if (n->kind == Kind::variable) {
        const bool hit = (n->a == 0 && di == 1 && dj == 0) || (n->a == 1 && di == 0 && dj == 1);
        return FieldExpr(hit ? 1.0 : 0.0);
    }
    Node d;
    d.kind = Kind::derivative;
    if (n->kind == Kind::derivative) {
        d.a = n->a + di;
        d.b = n->b + dj;
        d.children = {n->children[0]};
    } else {
        d.a = di;
        d.b = dj;
        d.children = {FieldBuilder::ptr(f)};
    }
    return FieldBuilder::make(std::move(d));
}

FieldExpr compose(const FieldExpr& f, const FieldExpr& g0, const FieldExpr& g1) {
    const Node* n = f.node();
    if (n->kind == Kind::constant) return f;
    if (n->kind == Kind::variable) return n->a == 0 ? g0 : g1;
    Node c;
    c.kind = Kind::compose;
    c.children = {FieldBuilder::ptr(f), FieldBuilder::ptr(g0), FieldBuilder::ptr(g1)};
    return FieldBuilder::make(std::move(c));
}

double deriv_at(const FieldExpr& f, Point2 p, int i, int j, const JetConfig& config) {
    if (i < 0 || j < 0) throw InvalidArgument("negative derivative order");
    return f.jet(p, i + j, config).partial(i, j);
}

}  // namespace superint
