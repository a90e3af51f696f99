#pragma once

// Shared helpers for the unit and acceptance suites: seeded generators and
// finite-difference oracles that never touch the jet machinery.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace superint::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline double rel_err(double got, double want, double floor = 1e-300) {
    return std::abs(got - want) / std::max({std::abs(want), std::abs(got), floor});
}

/// Central difference of order n in one variable, step h, error O(h^2).
inline double central_difference(const std::function<double(double)>& f, double x, int n, double h) {
    double acc = 0.0;
    double binom = 1.0;
    for (int k = 0; k <= n; ++k) {
        const double shift = (0.5 * n - k) * h;
        acc += ((k % 2 == 0) ? 1.0 : -1.0) * binom * f(x + shift);
        binom = binom * (n - k) / (k + 1);
    }
    return acc / std::pow(h, n);
}

/// Mixed partial d^{i+j} f / du^i dv^j by nested central differences with one
/// Richardson step in the shared step size (error O(h^4)).
inline double fd_partial(const std::function<double(double, double)>& f, double u, double v, int i, int j,
                         double h) {
    auto raw = [&](double step) {
        auto inner = [&](double uu) {
            return central_difference([&](double vv) { return f(uu, vv); }, v, j, step);
        };
        return central_difference(inner, u, i, step);
    };
    return (4.0 * raw(0.5 * h) - raw(h)) / 3.0;
}

/// Bivariate polynomial with random coefficients: sum c[a][b] u^a v^b, a + b <= degree.
struct RandomPoly {
    int degree;
    std::vector<std::vector<double>> c;

    RandomPoly(Rng& rng, int deg) : degree(deg), c(static_cast<std::size_t>(deg + 1)) {
        for (int a = 0; a <= deg; ++a) {
            c[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(deg - a + 1));
            for (auto& x : c[static_cast<std::size_t>(a)]) x = uniform(rng, -1.0, 1.0);
        }
    }

    double operator()(double u, double v) const {
        double acc = 0.0;
        for (int a = 0; a <= degree; ++a)
            for (int b = 0; a + b <= degree; ++b)
                acc += c[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] * std::pow(u, a) * std::pow(v, b);
        return acc;
    }
};

}  // namespace superint::testing
