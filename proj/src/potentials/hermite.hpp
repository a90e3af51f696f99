#pragma once

#include <utility>
#include <vector>

namespace superint::detail {

/// Quintic Hermite interpolation from values and first two derivatives at both ends.
/// Returns (y, y') at x.
inline std::pair<double, double> hermite5(double x0, double x1, double y0, double d0, double s0, double y1, double d1,
                                          double s1, double x) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    const double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
    const double h3 = 0.5 * (t3 - 2 * t4 + t5);
    const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
    const double h5 = 10 * t3 - 15 * t4 + 6 * t5;
    const double g0 = -30 * t2 + 60 * t3 - 30 * t4;
    const double g1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    const double g2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4);
    const double g3 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
    const double g4 = -12 * t2 + 28 * t3 - 15 * t4;
    const double g5 = -g0;
    const double y = h0 * y0 + h * h1 * d0 + h * h * h2 * s0 + h * h * h3 * s1 + h * h4 * d1 + h5 * y1;
    const double dy = (g0 * y0 + h * g1 * d0 + h * h * g2 * s0 + h * h * g3 * s1 + h * g4 * d1 + g5 * y1) / h;
    return {y, dy};
}

/// Sixth-order finite-difference derivative of uniformly spaced samples (one-sided
/// seven-point stencils near the ends).
std::vector<double> derivative6(const std::vector<double>& y, double h);

}  // namespace superint::detail
