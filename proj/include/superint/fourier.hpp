#pragma once

#include <functional>
#include <span>
#include <vector>

namespace superint {

enum class Trig { sin, cos };

/// Default quadrature node count for order-N work: 4N + 8.
constexpr int default_quadrature_nodes(int order) noexcept { return 4 * order + 8; }

/// Uniform nodes theta_m = 2 pi m / M, m = 0..M-1.
std::vector<double> quadrature_nodes(int nodes);

/// (1/pi) * integral_0^{2pi} g(theta) trig(s theta) d theta by the uniform trapezoid rule
/// on `nodes` points. Exact for trigonometric polynomials of degree < nodes/2 (aliasing
/// aside). With s = 0 and Trig::cos the result is twice the mean of g.
double fourier_project(const std::function<double(double)>& g, int harmonic, Trig kind, int nodes);

/// Same projection from samples already taken at quadrature_nodes(samples.size()).
double fourier_project_samples(std::span<const double> samples, int harmonic, Trig kind);

}  // namespace superint
