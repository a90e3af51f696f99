#include "superint/fourier.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "superint/error.hpp"
#include "superint/kernels.hpp"

namespace superint {

std::vector<double> quadrature_nodes(int nodes) {
    if (nodes < 1) throw InvalidArgument("quadrature needs at least one node");
    std::vector<double> theta(static_cast<std::size_t>(nodes));
    for (int m = 0; m < nodes; ++m) theta[static_cast<std::size_t>(m)] = 2.0 * std::numbers::pi * m / nodes;
    return theta;
}

double fourier_project_samples(std::span<const double> samples, int harmonic, Trig kind) {
    const int nodes = static_cast<int>(samples.size());
    if (harmonic < 0) throw InvalidArgument("negative harmonic");
    if (nodes < 2 * harmonic + 1)
        throw InvalidArgument("fourier_project: " + std::to_string(nodes) + " nodes cannot resolve harmonic " +
                              std::to_string(harmonic));
    std::vector<double> basis(samples.size());
    for (int m = 0; m < nodes; ++m) {
        const double arg = 2.0 * std::numbers::pi * static_cast<double>(harmonic) * m / nodes;
        basis[static_cast<std::size_t>(m)] = kind == Trig::cos ? std::cos(arg) : std::sin(arg);
    }
    return 2.0 / nodes * kernels::dot(samples, basis);
}

double fourier_project(const std::function<double(double)>& g, int harmonic, Trig kind, int nodes) {
    const auto theta = quadrature_nodes(nodes);
    std::vector<double> samples(theta.size());
    for (std::size_t m = 0; m < theta.size(); ++m) {
        samples[m] = g(theta[m]);
        if (!std::isfinite(samples[m]))
            throw DomainError("fourier_project: non-finite sample at theta = " + std::to_string(theta[m]));
    }
    return fourier_project_samples(samples, harmonic, kind);
}

}  // namespace superint
