#include "superint/kernels.hpp"

namespace superint::kernels::scalar {

void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
    for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

double dot(const double* x, const double* y, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += x[k] * y[k];
    return acc;
}

void tri_convolve(int order, const double* lhs, const double* rhs, double* out) noexcept {
    const std::size_t size = tri_size(order);
    for (std::size_t k = 0; k < size; ++k) out[k] = 0.0;
    for (int i = 0; i <= order; ++i) {
        double* out_row = out + tri_row(order, i);
        const int width = order - i;  // out row i spans j = 0..width
        for (int a = 0; a <= i; ++a) {
            const double* lhs_row = lhs + tri_row(order, a);
            const double* rhs_row = rhs + tri_row(order, i - a);
            for (int b = 0; b <= width; ++b) {
                const double alpha = lhs_row[b];
                if (alpha == 0.0) continue;
                axpy(alpha, rhs_row, out_row + b, static_cast<std::size_t>(width - b + 1));
            }
        }
    }
}

}  // namespace superint::kernels::scalar
