// Compiled with -mavx2 -mfma; only reached after the runtime feature check.
#include "superint/kernels.hpp"

#if SUPERINT_HAVE_AVX2_KERNELS

#include <immintrin.h>

#include <cmath>

namespace superint::kernels::avx2 {

void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d vx = _mm256_loadu_pd(x + k);
        const __m256d vy = _mm256_loadu_pd(y + k);
        _mm256_storeu_pd(y + k, _mm256_fmadd_pd(a, vx, vy));
    }
    for (; k < n; ++k) y[k] = std::fma(alpha, x[k], y[k]);
}

double dot(const double* x, const double* y, std::size_t n) noexcept {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k + 4), _mm256_loadu_pd(y + k + 4), acc1);
    }
    for (; k + 4 <= n; k += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k), acc0);
    acc0 = _mm256_add_pd(acc0, acc1);
    const __m128d lo = _mm256_castpd256_pd128(acc0);
    const __m128d hi = _mm256_extractf128_pd(acc0, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    double acc = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
    for (; k < n; ++k) acc = std::fma(x[k], y[k], acc);
    return acc;
}

void tri_convolve(int order, const double* lhs, const double* rhs, double* out) noexcept {
    const std::size_t size = tri_size(order);
    for (std::size_t k = 0; k < size; ++k) out[k] = 0.0;
    for (int i = 0; i <= order; ++i) {
        double* out_row = out + tri_row(order, i);
        const int width = order - i;
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

}  // namespace superint::kernels::avx2

#endif
