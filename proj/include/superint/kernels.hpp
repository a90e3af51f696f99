#pragma once

// Data-parallel inner loops shared by the jet arithmetic and the quadrature code.
//
// Every kernel has a portable scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The variant is picked once at first use from the CPU feature
// bits; SUPERINT_ISA=scalar in the environment pins the reference path.

#include <cstddef>
#include <span>

namespace superint::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa) noexcept;
bool isa_supported(Isa isa) noexcept;

/// Currently selected instruction set.
Isa active_isa() noexcept;

/// Pin the dispatch table to one instruction set. Throws InvalidArgument when the
/// CPU does not support it.
void force_isa(Isa isa);

/// Number of coefficients of a triangular bivariate table of total order `order`.
constexpr std::size_t tri_size(int order) noexcept {
    return static_cast<std::size_t>(order + 1) * static_cast<std::size_t>(order + 2) / 2;
}

/// Offset of row i (power of the first variable) in the triangular layout. Row i holds
/// the order - i + 1 coefficients c[i][0..order-i] contiguously.
constexpr std::size_t tri_row(int order, int i) noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(order + 1) -
           static_cast<std::size_t>(i) * static_cast<std::size_t>(i - 1) / 2;
}

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> x, std::span<const double> y);

/// Truncated Cauchy product of two triangular tables of equal order:
/// out[i][j] = sum_{a<=i, b<=j} lhs[a][b] * rhs[i-a][j-b]. `out` is overwritten.
void tri_convolve(int order, std::span<const double> lhs, std::span<const double> rhs,
                  std::span<double> out);

namespace scalar {
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
double dot(const double* x, const double* y, std::size_t n) noexcept;
void tri_convolve(int order, const double* lhs, const double* rhs, double* out) noexcept;
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SUPERINT_HAVE_AVX2_KERNELS 1
namespace avx2 {
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
double dot(const double* x, const double* y, std::size_t n) noexcept;
void tri_convolve(int order, const double* lhs, const double* rhs, double* out) noexcept;
}  // namespace avx2
#else
#define SUPERINT_HAVE_AVX2_KERNELS 0
#endif

}  // namespace superint::kernels
