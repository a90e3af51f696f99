#include <atomic>
#include <cstdlib>
#include <cstring>

#include "superint/error.hpp"
#include "superint/kernels.hpp"

namespace superint::kernels {
namespace {

struct Table {
    Isa isa;
    void (*axpy)(double, const double*, double*, std::size_t) noexcept;
    double (*dot)(const double*, const double*, std::size_t) noexcept;
    void (*tri_convolve)(int, const double*, const double*, double*) noexcept;
};

constexpr Table kScalar{Isa::scalar, &scalar::axpy, &scalar::dot, &scalar::tri_convolve};
#if SUPERINT_HAVE_AVX2_KERNELS
constexpr Table kAvx2{Isa::avx2, &avx2::axpy, &avx2::dot, &avx2::tri_convolve};
#endif

bool cpu_has_avx2() noexcept {
#if SUPERINT_HAVE_AVX2_KERNELS && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Table* detect() noexcept {
    if (const char* env = std::getenv("SUPERINT_ISA"); env && std::strcmp(env, "scalar") == 0)
        return &kScalar;
#if SUPERINT_HAVE_AVX2_KERNELS
    if (cpu_has_avx2()) return &kAvx2;
#endif
    return &kScalar;
}

std::atomic<const Table*>& table_slot() noexcept {
    static std::atomic<const Table*> slot{detect()};
    return slot;
}

const Table& table() noexcept { return *table_slot().load(std::memory_order_relaxed); }

}  // namespace

const char* isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) noexcept { return isa == Isa::scalar || cpu_has_avx2(); }

Isa active_isa() noexcept { return table().isa; }

void force_isa(Isa isa) {
    if (!isa_supported(isa)) throw InvalidArgument(std::string("instruction set not supported: ") + isa_name(isa));
#if SUPERINT_HAVE_AVX2_KERNELS
    table_slot().store(isa == Isa::avx2 ? &kAvx2 : &kScalar, std::memory_order_relaxed);
#else
    table_slot().store(&kScalar, std::memory_order_relaxed);
#endif
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    if (y.size() < x.size()) throw InvalidArgument("axpy: output shorter than input");
    table().axpy(alpha, x.data(), y.data(), x.size());
}

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InvalidArgument("dot: length mismatch");
    return table().dot(x.data(), y.data(), x.size());
}

void tri_convolve(int order, std::span<const double> lhs, std::span<const double> rhs,
                  std::span<double> out) {
    const std::size_t n = tri_size(order);
    if (order < 0 || lhs.size() != n || rhs.size() != n || out.size() != n)
        throw InvalidArgument("tri_convolve: table size does not match order");
    table().tri_convolve(order, lhs.data(), rhs.data(), out.data());
}

}  // namespace superint::kernels
