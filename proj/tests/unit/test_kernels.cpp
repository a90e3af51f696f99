#include <doctest.h>

#include <random>
#include <vector>

#include "superint/kernels.hpp"
#include "test_support.hpp"

using namespace superint;
namespace k = superint::kernels;

namespace {

std::vector<double> random_vector(testing::Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = testing::uniform(rng, -2.0, 2.0);
    return v;
}

}  // namespace

TEST_CASE("triangular layout offsets") {
    CHECK(k::tri_size(0) == 1);
    CHECK(k::tri_size(4) == 15);
    CHECK(k::tri_row(4, 0) == 0);
    CHECK(k::tri_row(4, 1) == 5);
    CHECK(k::tri_row(4, 2) == 9);
    CHECK(k::tri_row(4, 4) == 14);
}

TEST_CASE("scalar triangular convolution equals brute-force double sum") {
    testing::Rng rng(7);
    for (int order : {0, 1, 3, 6, 9}) {
        const auto a = random_vector(rng, k::tri_size(order));
        const auto b = random_vector(rng, k::tri_size(order));
        std::vector<double> out(k::tri_size(order));
        k::scalar::tri_convolve(order, a.data(), b.data(), out.data());
        auto at = [&](const std::vector<double>& t, int i, int j) { return t[k::tri_row(order, i) + j]; };
        for (int i = 0; i <= order; ++i) {
            for (int j = 0; i + j <= order; ++j) {
                double want = 0.0;
                for (int p = 0; p <= i; ++p)
                    for (int q = 0; q <= j; ++q) want += at(a, p, q) * at(b, i - p, j - q);
                CHECK(at(out, i, j) == doctest::Approx(want).epsilon(1e-13));
            }
        }
    }
}

#if SUPERINT_HAVE_AVX2_KERNELS
TEST_CASE("avx2 kernels agree with the scalar reference") {
    if (!k::isa_supported(k::Isa::avx2)) {
        MESSAGE("avx2 not available on this CPU; equivalence test skipped");
        return;
    }
    testing::Rng rng(11);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 13u, 64u, 1023u}) {
        const auto x = random_vector(rng, n);
        auto y0 = random_vector(rng, n);
        auto y1 = y0;
        k::scalar::axpy(0.37, x.data(), y0.data(), n);
        k::avx2::axpy(0.37, x.data(), y1.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y0[i]).epsilon(1e-14));
        const double d0 = k::scalar::dot(x.data(), y0.data(), n);
        const double d1 = k::avx2::dot(x.data(), y0.data(), n);
        CHECK(std::abs(d0 - d1) <= 1e-13 * (1.0 + static_cast<double>(n)));
    }
    for (int order = 0; order <= 12; ++order) {
        const auto a = random_vector(rng, k::tri_size(order));
        const auto b = random_vector(rng, k::tri_size(order));
        std::vector<double> o0(a.size()), o1(a.size());
        k::scalar::tri_convolve(order, a.data(), b.data(), o0.data());
        k::avx2::tri_convolve(order, a.data(), b.data(), o1.data());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(o0[i] - o1[i]) <= 1e-12);
    }
}
#endif

TEST_CASE("dispatch can be pinned to the scalar path") {
    const auto before = k::active_isa();
    k::force_isa(k::Isa::scalar);
    CHECK(k::active_isa() == k::Isa::scalar);
    std::vector<double> x{1, 2, 3}, y{4, 5, 6};
    CHECK(k::dot(x, y) == 32.0);
    k::force_isa(before);
    CHECK_THROWS(k::dot(x, std::vector<double>{1.0}));
}
