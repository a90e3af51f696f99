#include <doctest.h>

#include <cmath>

#include "superint/error.hpp"
#include "superint/jet.hpp"
#include "test_support.hpp"

using namespace superint;

TEST_CASE("coordinate jets and bilinear product") {
    const Point2 p{1.0, 2.0};
    const Jet2 x = Jet2::variable(p, 2, 0);
    const Jet2 y = Jet2::variable(p, 2, 1);
    const Jet2 f = x * y;
    CHECK(f.coeff(0, 0) == 2.0);
    CHECK(f.coeff(1, 0) == 2.0);
    CHECK(f.coeff(0, 1) == 1.0);
    CHECK(f.coeff(1, 1) == 1.0);
    CHECK(f.coeff(2, 0) == 0.0);
    CHECK(f.coeff(0, 2) == 0.0);
    CHECK(f.coeffs().size() == 6);
}

TEST_CASE("elementary functions match their Taylor series") {
    const Point2 o{0.0, 0.0};
    const Jet2 s = sin(Jet2::variable(o, 3, 0));
    CHECK(s.coeff(0, 0) == 0.0);
    CHECK(s.coeff(1, 0) == doctest::Approx(1.0));
    CHECK(s.coeff(2, 0) == doctest::Approx(0.0));
    CHECK(s.coeff(3, 0) == doctest::Approx(-1.0 / 6.0));

    const Jet2 e = exp(Jet2::variable(o, 5, 1));
    for (int j = 0; j <= 5; ++j) CHECK(e.coeff(0, j) == doctest::Approx(1.0 / factorial(j)));

    const Point2 q{0.3, -0.7};
    const Jet2 x = Jet2::variable(q, 6, 0);
    const Jet2 lhs = sin(x) * sin(x) + cos(x) * cos(x);
    CHECK(lhs.coeff(0, 0) == doctest::Approx(1.0));
    for (int i = 1; i <= 6; ++i) CHECK(std::abs(lhs.coeff(i, 0)) < 1e-14);

    const Jet2 r = Jet2::variable(Point2{2.0, 0.0}, 6, 0);
    const Jet2 sq = sqrt(r) * sqrt(r);
    CHECK(sq.coeff(0, 0) == doctest::Approx(2.0));
    CHECK(sq.coeff(1, 0) == doctest::Approx(1.0));
    for (int i = 2; i <= 6; ++i) CHECK(std::abs(sq.coeff(i, 0)) < 1e-14);
    const Jet2 lg = log(exp(r));
    for (int i = 2; i <= 6; ++i) CHECK(std::abs(lg.coeff(i, 0)) < 1e-13);
}

TEST_CASE("division and integer powers invert each other") {
    const Point2 p{-1.5, 0.4};
    const Jet2 x = Jet2::variable(p, 7, 0);
    const Jet2 y = Jet2::variable(p, 7, 1);
    const Jet2 g = x * x + 3.0 * y + 1.0;
    const Jet2 one = g / g;
    CHECK(one.coeff(0, 0) == doctest::Approx(1.0));
    for (std::size_t k = 1; k < one.coeffs().size(); ++k) CHECK(std::abs(one.coeffs()[k]) < 1e-12);
    const Jet2 cube = ipow(x, 3);  // negative base allowed for integer powers
    CHECK(cube.partial(3, 0) == doctest::Approx(6.0));
    CHECK(ipow(x, -2).value() == doctest::Approx(1.0 / 2.25));
}

TEST_CASE("atan2 jets agree with finite differences") {
    testing::Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const double u = testing::uniform(rng, -2.0, 2.0);
        const double v = testing::uniform(rng, -2.0, 2.0);
        if (std::hypot(u, v) < 0.3) continue;
        const Point2 p{u, v};
        const Jet2 th = atan2(Jet2::variable(p, 3, 1), Jet2::variable(p, 3, 0));
        CHECK(th.value() == doctest::Approx(std::atan2(v, u)));
        auto f = [](double a, double b) { return std::atan2(b, a); };
        for (int i = 0; i <= 2; ++i)
            for (int j = 0; i + j <= 2; ++j) {
                if (i + j == 0) continue;
                const double fd = testing::fd_partial(f, u, v, i, j, 1e-3);
                CHECK(std::abs(th.partial(i, j) - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
            }
    }
}

TEST_CASE("jet errors") {
    const Point2 p{-1.0, 0.0};
    const Jet2 x = Jet2::variable(p, 2, 0);
    CHECK_THROWS_AS(pow(x, 0.5), DomainError);
    CHECK_THROWS_AS(sqrt(x), DomainError);
    CHECK_THROWS_AS(log(x), DomainError);
    CHECK_THROWS_AS(reciprocal(x + 1.0), DivisionByZero);
    CHECK_THROWS_AS(x + Jet2::variable(p, 3, 0), InvalidArgument);
    CHECK_THROWS_AS(x.derivative(2, 1), OrderOverflow);
    CHECK_THROWS_AS(Jet2(p, kJetHardLimit + 1), OrderOverflow);
}

TEST_CASE("bivariate composition reproduces substitution") {
    // f(a, b) = a^2 b composed with a = u + v, b = u v
    const Point2 p{0.4, -1.1};
    const int order = 5;
    const Jet2 u = Jet2::variable(p, order, 0);
    const Jet2 v = Jet2::variable(p, order, 1);
    const Jet2 g0 = u + v;
    const Jet2 g1 = u * v;
    const Point2 q{g0.value(), g1.value()};
    const Jet2 a = Jet2::variable(q, order, 0);
    const Jet2 b = Jet2::variable(q, order, 1);
    const Jet2 composed = compose(a * a * b, g0, g1);
    const Jet2 direct = g0 * g0 * g1;
    for (std::size_t k = 0; k < direct.coeffs().size(); ++k)
        CHECK(composed.coeffs()[k] == doctest::Approx(direct.coeffs()[k]).epsilon(1e-12));
}
