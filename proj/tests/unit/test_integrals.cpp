#include <doctest.h>

#include <cmath>
#include <numbers>

#include "superint/error.hpp"
#include "superint/integrals.hpp"
#include "leading_support.hpp"
#include "observable_support.hpp"

using namespace superint;
using testing::Rng;
using testing::direct_a;
using testing::direct_b;
using testing::random_a;
using testing::random_b;

TEST_CASE("slot counts") {
    for (int N = 1; N <= 8; ++N) {
        CHECK(a_slots(N).size() == static_cast<std::size_t>((N + 1) * (N + 2) / 2));
        std::size_t b = 0;
        for (const auto& [s, k] : b_slots(N)) b += s > 0 ? 2 : 1;
        CHECK(b == static_cast<std::size_t>((N + 1) * (N + 2) / 2));
    }
}

TEST_CASE("build_leading_cartesian examples") {
    LeadingTermSpec lz;
    lz.N = 1;
    lz.set(0, 0, 1.0);
    const auto l = leading_coefficients(lz);
    CHECK(l.size() == 2);
    CHECK(l.at({0, 1}) == Poly2::monomial(1, 0));
    CHECK(l.at({1, 0}) == Poly2::monomial(0, 1, -1.0));

    LeadingTermSpec lz2;
    lz2.N = 2;
    lz2.set(0, 0, 1.0);
    const auto l2 = leading_coefficients(lz2);
    CHECK(l2.at({0, 2}) == Poly2::monomial(2, 0));
    CHECK(l2.at({1, 1}) == Poly2::monomial(1, 1, -2.0));
    CHECK(l2.at({2, 0}) == Poly2::monomial(0, 2));

    Rng rng(1);
    for (int N = 1; N <= 6; ++N) {
        const auto spec = random_a(rng, N);
        const auto y = build_leading_cartesian(spec);
        for (int k = 0; k < 100; ++k) {
            const PhasePoint p = testing::random_phase_point(rng);
            CHECK(testing::rel_err(y.evaluate(p), direct_a(spec, p), 1.0) < 1e-12);
        }
    }
}

TEST_CASE("a_to_b examples") {
    LeadingTermSpec px;
    px.N = 1;
    px.set(1, 0, 1.0);
    const auto b = a_to_b(px);
    CHECK(b.B1.size() == 1);
    CHECK(b.B2.empty());
    CHECK(b.b1(1, 0) == doctest::Approx(1.0).epsilon(1e-14));

    LeadingTermSpec cos2;
    cos2.N = 2;
    cos2.set(2, 0, 1.0);
    cos2.set(0, 2, -1.0);
    const auto b2 = a_to_b(cos2);
    CHECK(b2.b1(2, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b2.max_abs() == doctest::Approx(1.0));
    Rng rng(2);
    for (int k = 0; k < 50; ++k) {
        const PhasePoint p = testing::random_phase_point(rng);
        CHECK(direct_b(b2, p) == doctest::Approx(p.px * p.px - p.py * p.py).epsilon(1e-12));
    }
}

TEST_CASE("b_to_a singlet expansion is binomial") {
    for (int k = 1; k <= 3; ++k) {
        PolarLeadingSpec spec;
        spec.N = 2 * k;
        spec.set_b1(0, k, 1.0);
        const auto a = b_to_a(spec);
        for (const auto& [m, n] : a_slots(spec.N)) {
            double want = 0.0;
            if (m + n == 2 * k && m % 2 == 0 && n % 2 == 0) want = binomial(k, m / 2);
            CHECK(a.a(m, n) == doctest::Approx(want).epsilon(1e-12));
        }
    }
    PolarLeadingSpec s;
    s.N = 1;
    s.set_b2(1, 0, 1.0);
    const auto a = b_to_a(s);
    CHECK(a.a(0, 1) == doctest::Approx(1.0));
    CHECK(a.a(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("basis roundtrip and evaluation equality") {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const int N = 1 + trial % 6;
        const auto a = random_a(rng, N);
        const auto back = b_to_a(a_to_b(a));
        for (const auto& [m, n] : a_slots(N)) CHECK(std::abs(back.a(m, n) - a.a(m, n)) < 1e-11);

        const auto b = random_b(rng, N);
        const auto ya = build_leading_cartesian(b_to_a(b));
        for (int k = 0; k < 20; ++k) {
            const PhasePoint p = testing::random_phase_point(rng);
            CHECK(testing::rel_err(ya.evaluate(p), direct_b(b, p), 1.0) < 1e-10);
        }
    }
}

TEST_CASE("a_to_b is linear") {
    Rng rng(6);
    const auto s1 = random_a(rng, 5);
    const auto s2 = random_a(rng, 5);
    const double lambda = -1.75;
    LeadingTermSpec mix;
    mix.N = 5;
    for (const auto& [m, n] : a_slots(5)) mix.set(m, n, lambda * s1.a(m, n) + s2.a(m, n));
    const auto b1 = a_to_b(s1), b2 = a_to_b(s2), bm = a_to_b(mix);
    for (const auto& [s, k] : b_slots(5)) {
        CHECK(std::abs(bm.b1(s, k) - lambda * b1.b1(s, k) - b2.b1(s, k)) < 1e-13);
        CHECK(std::abs(bm.b2(s, k) - lambda * b1.b2(s, k) - b2.b2(s, k)) < 1e-13);
    }
}

TEST_CASE("B pairs rotate as doublets") {
    Rng rng(9);
    for (int N = 1; N <= 6; ++N) {
        const auto a = random_a(rng, N);
        const double phi = testing::uniform(rng, -3.0, 3.0);
        const auto b = a_to_b(a);
        const auto br = a_to_b(rotate(a, phi));
        for (const auto& [s, k] : b_slots(N)) {
            const double c = std::cos(s * phi), sn = std::sin(s * phi);
            CHECK(std::abs(br.b1(s, k) - (c * b.b1(s, k) - sn * b.b2(s, k))) < 1e-10);
            CHECK(std::abs(br.b2(s, k) - (sn * b.b1(s, k) + c * b.b2(s, k))) < 1e-10);
        }
        // Rotation semantics: Y'(z) = Y(R(-phi) z).
        const auto yr = build_leading_cartesian(rotate(a, phi));
        const PhasePoint p = testing::random_phase_point(rng);
        const double c = std::cos(phi), s = std::sin(phi);
        const PhasePoint q{c * p.x + s * p.y, -s * p.x + c * p.y, c * p.px + s * p.py, -s * p.px + c * p.py};
        CHECK(testing::rel_err(yr.evaluate(p), direct_a(a, q), 1.0) < 1e-10);
    }
}

TEST_CASE("split_I_II") {
    PolarLeadingSpec s;
    s.N = 4;
    s.set_b1(2, 0, 1.0);
    s.set_b1(4, 0, 2.0);
    const auto [one, two] = split_I_II(s);
    CHECK(two.b1(2, 0) == 1.0);
    CHECK(one.b1(4, 0) == 2.0);
    CHECK(one.b1(2, 0) == 0.0);
    CHECK(two.b1(4, 0) == 0.0);

    PolarLeadingSpec t;
    t.N = 3;
    t.set_b1(1, 1, 1.0);
    t.set_b2(3, 0, 1.0);
    t.set_b1(1, 0, 1.0);
    const auto [i3, ii3] = split_I_II(t);
    CHECK(i3.B1.size() == 1);
    CHECK(i3.B2.size() == 1);
    CHECK(ii3.b1(1, 0) == 1.0);

    Rng rng(10);
    const auto r = random_b(rng, 6);
    const auto [ri, rii] = split_I_II(r);
    for (const auto& [sk, v] : ri.B1) CHECK(rii.B1.count(sk) == 0);
    CHECK(ri.B1.size() + rii.B1.size() == r.B1.size());
    CHECK(ri.B2.size() + rii.B2.size() == r.B2.size());
}

TEST_CASE("classify") {
    PolarLeadingSpec s;
    s.N = 4;
    s.set_b1(2, 0, 1.0);
    auto c = classify(s);
    CHECK(c.by_weight.size() == 1);
    CHECK(c.by_weight.count(2) == 1);
    CHECK(c.exotic);

    PolarLeadingSpec t;
    t.N = 4;
    t.set_b1(4, 0, 1.0);
    c = classify(t);
    CHECK(c.by_weight.count(4) == 1);
    CHECK_FALSE(c.exotic);

    Rng rng(12);
    const auto r = random_b(rng, 5);
    c = classify(r);
    std::size_t total = 0;
    for (const auto& [w, list] : c.by_weight) {
        CHECK(w >= 0);
        CHECK(w <= 5);
        total += list.size();
    }
    CHECK(total == b_slots(5).size());
    CHECK(c.by_weight.size() == 6);

    PolarLeadingSpec empty;
    empty.N = 3;
    CHECK_FALSE(classify(empty).exotic);
}

TEST_CASE("singlet_reduce") {
    PolarLeadingSpec p2;
    p2.N = 2;
    p2.set_b1(0, 1, 1.0);
    auto red = singlet_reduce(p2);
    CHECK(red.corrections.at({0, 1}) == 2.0);
    CHECK(red.reduced.is_zero());

    PolarLeadingSpec l4;
    l4.N = 4;
    l4.set_b1(0, 0, 1.0);
    CHECK(singlet_reduce(l4).corrections.at({2, 0}) == 1.0);

    PolarLeadingSpec m;
    m.N = 4;
    m.set_b1(0, 1, 3.0);
    m.set_b1(2, 1, 0.5);
    red = singlet_reduce(m);
    CHECK(red.corrections.at({1, 1}) == 6.0);
    CHECK(red.reduced.b1(2, 1) == 0.5);
    const auto diff = build_leading_polar(m) - trivial_leading(4, red.corrections);
    const auto want = build_leading_polar(red.reduced);
    Rng rng(14);
    for (int k = 0; k < 50; ++k) {
        const PhasePoint p = testing::random_phase_point(rng);
        CHECK(testing::rel_err(diff.evaluate(p), want.evaluate(p), 1.0) < 1e-12);
    }

    PolarLeadingSpec odd;
    odd.N = 3;
    odd.set_b1(0, 1, 1.0);
    CHECK_THROWS_AS(singlet_reduce(odd), InvalidArgument);
}

TEST_CASE("validation and json") {
    PolarLeadingSpec bad;
    bad.N = 2;
    bad.B2[{0, 1}] = 1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    LeadingTermSpec big;
    big.N = 9;
    CHECK_THROWS_AS(big.validate(), InvalidArgument);
    CHECK_NOTHROW(big.validate(10));

    Rng rng(15);
    const auto a = random_a(rng, 4);
    CHECK(leading_spec_from_json(nlohmann::json::parse(to_json(a).dump())) == a);
    const auto b = random_b(rng, 4);
    CHECK(polar_spec_from_json(nlohmann::json::parse(to_json(b).dump())) == b);
    CHECK_THROWS_AS(polar_spec_from_json(nlohmann::json{{"N", 2}, {"B1", {{0, 0, 1.0}}}, {"C", 1}}),
                    InvalidArgument);
    CHECK_THROWS_AS(leading_spec_from_json(nlohmann::json{{"N", 2}, {"A", {{3, 0, 1.0}}}}), InvalidArgument);
}
