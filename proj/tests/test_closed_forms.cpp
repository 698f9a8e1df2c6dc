#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "pwmix/closed_forms.hpp"
#include "pwmix/errors.hpp"
#include "pwmix/matrix_builder.hpp"
#include "pwmix/spectral.hpp"

using namespace pwmix;
using testing::sig;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("zigzag and stretch-and-fold formulas") {
    CHECK(zigzag_worst_rate(3, 5) == doctest::Approx(std::sin(3 * kPi / 10) / (3 * std::sin(kPi / 10))));
    CHECK(zigzag_worst_rate(3, 5) == doctest::Approx(0.8726780).epsilon(1e-6));
    CHECK(zigzag_worst_rate(2, 5) == 1.0);
    CHECK(zigzag_worst_rate(4, 5) == doctest::Approx(2 * std::sin(4 * kPi / 10) / (4 * std::sin(2 * kPi / 10))));
    CHECK(sf_worst_rate(2, 3) == doctest::Approx(0.5));
    CHECK(sf_worst_rate(3, 6) == 1.0);
    CHECK(sf_worst_rate(4, 6) == doctest::Approx(2 * std::sin(2 * kPi / 3) / (4 * std::sin(kPi / 3))));
    CHECK_THROWS_AS(sf_worst_rate(3, 2), DomainError);
    CHECK_THROWS_AS(zigzag_worst_rate(1, 4), DomainError);
}

TEST_CASE("formulas stay in (0, 1] and approach 1 slowly") {
    for (int m = 2; m <= 7; ++m) {
        for (int n = m; n <= 60; ++n) {
            const double zz = zigzag_worst_rate(m, n);
            const double sf = sf_worst_rate(m, n);
            CHECK(zz > 0.0);
            CHECK(zz <= 1.0);
            CHECK(sf > 0.0);
            CHECK(sf <= 1.0);
        }
    }
}

TEST_CASE("circulant formula") {
    CHECK(circulant_tau_formula(CirculantKind::C, 2, 5) == doctest::Approx(std::sin(2 * kPi / 5) / std::sin(kPi / 5)));
    CHECK(circulant_tau_formula(CirculantKind::D, 2, 5) == doctest::Approx(3.23607).epsilon(1e-5));
    CHECK(circulant_tau_formula(CirculantKind::C, 1, 1) == 0.0);
    CHECK_THROWS_AS(circulant_tau_formula(CirculantKind::C, 2, 4), PreconditionError);
    CHECK_THROWS_AS(circulant_tau_formula(CirculantKind::D, 5, 3), PreconditionError);
    for (int n = 3; n <= 25; ++n) {
        for (int m = 1; m <= n; ++m) {
            if (std::gcd(m, n) != 1) continue;
            CHECK(tau(circulant(m, n)) == doctest::Approx(std::abs(circulant_tau_formula(CirculantKind::C, m, n))).epsilon(1e-9));
        }
    }
}

TEST_CASE("degeneracy predicate") {
    CHECK(degeneracy_predicate(2, 4, sig("++")));
    CHECK(degeneracy_predicate(2, 3, sig("+-")));
    CHECK(degeneracy_predicate(2, 3, sig("-+")));
    CHECK_FALSE(degeneracy_predicate(2, 3, sig("++")));
    CHECK(degeneracy_predicate(4, 6, sig("+-+-")));
    CHECK_FALSE(degeneracy_predicate(4, 6, sig("++++")));
    CHECK_FALSE(degeneracy_predicate(3, 5, sig("+-+")));
    CHECK(degeneracy_predicate(3, 6, sig("+++")));
    CHECK_THROWS_AS(degeneracy_predicate(3, 5, sig("+-")), DomainError);
    CHECK_THROWS_AS(degeneracy_predicate(3, 2, sig("+-+")), DomainError);
}

TEST_CASE("asymptotic constant") {
    CHECK(asymptotic_constant(3) == Rational(1, 6));
    CHECK(asymptotic_constant(5) == Rational(1, 50));
    CHECK(asymptotic_constant(7) == Rational(1, 196));
    CHECK_THROWS_AS(asymptotic_constant(4), DomainError);
    CHECK_THROWS_AS(asymptotic_constant(1), DomainError);
}

TEST_CASE("tent region") {
    const RegionTest r(5);
    CHECK(r.left == doctest::Approx(-std::pow(std::cos(kPi / 10), 2)));
    CHECK(r.right == doctest::Approx(std::cos(kPi / 5)));
    CHECK(r.slope == doctest::Approx(std::tan(kPi / 5)));
    CHECK_THROWS_AS(RegionTest(4), DomainError);
    CHECK_THROWS_AS(RegionTest(1), DomainError);

    CHECK(tent_region_contains({0.0, 0.0}, 5).inside);
    CHECK(tent_region_contains({r.right, 0.0}, 5).inside);
    CHECK_FALSE(tent_region_contains({0.9, 0.0}, 5).inside);
    CHECK(tent_region_contains({0.9, 0.0}, 5).active == "right");
    CHECK_FALSE(tent_region_contains({-0.99, 0.0}, 5).inside);
    CHECK(tent_region_contains({-0.99, 0.0}, 5).active == "left");
    CHECK_FALSE(tent_region_contains({0.5, 0.9}, 5).inside);
    CHECK(tent_region_contains({0.5, 0.9}, 5).active == "slant");
}

TEST_CASE("region invariants") {
    for (int n = 3; n <= 41; n += 2) {
        const RegionTest r(n);
        CHECK(r.left < 0.0);
        CHECK(r.left > -1.0);
        CHECK(r.right < 1.0);
        CHECK(r.slope > 0.0);
        // the slanted edge meets the right edge inside the unit disc
        const double corner_im = (1.0 - r.right) / r.slope;
        CHECK(std::hypot(r.right, corner_im) <= 1.0 + 1e-12);
        // conjugate symmetry
        for (double re = -1.0; re <= 1.0; re += 0.125) {
            for (double im = 0.0; im <= 1.0; im += 0.125) {
                CHECK(tent_region_contains({re, im}, n).inside == tent_region_contains({re, -im}, n).inside);
            }
        }
    }
}
