#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "pwmix/errors.hpp"
#include "pwmix/map_family.hpp"

using namespace pwmix;
using testing::perm;
using testing::sig;

TEST_CASE("eval_map on canonical maps") {
    const ComposedMap tent(sig("+-"), IntervalPermutation::identity(2));
    CHECK(eval_map(tent, Rational(3, 4)) == Rational(1, 2));

    const ComposedMap zz(sig("+-+"), IntervalPermutation::identity(3));
    CHECK(eval_map(zz, Rational(1, 2)) == Rational(1, 2));

    // f(1/4) = 1/2 opens cell 2, which the swap moves down by 1/2
    const ComposedMap swapped(sig("++"), perm("2,1"));
    CHECK(eval_signature(sig("++"), Rational(1, 4)) == Rational(1, 2));
    CHECK(eval_map(swapped, Rational(1, 4)) == Rational(0));
    CHECK(eval_map(swapped, Rational(1, 8)) == Rational(3, 4));
}

TEST_CASE("eval_map endpoint conventions") {
    CHECK(eval_signature(sig("++"), Rational(1)) == Rational(1));
    CHECK(eval_signature(sig("+-"), Rational(1)) == Rational(0));
    CHECK(eval_signature(sig("+-"), Rational(1, 2)) == Rational(1));
    CHECK(eval_signature(sig("++"), Rational(1, 2)) == Rational(0));
    // x = 1 lies in the last cell for the exchange as well
    CHECK(eval_exchange(perm("3,1,2"), Rational(1)) == Rational(2, 3));
    CHECK(eval_exchange(perm("3,1,2"), Rational(0)) == Rational(2, 3));
}

TEST_CASE("eval_map rejects points outside the interval") {
    const ComposedMap g(sig("+-"), IntervalPermutation::identity(3));
    CHECK_THROWS_AS(eval_map(g, Rational(-1, 5)), DomainError);
    CHECK_THROWS_AS(eval_map(g, Rational(6, 5)), DomainError);
    CHECK_THROWS_AS(eval_map(g, 1.5), DomainError);
}

TEST_CASE("images stay in the unit interval and branches have slope m eps_j") {
    std::mt19937_64 rng(5);
    for (int m = 2; m <= 4; ++m) {
        for (const auto& s : all_signatures(m)) {
            for (int n = m; n <= 6; ++n) {
                const ComposedMap g(s, testing::random_perm(n, rng));
                const std::int64_t den = 7 * n * m;
                for (std::int64_t k = 0; k <= den; ++k) {
                    const Rational y = eval_map(g, Rational(k, den));
                    CHECK((y >= 0 && y <= 1));
                }
                // finite differences inside each branch, away from cell edges
                for (int j = 1; j <= m; ++j) {
                    const Rational left(j - 1, m);
                    const Rational w(1, m);
                    const Rational x1 = left + w / (4 * n);
                    const Rational x2 = left + w / (2 * n);
                    const Rational d = (eval_signature(s, x2) - eval_signature(s, x1)) / (x2 - x1);
                    CHECK(d == Rational(m * s.epsilon(j)));
                }
            }
        }
    }
}

TEST_CASE("double evaluation agrees with exact evaluation") {
    std::mt19937_64 rng(9);
    const ComposedMap g(sig("+--"), testing::random_perm(5, rng));
    for (int k = 1; k < 300; ++k) {
        const Rational x(2 * k + 1, 601);
        const double exact = boost::rational_cast<double>(eval_map(g, x));
        CHECK(eval_map(g, boost::rational_cast<double>(x)) == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("canonical signatures") {
    const auto two = canonical_signatures(2);
    CHECK(two.stretch_fold == sig("++"));
    CHECK(two.zigzag == sig("+-"));
    CHECK(two.inverted_zigzag == sig("-+"));
    CHECK(canonical_signatures(3).zigzag == sig("+-+"));
    CHECK(canonical_signatures(4).zigzag == sig("+-+-"));
    CHECK(canonical_signatures(4).inverted_zigzag == sig("-+-+"));
    CHECK_THROWS_AS(canonical_signatures(1), DomainError);
}

TEST_CASE("symmetry orbits") {
    CHECK(symmetry_orbit(sig("+-")) == std::vector{sig("+-"), sig("-+")});
    CHECK(symmetry_orbit(sig("+++")) == std::vector{sig("+++"), sig("---")});
    CHECK(symmetry_orbit(sig("++-")) == std::vector{sig("++-"), sig("+--"), sig("-++"), sig("--+")});
    CHECK(orbit_representatives(3) == std::vector{sig("+++"), sig("++-"), sig("+-+")});
    std::size_t covered = 0;
    for (const auto& r : orbit_representatives(4)) covered += symmetry_orbit(r).size();
    CHECK(covered == 16);
    CHECK(all_signatures(2) == std::vector{sig("++"), sig("+-"), sig("-+"), sig("--")});
}

TEST_CASE("text formats") {
    CHECK(sig("+-+").str() == "+-+");
    CHECK(perm("2,3,1").str() == "2,3,1");
    CHECK(perm("2,3,1")(1) == 2);
    CHECK(perm("2,3,1").inverse() == perm("3,1,2"));
    CHECK(IntervalPermutation::identity(4).is_identity());
    CHECK(ComposedMap(sig("+-"), perm("2,1,3")).str() == "+-|2,1,3");
    CHECK_THROWS(sig("+x"));
    CHECK_THROWS(sig("+"));
    CHECK_THROWS(perm("1,1,2"));
    CHECK_THROWS(perm("1,4,2"));
    CHECK_THROWS(perm("1,a"));
    CHECK_THROWS(ComposedMap(sig("+-+"), perm("2,1")));
}

TEST_CASE("fine cells land on whole coarse cells") {
    const ComposedMap tent(sig("+-"), IntervalPermutation::identity(3));
    std::vector<int> images;
    for (int p = 1; p <= 6; ++p) images.push_back(coarse_image_of_fine_cell(tent, p));
    CHECK(images == std::vector{1, 2, 3, 3, 2, 1});
    CHECK(orientation_on_fine_cell(tent, 1) == 1);
    CHECK(orientation_on_fine_cell(tent, 4) == -1);
}
