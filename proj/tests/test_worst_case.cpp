#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "pwmix/closed_forms.hpp"
#include "pwmix/errors.hpp"
#include "pwmix/matrix_builder.hpp"
#include "pwmix/spectral.hpp"
#include "pwmix/worst_case.hpp"

using namespace pwmix;
using testing::perm;
using testing::sig;

namespace {

const IntegerMatrix kTentA{{1, 1, 0}, {0, 0, 2}, {1, 1, 0}};

SearchOptions serial() { return {Execution::serial, 1}; }

} // namespace

TEST_CASE("tperm search examples") {
    const SearchResult r = tperm_search(kTentA, Strategy::exhaustive());
    CHECK(r.value == doctest::Approx(2.0));
    CHECK(r.argmax == perm("1,3,2"));
    CHECK(r.evaluated == 6);
    CHECK_FALSE(r.mixing_only);

    const SearchResult s = tperm_search(circulant(2, 3), Strategy::symmetric_shortcut());
    CHECK(s.value == doctest::Approx(1.0));
    CHECK(s.argmax.is_identity());
    CHECK(s.evaluated == 1);

    const SearchResult z = tperm_search(kTentA, Strategy::sampled(0, 5));
    CHECK(z.argmax.is_identity());
    CHECK(z.evaluated == 1);
    CHECK(z.value == doctest::Approx(1.0));
}

TEST_CASE("worst mixing rate examples") {
    const SearchResult tent = worst_mixing_rate(sig("+-"), 5, RateMode::mixing_only, Strategy::exhaustive());
    CHECK(tent.value == doctest::Approx(std::cos(std::numbers::pi / 5)).epsilon(1e-10));
    CHECK(tent.mixing_only);
    CHECK(worst_mixing_rate(sig("+-+"), 5, RateMode::all, Strategy::exhaustive()).value ==
          doctest::Approx(0.8726780).epsilon(1e-6));
    CHECK(worst_mixing_rate(sig("++"), 3, RateMode::all, Strategy::exhaustive()).value == doctest::Approx(0.5));
    // tent with N = 3 admits a non-mixing sigma
    CHECK(worst_mixing_rate(sig("+-"), 3, RateMode::all, Strategy::exhaustive()).value == 1.0);
}

TEST_CASE("worst rate agrees with the closed forms away from N = m") {
    for (int m = 2; m <= 4; ++m) {
        const auto c = canonical_signatures(m);
        for (int n = m + 1; n <= 6; ++n) {
            const double sf = worst_mixing_rate(c.stretch_fold, n, RateMode::all, Strategy::exhaustive()).value;
            const double zz = worst_mixing_rate(c.zigzag, n, RateMode::all, Strategy::exhaustive()).value;
            CHECK(sf == doctest::Approx(sf_worst_rate(m, n)).epsilon(1e-9));
            CHECK(zz == doctest::Approx(zigzag_worst_rate(m, n)).epsilon(1e-9));
        }
    }
}

TEST_CASE("gram bound") {
    CHECK(gram_bound(kTentA) == doctest::Approx(2.0));
    CHECK(gram_bound(circulant(2, 3)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(gram_bound(IntegerMatrix{{1, 0}, {1, 1}}), PreconditionError);
    std::mt19937_64 rng(3);
    for (int n = 3; n <= 6; ++n) {
        const IntegerMatrix a = reduced_markov(ComposedMap(sig("+-+"), testing::random_perm(n, rng)));
        CHECK(tperm_search(a, Strategy::exhaustive()).value <= gram_bound(a) + 1e-9);
    }
}

TEST_CASE("search errors") {
    CHECK_THROWS_AS(tperm_search(IntegerMatrix::identity(10), Strategy::exhaustive()), CapacityError);
    CHECK_THROWS_AS(worst_mixing_rate(sig("+-"), 10, RateMode::all, Strategy::exhaustive()), CapacityError);
    CHECK_THROWS_AS(non_mixing_witness(sig("+-"), 10), CapacityError);
    CHECK_THROWS_AS(non_mixing_witness(sig("+-+"), 2), DomainError);
    CHECK_THROWS_AS(tperm_search(kTentA, Strategy::symmetric_shortcut()), PreconditionError);
    CHECK_THROWS_AS(worst_mixing_rate(sig("+-"), 3, RateMode::mixing_only, Strategy::symmetric_shortcut()),
                    PreconditionError);
    CHECK_THROWS_AS(tperm_search(IntegerMatrix{{1, 0}, {1, 1}}, Strategy::exhaustive()), PreconditionError);
}

TEST_CASE("tperm is invariant under column permutations") {
    std::mt19937_64 rng(5);
    for (int n = 3; n <= 6; ++n) {
        const IntegerMatrix a = reduced_markov(ComposedMap(sig("++-"), testing::random_perm(n, rng)));
        const double base = tperm_search(a, Strategy::exhaustive(), serial()).value;
        const IntegerMatrix b = permute_columns(a, testing::random_perm(n, rng));
        CHECK(tperm_search(b, Strategy::exhaustive(), serial()).value == doctest::Approx(base).epsilon(1e-10));
    }
}

TEST_CASE("serial and parallel searches are bit-identical") {
    const IntegerMatrix a = reduced_markov(ComposedMap(sig("+-+"), IntervalPermutation::identity(6)));
    const auto ref = scan_all_permutations(a, sig("+-+"), Execution::serial, 1);
    for (int w = 1; w <= 4; ++w) {
        const auto par = scan_all_permutations(a, sig("+-+"), Execution::parallel, w);
        CHECK(par.tau == ref.tau);
        CHECK(par.mixing == ref.mixing);
        const SearchResult r = worst_mixing_rate(sig("+-+"), 6, RateMode::mixing_only, Strategy::exhaustive(),
                                                 {Execution::parallel, w});
        const SearchResult s = worst_mixing_rate(sig("+-+"), 6, RateMode::mixing_only, Strategy::exhaustive(), serial());
        CHECK(r.value == s.value);
        CHECK(r.argmax == s.argmax);
    }
}

TEST_CASE("worst rate is constant on symmetry orbits") {
    for (int m = 2; m <= 3; ++m) {
        for (const auto& rep : orbit_representatives(m)) {
            for (int n = m; n <= 6; ++n) {
                const double base = worst_mixing_rate(rep, n, RateMode::all, Strategy::exhaustive(), serial()).value;
                for (const auto& s : symmetry_orbit(rep)) {
                    CHECK(worst_mixing_rate(s, n, RateMode::all, Strategy::exhaustive(), serial()).value ==
                          doctest::Approx(base).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("sampled search") {
    const IntegerMatrix a = reduced_markov(ComposedMap(sig("+-"), IntervalPermutation::identity(7)));
    const SearchResult x = tperm_search(a, Strategy::sampled(200, 9));
    const SearchResult y = tperm_search(a, Strategy::sampled(200, 9));
    CHECK(x.value == y.value);
    CHECK(x.argmax == y.argmax);
    CHECK(x.evaluated == 201);
    CHECK(x.value <= tperm_search(a, Strategy::exhaustive()).value + 1e-12);
    CHECK(x.strategy.str() == "sampled(200,9)");
    CHECK(default_strategy(7).kind == Strategy::Kind::exhaustive);
    CHECK(default_strategy(8).str() == "sampled(10000,1)");
}

TEST_CASE("exhaustive search counts every permutation") {
    for (int n = 2; n <= 7; ++n) {
        const IntegerMatrix a = reduced_markov(ComposedMap(sig("++"), IntervalPermutation::identity(n)));
        CHECK(tperm_search(a, Strategy::exhaustive()).evaluated == factorial(n));
    }
}

TEST_CASE("tie selection") {
    const std::vector<double> scores{1.0, 3.0, 3.0 + 1e-14, 2.0};
    CHECK(select_best(scores, {}) == std::optional<std::size_t>(1));
    CHECK(tied_with_best(scores, {}) == std::vector<std::size_t>{1, 2});
    const std::vector<std::uint8_t> mask{1, 0, 0, 1};
    CHECK(select_best(scores, mask) == std::optional<std::size_t>(3));
    const std::vector<std::uint8_t> none{0, 0, 0, 0};
    CHECK_FALSE(select_best(scores, none).has_value());
    CHECK(unrank_permutation(3, 0) == std::vector<int>{0, 1, 2});
    CHECK(unrank_permutation(3, 5) == std::vector<int>{2, 1, 0});
}

TEST_CASE("non-mixing witness") {
    CHECK(non_mixing_witness(sig("+-"), 3) == perm("1,3,2"));
    CHECK_FALSE(non_mixing_witness(sig("+-+"), 5).has_value());
    CHECK(non_mixing_witness(sig("++"), 4).has_value());
}

TEST_CASE("survey rows") {
    std::ostringstream os;
    write_survey_header(os);
    const SurveyRow row = survey_point(sig("+-"), 3, RateMode::mixing_only, Strategy::exhaustive());
    write_survey_row(os, row);
    std::istringstream in(os.str());
    std::string header, line;
    std::getline(in, header);
    std::getline(in, line);
    CHECK(header == "m,N,signature,mode,strategy,value,argmax,evaluated,wall_ms");
    CHECK(line.rfind("2,3,+-,mixing_only,\"exhaustive\",0.5,\"1,2,3\",6,", 0) == 0);
}
