#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "oracles.hpp"
#include "pwmix/charpoly.hpp"
#include "pwmix/correlation.hpp"
#include "pwmix/errors.hpp"
#include "pwmix/matrix_builder.hpp"
#include "pwmix/spectral.hpp"

using namespace pwmix;
using testing::perm;
using testing::sig;

namespace {

StepObservable random_observable(int level, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(level));
    for (auto& x : v) x = u(rng);
    return StepObservable(std::move(v));
}

// Midpoint rule on cells of width 1/(N m^(n+1)); g^n is affine on each such
// cell and lands inside one fine cell, so the rule is exact.
double quadrature_correlation(const ComposedMap& g, const StepObservable& phi, const StepObservable& psi, int n) {
    long cells = g.cells();
    for (int k = 0; k <= n; ++k) cells *= g.m();
    long double sum = 0, sphi = 0, spsi = 0;
    for (long c = 0; c < cells; ++c) {
        const double x = (static_cast<double>(c) + 0.5) / static_cast<double>(cells);
        double y = x;
        for (int k = 0; k < n; ++k) y = eval_map(g, y);
        sum += phi(y) * psi(x);
        sphi += phi(x);
        spsi += psi(x);
    }
    const auto w = static_cast<long double>(cells);
    return static_cast<double>(sum / w - (sphi / w) * (spsi / w));
}

// psi^T P^n phi / (N m) - means, with P taken from the point-evaluation oracle.
double oracle_correlation(const ComposedMap& g, const std::vector<double>& phi, const std::vector<double>& psi, int n) {
    const IntegerMatrix b = oracle::fine_matrix(g);
    const int k = b.order();
    std::vector<long double> v(phi.begin(), phi.end());
    for (int step = 0; step < n; ++step) {
        std::vector<long double> next(static_cast<std::size_t>(k), 0);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) next[static_cast<std::size_t>(i)] += b(i, j) * v[static_cast<std::size_t>(j)];
        for (auto& x : next) x /= g.m();
        v = std::move(next);
    }
    long double s = 0, mphi = 0, mpsi = 0;
    for (int i = 0; i < k; ++i) {
        s += psi[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        mphi += phi[static_cast<std::size_t>(i)];
        mpsi += psi[static_cast<std::size_t>(i)];
    }
    return static_cast<double>(s / k - (mphi / k) * (mpsi / k));
}

} // namespace

TEST_CASE("step observables") {
    const StepObservable ind = StepObservable::indicator(4, 2);
    CHECK(ind(0.0) == 0.0);
    CHECK(ind(0.25) == 1.0);
    CHECK(ind(0.49) == 1.0);
    CHECK(ind(0.5) == 0.0);
    CHECK(ind.mean() == doctest::Approx(0.25));
    CHECK(StepObservable::indicator(4, 4)(1.0) == 1.0);
    CHECK(StepObservable::constant(3, 2.5).mean() == doctest::Approx(2.5));
    CHECK(ind.refined(3).level() == 12);
    CHECK(ind.refined(3).values()[4] == 1.0);
    CHECK(ind.refined(3).mean() == doctest::Approx(ind.mean()));
    CHECK(ind.hash().size() == 16);
    CHECK(ind.hash() == StepObservable::indicator(4, 2).hash());
    CHECK(ind.hash() != StepObservable::indicator(4, 3).hash());
    CHECK_THROWS_AS(StepObservable::indicator(4, 5), DomainError);
    CHECK_THROWS_AS(StepObservable::indicator(4, 0), DomainError);
    CHECK_THROWS_AS(StepObservable(std::vector<double>{}), DomainError);
    CHECK_THROWS_AS(ind.refined(0), DomainError);
    CHECK_THROWS_AS(ind(1.5), DomainError);
}

TEST_CASE("transfer matrix is doubly stochastic") {
    std::mt19937_64 rng(1);
    for (int m = 2; m <= 4; ++m) {
        for (const auto& f : all_signatures(m)) {
            const ComposedMap g(f, testing::random_perm(m + 2, rng));
            const Eigen::MatrixXd p = transfer_matrix(g);
            CHECK(p.rows() == g.cells() * m);
            CHECK((p.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-14);
            CHECK((p.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-14);
            CHECK((p * m - to_dense(fine_markov(g))).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
}

TEST_CASE("transfer preserves means") {
    std::mt19937_64 rng(2);
    const ComposedMap g(sig("+-+"), perm("2,5,1,4,3"));
    StepObservable phi = random_observable(15, rng);
    const double mean = phi.mean();
    for (int k = 0; k < 10; ++k) {
        phi = transfer(g, phi);
        CHECK(phi.mean() == doctest::Approx(mean).epsilon(1e-12));
    }
    CHECK(transfer(g, StepObservable::indicator(5, 1)).level() == 15);
    CHECK_THROWS_AS(transfer(g, StepObservable::indicator(4, 1)), DomainError);
}

TEST_CASE("exact correlations match quadrature and the matrix oracle") {
    std::mt19937_64 rng(3);
    for (int m = 2; m <= 3; ++m) {
        for (const auto& f : all_signatures(m)) {
            for (int n = m; n <= 5; ++n) {
                const ComposedMap g(f, testing::random_perm(n, rng));
                const StepObservable phi = random_observable(n * m, rng);
                const StepObservable psi = random_observable(n, rng);
                for (int lag = 0; lag <= 2; ++lag) {
                    CHECK(correlation(g, phi, psi, lag) ==
                          doctest::Approx(quadrature_correlation(g, phi, psi, lag)).epsilon(1e-10).scale(1.0));
                }
                const auto seq = correlation_sequence(g, phi, psi, 12);
                CHECK(seq.size() == 13);
                const auto psi_fine = psi.refined(m).values();
                for (int lag = 0; lag <= 12; ++lag) {
                    CHECK(seq[static_cast<std::size_t>(lag)] ==
                          doctest::Approx(oracle_correlation(g, phi.values(), psi_fine, lag)).epsilon(1e-10).scale(1.0));
                }
            }
        }
    }
}

TEST_CASE("refinement and constants") {
    std::mt19937_64 rng(4);
    const ComposedMap g(sig("++-"), perm("3,1,4,2"));
    const StepObservable phi = random_observable(4, rng);
    const StepObservable psi = random_observable(4, rng);
    for (int lag = 0; lag <= 6; ++lag) {
        CHECK(correlation(g, phi, psi, lag) ==
              doctest::Approx(correlation(g, phi.refined(3), psi.refined(3), lag)).epsilon(1e-13).scale(1.0));
        CHECK(std::abs(correlation(g, StepObservable::constant(4, 3.0), psi, lag)) < 1e-14);
    }
    CHECK(correlation(g, phi, psi, 0) == doctest::Approx(quadrature_correlation(g, phi, psi, 0)));
    CHECK_THROWS_AS(correlation(g, phi, psi, -1), DomainError);
}

TEST_CASE("correlation examples") {
    const ComposedMap doubling(sig("++"), IntervalPermutation::identity(2));
    const StepObservable half = StepObservable::indicator(2, 1);
    CHECK(correlation(doubling, half, half, 0) == doctest::Approx(0.25));
    for (int n = 1; n <= 10; ++n) CHECK(std::abs(correlation(doubling, half, half, n)) < 1e-15);

    const ComposedMap tent(sig("+-"), IntervalPermutation::identity(3));
    const StepObservable first = StepObservable::indicator(3, 1);
    const DecayFit fit = decay_rate(tent, first, first, 30);
    CHECK(fit.fitted_rate == doctest::Approx(0.5).epsilon(1e-9));
    REQUIRE(fit.valid_range);
    CHECK(fit.valid_range->first == 0);
}

TEST_CASE("decay fit") {
    const DecayFit geometric = fit_decay({1.0, 0.5, 0.25, 0.125, 0.0625});
    CHECK(geometric.fitted_rate == doctest::Approx(0.5));
    CHECK(geometric.rates.size() == 4);
    const DecayFit cut = fit_decay({1.0, -0.3, 0.09, 0.0, 0.5});
    CHECK(cut.valid_range == std::optional<std::pair<int, int>>({0, 2}));
    CHECK(cut.fitted_rate == doctest::Approx(0.3));
    const DecayFit late = fit_decay({0.0, 1.0, 2.0});
    CHECK(late.valid_range == std::optional<std::pair<int, int>>({1, 2}));
    CHECK(late.fitted_rate == doctest::Approx(2.0));
    const DecayFit empty = fit_decay({0.0, 1e-14, 0.0});
    CHECK_FALSE(empty.valid_range);
    CHECK(empty.rates.empty());
    CHECK_THROWS_AS(decay_rate(ComposedMap(sig("+-"), IntervalPermutation::identity(3)), StepObservable::indicator(3, 1),
                               StepObservable::indicator(3, 1), 3),
                    DomainError);
}

TEST_CASE("eigen-observables decay geometrically") {
    for (const auto& [s, p] : std::vector<std::pair<const char*, const char*>>{
             {"+-", "1,2,3,4,5"}, {"+-+", "2,4,1,5,3"}, {"+++", "3,1,4,2"}, {"++-", "5,3,1,4,2"}}) {
        const ComposedMap g(sig(s), perm(p));
        const EigenObservable e = subleading_observable(g);
        CHECK(std::abs(e.eigenvalue) == doctest::Approx(tau(reduced_markov(g)) / g.m()).epsilon(1e-6));
        CHECK(std::abs(e.observable.mean()) < 1e-12);
        if (std::abs(e.eigenvalue.imag()) > 1e-12) continue;
        const double lambda = e.eigenvalue.real();
        const auto c = correlation_sequence(g, e.observable, e.observable, 15);
        for (int n = 0; n <= 15; ++n) {
            CHECK(c[static_cast<std::size_t>(n)] == doctest::Approx(std::pow(lambda, n) * c[0]).epsilon(1e-8).scale(1.0));
        }
    }
}

TEST_CASE("correlations decay at the mixing rate") {
    // K is calibrated over the window Nm <= n <= 2Nm, after the nilpotent part
    // of the transfer matrix has died out; only diagonalisable cases count.
    std::mt19937_64 rng(5);
    int tested = 0;
    for (int m = 2; m <= 3; ++m) {
        for (const auto& f : all_signatures(m)) {
            for (int n = m; n * m <= 15; ++n) {
                const ComposedMap g(f, testing::random_perm(n, rng));
                const IntegerMatrix a = reduced_markov(g);
                const Spectrum sp = spectrum(a);
                std::vector<Complex> nonzero;
                for (const auto& v : sp.nonleading)
                    if (std::abs(v) > 1e-6) nonzero.push_back(v);
                if (nonzero.empty() || has_cluster(nonzero, 1e-6)) continue;
                const double r = sp.tau / m;
                if (r >= 1.0 - 1e-9) continue;
                const StepObservable phi = random_observable(n * m, rng);
                const StepObservable psi = random_observable(n * m, rng);
                const int window = n * m;
                const auto c = correlation_sequence(g, phi, psi, 60);
                double k = 0.0;
                for (int t = window; t <= 2 * window; ++t) k = std::max(k, std::abs(c[static_cast<std::size_t>(t)]) / std::pow(r, t));
                for (int t = 2 * window + 1; t <= 60; ++t) {
                    CHECK(std::abs(c[static_cast<std::size_t>(t)]) <= 2.0 * k * std::pow(1.01 * r, t) + 1e-14);
                }
                ++tested;
            }
        }
    }
    CHECK(tested >= 10);
}

TEST_CASE("Monte Carlo correlation") {
    const ComposedMap g(sig("+-+"), perm("2,4,1,5,3"));
    std::mt19937_64 rng(6);
    const StepObservable phi = random_observable(5, rng);
    const StepObservable psi = random_observable(5, rng);
    for (int lag : {0, 1, 3}) {
        const MonteCarloEstimate e = monte_carlo_correlation(g, phi, psi, lag, 100000, 11);
        CHECK(e.samples == 100000);
        CHECK(e.standard_error > 0.0);
        CHECK(std::abs(e.estimate - correlation(g, phi, psi, lag)) <= 5.0 * e.standard_error);
    }
    const MonteCarloEstimate ref = monte_carlo_correlation(g, phi, psi, 2, 50000, 3, Execution::serial);
    for (int w = 1; w <= 4; ++w) {
        const MonteCarloEstimate par = monte_carlo_correlation(g, phi, psi, 2, 50000, 3, Execution::parallel, w);
        CHECK(par.estimate == ref.estimate);
        CHECK(par.standard_error == ref.standard_error);
    }
    CHECK(monte_carlo_correlation(g, phi, psi, 2, 50000, 4).estimate != ref.estimate);
    CHECK(monte_carlo_correlation(g, phi, psi, 2, 1, 3).samples == 1);
    CHECK_THROWS_AS(monte_carlo_correlation(g, phi, psi, 2, 0, 3), DomainError);
    CHECK_THROWS_AS(monte_carlo_correlation(g, phi, psi, -1, 10, 3), DomainError);
}

TEST_CASE("decay CSV") {
    const ComposedMap g(sig("+-"), perm("1,2,3"));
    const StepObservable phi = StepObservable::indicator(3, 1);
    std::ostringstream os;
    write_decay_csv(os, g, phi, phi, {{0, 0.25, 0.26, 0.01}, {1, -0.125, -0.12, 0.01}});
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "# g=+-|1,2,3,phi=" + phi.hash() + ",psi=" + phi.hash());
    std::getline(in, line);
    CHECK(line == "n,C_exact,C_mc,mc_se");
    std::getline(in, line);
    CHECK(line == "0,0.25,0.26,0.01");
    std::getline(in, line);
    CHECK(line == "1,-0.125,-0.12,0.01");
}
