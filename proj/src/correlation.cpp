#include "pwmix/correlation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "pwmix/errors.hpp"
#include "pwmix/matrix_builder.hpp"

namespace pwmix {

namespace {

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

StepObservable at_fine_level(const ComposedMap& g, const StepObservable& obs) {
    const int n = g.cells();
    const int fine = n * g.m();
    if (obs.level() == fine) return obs;
    if (obs.level() == n) return obs.refined(g.m());
    throw DomainError(fmt::format("observable on {} cells does not match N = {} or N*m = {}", obs.level(), n, fine));
}

Eigen::VectorXd as_vector(const StepObservable& obs) {
    return Eigen::Map<const Eigen::VectorXd>(obs.values().data(), static_cast<Eigen::Index>(obs.values().size()));
}

double mean_of(const Eigen::VectorXd& v) {
    CompensatedSum s;
    for (Eigen::Index i = 0; i < v.size(); ++i) s.add(v(i));
    return s.value() / static_cast<double>(v.size());
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct ChunkSums {
    double prod = 0, prod_sq = 0, phi = 0, phi_sq = 0, psi = 0, psi_sq = 0;
    std::uint64_t count = 0;
};

ChunkSums sample_chunk(const ComposedMap& g, const StepObservable& phi, const StepObservable& psi, int n,
                       std::uint64_t seed, std::uint64_t chunk, std::uint64_t count) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
    std::mt19937_64 rng(seq);
    ChunkSums s;
    s.count = count;
    for (std::uint64_t k = 0; k < count; ++k) {
        const double x = uniform01(rng);
        double y = x;
        for (int step = 0; step < n; ++step) y = eval_map(g, y);
        const double prod = phi(y) * psi(x);
        const double a = phi(uniform01(rng));
        const double b = psi(uniform01(rng));
        s.prod += prod;
        s.prod_sq += prod * prod;
        s.phi += a;
        s.phi_sq += a * a;
        s.psi += b;
        s.psi_sq += b * b;
    }
    return s;
}

} // namespace

StepObservable::StepObservable(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw DomainError("step observable needs at least one cell");
}

StepObservable StepObservable::constant(int level, double value) {
    if (level < 1) throw DomainError(fmt::format("observable level must be positive, got {}", level));
    return StepObservable(std::vector<double>(static_cast<std::size_t>(level), value));
}

StepObservable StepObservable::indicator(int level, int cell) {
    if (cell < 1 || cell > level) throw DomainError(fmt::format("cell {} outside 1..{}", cell, level));
    std::vector<double> v(static_cast<std::size_t>(level), 0.0);
    v[static_cast<std::size_t>(cell - 1)] = 1.0;
    return StepObservable(std::move(v));
}

double StepObservable::operator()(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError(fmt::format("observable evaluated at {} outside [0,1]", x));
    const int k = level();
    const int cell = std::clamp(static_cast<int>(std::floor(x * k)), 0, k - 1);
    return values_[static_cast<std::size_t>(cell)];
}

StepObservable StepObservable::refined(int factor) const {
    if (factor < 1) throw DomainError(fmt::format("refinement factor must be positive, got {}", factor));
    std::vector<double> out;
    out.reserve(values_.size() * static_cast<std::size_t>(factor));
    for (double v : values_) out.insert(out.end(), static_cast<std::size_t>(factor), v);
    return StepObservable(std::move(out));
}

double StepObservable::mean() const {
    CompensatedSum s;
    for (double v : values_) s.add(v);
    return s.value() / static_cast<double>(values_.size());
}

std::string StepObservable::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double v : values_) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int b = 0; b < 8; ++b) {
            h ^= (bits >> (8 * b)) & 0xffu;
            h *= 0x100000001b3ULL;
        }
    }
    return fmt::format("{:016x}", h);
}

Eigen::MatrixXd transfer_matrix(const ComposedMap& g) { return to_dense(fine_markov(g)) / static_cast<double>(g.m()); }

StepObservable transfer(const ComposedMap& g, const StepObservable& phi) {
    const Eigen::VectorXd v = transfer_matrix(g).transpose() * as_vector(at_fine_level(g, phi));
    return StepObservable(std::vector<double>(v.data(), v.data() + v.size()));
}

std::vector<double> correlation_sequence(const ComposedMap& g, const StepObservable& phi, const StepObservable& psi,
                                         int n_max) {
    if (n_max < 0) throw DomainError(fmt::format("correlation lag must be nonnegative, got {}", n_max));
    const Eigen::MatrixXd p = transfer_matrix(g);
    Eigen::VectorXd v = as_vector(at_fine_level(g, phi));
    const Eigen::VectorXd w = as_vector(at_fine_level(g, psi));
    const double centre = mean_of(v) * mean_of(w);
    const auto cells = static_cast<double>(v.size());
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) v = p * v;
        CompensatedSum s;
        for (Eigen::Index i = 0; i < v.size(); ++i) s.add(w(i) * v(i));
        out.push_back(s.value() / cells - centre);
    }
    return out;
}

double correlation(const ComposedMap& g, const StepObservable& phi, const StepObservable& psi, int n) {
    return correlation_sequence(g, phi, psi, n).back();
}

DecayFit fit_decay(const std::vector<double>& c) {
    DecayFit fit;
    int first = -1;
    for (int n = 0; n < static_cast<int>(c.size()); ++n) {
        if (std::abs(c[static_cast<std::size_t>(n)]) > kCorrelationFloor) {
            first = n;
            break;
        }
    }
    if (first < 0) return fit;
    int last = first;
    while (last + 1 < static_cast<int>(c.size()) && std::abs(c[static_cast<std::size_t>(last) + 1]) > kCorrelationFloor) {
        ++last;
    }
    if (last == first) return fit;
    for (int n = first; n < last; ++n) {
        fit.rates.push_back(std::abs(c[static_cast<std::size_t>(n) + 1]) / std::abs(c[static_cast<std::size_t>(n)]));
    }
    std::vector<double> sorted = fit.rates;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    fit.fitted_rate = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    fit.valid_range = std::pair{first, last};
    return fit;
}

DecayFit decay_rate(const ComposedMap& g, const StepObservable& phi, const StepObservable& psi, int n_max) {
    if (n_max < 4) throw DomainError(fmt::format("decay fit needs n_max >= 4, got {}", n_max));
    return fit_decay(correlation_sequence(g, phi, psi, n_max));
}

EigenObservable subleading_observable(const ComposedMap& g) {
    const Eigen::MatrixXd p = transfer_matrix(g);
    const auto n = p.rows();
    // restriction to the zero-sum subspace in the basis e_i - e_n
    const Eigen::MatrixXd restricted =
        p.topLeftCorner(n - 1, n - 1) - p.topRightCorner(n - 1, 1).replicate(1, n - 1);
    Eigen::EigenSolver<Eigen::MatrixXd> es(restricted, true);
    const auto& values = es.eigenvalues();
    Eigen::Index pick = 0;
    for (Eigen::Index i = 1; i < values.size(); ++i) {
        const double a = std::abs(values(i));
        const double b = std::abs(values(pick));
        if (a > b + 1e-12 || (std::abs(a - b) <= 1e-12 && std::abs(values(i).imag()) < std::abs(values(pick).imag()))) {
            pick = i;
        }
    }
    const Eigen::VectorXcd y = es.eigenvectors().col(pick);
    std::vector<double> x(static_cast<std::size_t>(n));
    double tail = 0.0;
    for (Eigen::Index i = 0; i < n - 1; ++i) {
        x[static_cast<std::size_t>(i)] = y(i).real();
        tail -= y(i).real();
    }
    x[static_cast<std::size_t>(n - 1)] = tail;
    return {values(pick), StepObservable(std::move(x))};
}

MonteCarloEstimate monte_carlo_correlation(const ComposedMap& g, const StepObservable& phi, const StepObservable& psi,
                                           int n, std::uint64_t samples, std::uint64_t seed, Execution execution,
                                           int workers) {
    if (samples < 1) throw DomainError("Monte Carlo needs at least one sample");
    if (n < 0) throw DomainError(fmt::format("correlation lag must be nonnegative, got {}", n));
    const StepObservable fphi = at_fine_level(g, phi);
    const StepObservable fpsi = at_fine_level(g, psi);
    const std::uint64_t chunks = (samples + kMonteCarloChunk - 1) / kMonteCarloChunk;
    std::vector<ChunkSums> partial(static_cast<std::size_t>(chunks));
    auto run = [&](std::uint64_t c) {
        const std::uint64_t begin = c * kMonteCarloChunk;
        const std::uint64_t count = std::min(kMonteCarloChunk, samples - begin);
        partial[static_cast<std::size_t>(c)] = sample_chunk(g, fphi, fpsi, n, seed, c, count);
    };
    if (execution == Execution::serial) {
        for (std::uint64_t c = 0; c < chunks; ++c) run(c);
    } else {
        const int threads = resolve_workers(workers);
        const auto count = static_cast<std::int64_t>(chunks);
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
        for (std::int64_t c = 0; c < count; ++c) run(static_cast<std::uint64_t>(c));
    }
    ChunkSums total;
    for (const auto& s : partial) {
        total.prod += s.prod;
        total.prod_sq += s.prod_sq;
        total.phi += s.phi;
        total.phi_sq += s.phi_sq;
        total.psi += s.psi;
        total.psi_sq += s.psi_sq;
        total.count += s.count;
    }
    const auto k = static_cast<double>(total.count);
    const double mean_prod = total.prod / k;
    const double mean_phi = total.phi / k;
    const double mean_psi = total.psi / k;
    auto variance = [k](double sum, double sum_sq) { return std::max(0.0, sum_sq / k - (sum / k) * (sum / k)); };
    const double var_prod = variance(total.prod, total.prod_sq);
    const double var_phi = variance(total.phi, total.phi_sq);
    const double var_psi = variance(total.psi, total.psi_sq);
    MonteCarloEstimate est;
    est.estimate = mean_prod - mean_phi * mean_psi;
    est.standard_error = std::sqrt((var_prod + mean_psi * mean_psi * var_phi + mean_phi * mean_phi * var_psi) / k);
    est.samples = total.count;
    return est;
}

void write_decay_csv(std::ostream& os, const ComposedMap& g, const StepObservable& phi, const StepObservable& psi,
                     const std::vector<DecayRow>& rows) {
    os << fmt::format("# g={},phi={},psi={}\n", g.str(), phi.hash(), psi.hash());
    os << "n,C_exact,C_mc,mc_se\n";
    for (const auto& r : rows) os << fmt::format("{},{:.12g},{:.12g},{:.12g}\n", r.n, r.exact, r.mc, r.mc_se);
}

} // namespace pwmix
