#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pwmix/map_family.hpp"
#include "pwmix/search_kernels.hpp"
#include "pwmix/spectral.hpp"

namespace pwmix {

/// A function constant on each open cell of the uniform partition into
/// `level` cells; for a map g on N cells the level is N or N*m.
class StepObservable {
public:
    explicit StepObservable(std::vector<double> values);

    static StepObservable constant(int level, double value);
    /// Indicator of the one-based cell `cell`.
    static StepObservable indicator(int level, int cell);

    int level() const { return static_cast<int>(values_.size()); }
    const std::vector<double>& values() const { return values_; }

    /// Value at x in [0,1] with the half-open cell convention (x = 1 in the last cell).
    double operator()(double x) const;

    /// The same function on a partition `factor` times finer.
    StepObservable refined(int factor) const;

    double mean() const;

    /// FNV-1a over the IEEE bytes of the values, as 16 hex digits.
    std::string hash() const;

private:
    std::vector<double> values_;
};

/// m^{-1} B(g,N), the doubly stochastic transition matrix on N*m cells.
Eigen::MatrixXd transfer_matrix(const ComposedMap& g);

/// Transfer operator on step observables of level N*m: (L phi) = P^T phi.
StepObservable transfer(const ComposedMap& g, const StepObservable& phi);

/// C(n) = integral phi(g^n x) psi(x) dx - mean(phi) mean(psi), exact up to
/// rounding: psi^T P^n phi / (N m) - mean(phi) mean(psi).
double correlation(const ComposedMap& g, const StepObservable& phi, const StepObservable& psi, int n);

/// C(0..n_max).
std::vector<double> correlation_sequence(const ComposedMap& g, const StepObservable& phi, const StepObservable& psi,
                                         int n_max);

struct DecayFit {
    std::vector<double> rates;  // |C(n+1)| / |C(n)| over the valid range
    double fitted_rate = 0.0;   // median of rates
    std::optional<std::pair<int, int>> valid_range;
};

inline constexpr double kCorrelationFloor = 1e-13;

/// Median of successive ratios |C(n+1)|/|C(n)| over the leading run of n
/// with |C(n)| > 1e-13. n_max >= 4.
DecayFit decay_rate(const ComposedMap& g, const StepObservable& phi, const StepObservable& psi, int n_max);
DecayFit fit_decay(const std::vector<double>& c);

struct EigenObservable {
    Complex eigenvalue;
    StepObservable observable;  // real part of the right eigenvector on N*m cells
};

/// Right eigenvector of m^{-1} B(g,N) for the nonleading eigenvalue of
/// largest modulus (real ones preferred among equal moduli).
EigenObservable subleading_observable(const ComposedMap& g);

struct MonteCarloEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;
};

inline constexpr std::uint64_t kMonteCarloChunk = 8192;

/// Sampled C(n): mean of phi(g^n x) psi(x) over uniform x, minus the product
/// of sample means of phi and psi taken over fresh uniform draws. Samples are
/// split into fixed chunks of 8192, chunk c drawing from mt19937_64 seeded by
/// seed_seq{seed, c}; partial sums are combined in chunk order, so the result
/// is independent of the worker count.
MonteCarloEstimate monte_carlo_correlation(const ComposedMap& g, const StepObservable& phi,
                                           const StepObservable& psi, int n, std::uint64_t samples,
                                           std::uint64_t seed, Execution execution = Execution::parallel,
                                           int workers = 0);

struct DecayRow {
    int n = 0;
    double exact = 0.0;
    double mc = 0.0;
    double mc_se = 0.0;
};

/// Header line "# g=<sig|perm>,phi=<hash>,psi=<hash>", then columns
/// n,C_exact,C_mc,mc_se.
void write_decay_csv(std::ostream& os, const ComposedMap& g, const StepObservable& phi, const StepObservable& psi,
                     const std::vector<DecayRow>& rows);

} // namespace pwmix
