#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pwmix/integer_matrix.hpp"
#include "pwmix/map_family.hpp"

namespace pwmix {

using Complex = std::complex<double>;

/// Eigenvalues of a square matrix. When every row and column sums to the same
/// constant c, the spectrum is split into the leading eigenvalue c (eigenvector
/// of all ones) and the order-1 nonleading eigenvalues, i.e. the spectrum on
/// the zero-sum subspace. tau is the largest nonleading modulus (0 for order 1).
struct Spectrum {
    int order = 0;
    std::vector<Complex> eigenvalues;
    std::optional<double> leading;
    std::vector<Complex> nonleading;
    double tau = 0.0;

    bool has_split() const { return leading.has_value(); }
};

/// Sorts by descending modulus, then descending real part, then descending
/// imaginary part.
void sort_spectrum(std::vector<Complex>& values);

Spectrum spectrum(const IntegerMatrix& m);
Spectrum spectrum(const Eigen::MatrixXd& m);

/// Nonleading eigenvalues only. The zero-sum subspace is invariant under any
/// matrix with constant column sums; the restriction is solved directly so
/// the leading eigenvalue never enters the computation. Symmetric inputs use
/// an orthonormal basis and a symmetric solver.
std::vector<Complex> nonleading_eigenvalues(const Eigen::MatrixXd& m, bool symmetric);

/// Modulus of the subleading eigenvalue. Throws DomainError if the row and
/// column sums are not one common constant.
double tau(const IntegerMatrix& m);
double tau(const Eigen::MatrixXd& m);

/// Reusable workspace for repeated tau evaluations of M * P(sigma) with a
/// fixed M. Not thread-safe; give each worker its own instance.
class PermutedTau {
public:
    explicit PermutedTau(const IntegerMatrix& base);

    /// tau(M * P(sigma)) where sigma is given by zero-based images.
    double operator()(std::span<const int> images0);

private:
    int n_;
    Eigen::MatrixXd base_;
    Eigen::MatrixXd restricted_;
    std::vector<int> inverse_;
    std::vector<Complex> values_;
    Eigen::EigenSolver<Eigen::MatrixXd> solver_;
};

/// Mixing rate of g: max(1, tau(A(g,N))) / m.
double mixing_rate(const ComposedMap& g);

Eigen::MatrixXd to_dense(const IntegerMatrix& m);

/// First line "order=<n>,rowsum=<c>", then "re,im", then one eigenvalue per
/// row in sort_spectrum order, 12 significant digits.
void write_spectrum_csv(std::ostream& os, const Spectrum& s, const std::optional<double>& row_sum);

} // namespace pwmix
