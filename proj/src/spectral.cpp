#include "pwmix/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "pwmix/charpoly.hpp"
#include "pwmix/errors.hpp"
#include "pwmix/matrix_builder.hpp"
#include "pwmix/structure.hpp"

namespace pwmix {

namespace {

// Orthonormal basis of the zero-sum subspace (Helmert contrasts), as columns.
Eigen::MatrixXd zero_sum_basis(int n) {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n - 1);
    for (int k = 1; k < n; ++k) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
        for (int i = 0; i < k; ++i) q(i, k - 1) = scale;
        q(k, k - 1) = -k * scale;
    }
    return q;
}

std::vector<Complex> all_eigenvalues(const Eigen::MatrixXd& m, bool symmetric) {
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(m.rows()));
    if (symmetric) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.emplace_back(es.eigenvalues()(i), 0.0);
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
    }
    return out;
}

// Common row and column sum within a relative tolerance.
std::optional<double> common_line_sum(const Eigen::MatrixXd& m) {
    const Eigen::VectorXd rows = m.rowwise().sum();
    const Eigen::VectorXd cols = m.colwise().sum().transpose();
    const double c = rows(0);
    const double tol = 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()) * static_cast<double>(m.rows());
    if ((rows.array() - c).abs().maxCoeff() > tol || (cols.array() - c).abs().maxCoeff() > tol) {
        return std::nullopt;
    }
    return c;
}

double max_modulus(const std::vector<Complex>& values) {
    double best = 0.0;
    for (const auto& v : values) best = std::max(best, std::abs(v));
    return best;
}

void require_square(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw DomainError(fmt::format("spectrum needs a nonempty square matrix, got {}x{}", m.rows(), m.cols()));
    }
    if (m.rows() > IntegerMatrix::kMaxOrder) {
        throw CapacityError(fmt::format("matrix order {} exceeds the limit {}", m.rows(), IntegerMatrix::kMaxOrder));
    }
}

bool is_symmetric(const Eigen::MatrixXd& m) { return m == m.transpose(); }

// Dense solvers lose accuracy at defective eigenvalues (a Jordan block of size
// k perturbs by eps^(1/k)); nearby values trigger exact refinement.
constexpr double kClusterGap = 1e-3;

IntegerMatrix restrict_to_zero_sum(const IntegerMatrix& m) {
    const int n = m.order();
    IntegerMatrix r(n - 1);
    for (int i = 0; i < n - 1; ++i) {
        for (int j = 0; j < n - 1; ++j) r(i, j) = m(i, j) - m(i, n - 1);
    }
    return r;
}

std::vector<Complex> integer_eigenvalues(const IntegerMatrix& m, bool symmetric) {
    auto ev = all_eigenvalues(to_dense(m), symmetric);
    if (!symmetric && has_cluster(ev, kClusterGap)) refine_eigenvalues(m, ev);
    return ev;
}

std::vector<Complex> integer_nonleading(const IntegerMatrix& m) {
    if (m.order() <= 1) return {};
    if (m.is_symmetric()) return nonleading_eigenvalues(to_dense(m), true);
    return integer_eigenvalues(restrict_to_zero_sum(m), false);
}

} // namespace

void sort_spectrum(std::vector<Complex>& values) {
    std::sort(values.begin(), values.end(), [](const Complex& a, const Complex& b) {
        const double ma = std::abs(a);
        const double mb = std::abs(b);
        if (ma != mb) return ma > mb;
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
}

Eigen::MatrixXd to_dense(const IntegerMatrix& m) {
    Eigen::MatrixXd out(m.order(), m.order());
    for (int i = 0; i < m.order(); ++i) {
        for (int j = 0; j < m.order(); ++j) out(i, j) = static_cast<double>(m(i, j));
    }
    return out;
}

std::vector<Complex> nonleading_eigenvalues(const Eigen::MatrixXd& m, bool symmetric) {
    const auto n = m.rows();
    if (n <= 1) return {};
    if (symmetric) {
        const Eigen::MatrixXd q = zero_sum_basis(static_cast<int>(n));
        const Eigen::MatrixXd restricted = q.transpose() * m * q;
        return all_eigenvalues(0.5 * (restricted + restricted.transpose()), true);
    }
    // Basis e_i - e_n of the zero-sum subspace: coordinates are the first n-1
    // entries, so the restriction is M_ij - M_in.
    const Eigen::MatrixXd restricted =
        m.topLeftCorner(n - 1, n - 1) - m.topRightCorner(n - 1, 1).replicate(1, n - 1);
    return all_eigenvalues(restricted, false);
}

Spectrum spectrum(const Eigen::MatrixXd& m) {
    require_square(m);
    Spectrum s;
    s.order = static_cast<int>(m.rows());
    const bool sym = is_symmetric(m);
    s.eigenvalues = all_eigenvalues(m, sym);
    sort_spectrum(s.eigenvalues);
    if (auto c = common_line_sum(m)) {
        s.leading = *c;
        s.nonleading = nonleading_eigenvalues(m, sym);
        sort_spectrum(s.nonleading);
        s.tau = max_modulus(s.nonleading);
    }
    return s;
}

Spectrum spectrum(const IntegerMatrix& m) {
    Spectrum s;
    s.order = m.order();
    s.eigenvalues = integer_eigenvalues(m, m.is_symmetric());
    sort_spectrum(s.eigenvalues);
    if (const auto c = m.line_sum()) {
        s.leading = static_cast<double>(*c);
        s.nonleading = integer_nonleading(m);
        sort_spectrum(s.nonleading);
        s.tau = max_modulus(s.nonleading);
    }
    return s;
}

double tau(const Eigen::MatrixXd& m) {
    require_square(m);
    if (!common_line_sum(m)) throw DomainError("tau needs constant row and column sums");
    return max_modulus(nonleading_eigenvalues(m, is_symmetric(m)));
}

double tau(const IntegerMatrix& m) {
    if (!m.line_sum()) throw DomainError("tau needs constant row and column sums");
    return max_modulus(integer_nonleading(m));
}

PermutedTau::PermutedTau(const IntegerMatrix& base)
    : n_(base.order()),
      base_(to_dense(base)),
      restricted_(std::max(n_ - 1, 1), std::max(n_ - 1, 1)),
      inverse_(static_cast<std::size_t>(n_)),
      solver_(std::max(n_ - 1, 1)) {
    if (!base.line_sum()) throw DomainError("tau needs constant row and column sums");
}

double PermutedTau::operator()(std::span<const int> images0) {
    if (n_ <= 1) return 0.0;
    for (int k = 0; k < n_; ++k) inverse_[static_cast<std::size_t>(images0[static_cast<std::size_t>(k)])] = k;
    // (M P)_ij = M_{i, sigma^{-1}(j)}
    const int last = inverse_[static_cast<std::size_t>(n_ - 1)];
    for (int j = 0; j < n_ - 1; ++j) {
        const int src = inverse_[static_cast<std::size_t>(j)];
        for (int i = 0; i < n_ - 1; ++i) restricted_(i, j) = base_(i, src) - base_(i, last);
    }
    solver_.compute(restricted_, false);
    const auto& raw = solver_.eigenvalues();
    values_.assign(raw.data(), raw.data() + raw.size());
    if (has_cluster(values_, kClusterGap)) {
        IntegerMatrix exact(n_ - 1);
        for (int i = 0; i < n_ - 1; ++i) {
            for (int j = 0; j < n_ - 1; ++j) exact(i, j) = static_cast<std::int64_t>(restricted_(i, j));
        }
        refine_eigenvalues(exact, values_);
    }
    return max_modulus(values_);
}

double mixing_rate(const ComposedMap& g) {
    const double rate = std::max(1.0, tau(reduced_markov(g))) / g.m();
    if (rate > 1.0 - 1e-9 && !connectivity(fine_markov(g)).primitive) return 1.0;
    return rate;
}

void write_spectrum_csv(std::ostream& os, const Spectrum& s, const std::optional<double>& row_sum) {
    os << "order=" << s.order << ",rowsum=" << (row_sum ? fmt::format("{:.12g}", *row_sum) : std::string("none"))
       << '\n';
    os << "re,im\n";
    for (const auto& v : s.eigenvalues) os << fmt::format("{:.12g},{:.12g}\n", v.real(), v.imag());
}

} // namespace pwmix
