#include "pwmix/charpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace pwmix {

namespace {

// Polynomials below are stored lowest degree first.
using Poly = std::vector<BigRational>;

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly derivative(const Poly& p) {
    Poly d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<int>(k));
    trim(d);
    return d;
}

// Quotient and remainder of a / b, b nonzero.
std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
    trim(a);
    if (a.size() < b.size()) return {Poly{}, a};
    Poly quot(a.size() - b.size() + 1, BigRational(0));
    const BigRational lead = b.back();
    while (a.size() >= b.size() && !a.empty()) {
        const std::size_t shift = a.size() - b.size();
        const BigRational factor = a.back() / lead;
        quot[shift] = factor;
        for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= factor * b[k];
        a.pop_back();
        trim(a);
    }
    return {quot, a};
}

Poly make_monic(Poly p) {
    trim(p);
    if (p.empty()) return p;
    const BigRational lead = p.back();
    for (auto& c : p) c /= lead;
    return p;
}

Poly gcd(Poly a, Poly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a);
}

template <typename T>
std::complex<T> horner(const std::vector<T>& lowest_first, std::complex<T> z) {
    std::complex<T> acc(0);
    for (auto it = lowest_first.rbegin(); it != lowest_first.rend(); ++it) acc = acc * z + *it;
    return acc;
}

} // namespace

std::vector<BigInt> characteristic_polynomial(const IntegerMatrix& m) {
    const int n = m.order();
    auto a = [&m](int i, int j) { return BigInt(m(i, j)); };
    // p holds det(xI - M_r) for the leading r-by-r block, highest degree first
    std::vector<BigInt> p{BigInt(1), -a(0, 0)};
    for (int r = 1; r < n; ++r) {
        // first column of the Toeplitz factor: 1, -a_rr, -R S, -R M S, ...
        std::vector<BigInt> t(static_cast<std::size_t>(r) + 2);
        t[0] = 1;
        t[1] = -a(r, r);
        std::vector<BigInt> w(static_cast<std::size_t>(r));
        for (int i = 0; i < r; ++i) w[static_cast<std::size_t>(i)] = a(i, r);
        for (int k = 0; k < r; ++k) {
            BigInt dot = 0;
            for (int j = 0; j < r; ++j) dot += a(r, j) * w[static_cast<std::size_t>(j)];
            t[static_cast<std::size_t>(k) + 2] = -dot;
            std::vector<BigInt> next(static_cast<std::size_t>(r));
            for (int i = 0; i < r; ++i) {
                BigInt s = 0;
                for (int j = 0; j < r; ++j) s += a(i, j) * w[static_cast<std::size_t>(j)];
                next[static_cast<std::size_t>(i)] = s;
            }
            w = std::move(next);
        }
        std::vector<BigInt> q(static_cast<std::size_t>(r) + 2, BigInt(0));
        for (std::size_t i = 0; i < q.size(); ++i) {
            for (std::size_t j = 0; j <= std::min(i, p.size() - 1); ++j) q[i] += t[i - j] * p[j];
        }
        p = std::move(q);
    }
    return p;
}

std::vector<BigRational> squarefree_part(const std::vector<BigInt>& p) {
    Poly low;
    for (auto it = p.rbegin(); it != p.rend(); ++it) low.emplace_back(*it);
    trim(low);
    if (low.size() <= 1) return {BigRational(1)};
    const Poly g = gcd(low, derivative(low));
    Poly q = make_monic(divmod(low, g).first);
    return {q.rbegin(), q.rend()};
}

std::vector<std::complex<double>> simple_roots(const std::vector<BigRational>& q) {
    const std::size_t degree = q.size() - 1;
    if (degree == 0) return {};
    std::vector<long double> coeffs;  // lowest first, monic
    for (auto it = q.rbegin(); it != q.rend(); ++it) coeffs.push_back(static_cast<long double>(*it / q.front()));
    std::vector<long double> dcoeffs;
    for (std::size_t k = 1; k < coeffs.size(); ++k) dcoeffs.push_back(coeffs[k] * static_cast<long double>(k));

    const auto d = static_cast<Eigen::Index>(degree);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < d; ++i) companion(i, d - 1) = -static_cast<double>(coeffs[static_cast<std::size_t>(i)]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);

    std::vector<std::complex<double>> roots;
    roots.reserve(degree);
    for (Eigen::Index i = 0; i < d; ++i) {
        std::complex<long double> z(es.eigenvalues()(i).real(), es.eigenvalues()(i).imag());
        for (int iter = 0; iter < 60; ++iter) {
            const auto fz = horner(coeffs, z);
            const auto dz = horner(dcoeffs, z);
            if (dz == std::complex<long double>(0)) break;
            const auto step = fz / dz;
            z -= step;
            if (std::abs(step) <= 4 * std::numeric_limits<long double>::epsilon() * std::max<long double>(1, std::abs(z))) {
                break;
            }
        }
        roots.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
    }
    return roots;
}

void refine_eigenvalues(const IntegerMatrix& m, std::vector<std::complex<double>>& approx) {
    const auto roots = simple_roots(squarefree_part(characteristic_polynomial(m)));
    if (roots.empty()) return;
    for (auto& z : approx) {
        auto best = roots.front();
        for (const auto& r : roots) {
            if (std::abs(r - z) < std::abs(best - z)) best = r;
        }
        z = best;
    }
}

bool has_cluster(const std::vector<std::complex<double>>& values, double rel_gap) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            const double scale = std::max({1.0, std::abs(values[i]), std::abs(values[j])});
            if (std::abs(values[i] - values[j]) <= rel_gap * scale) return true;
        }
    }
    return false;
}

} // namespace pwmix
