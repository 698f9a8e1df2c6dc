#include "pwmix/closed_forms.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "pwmix/errors.hpp"

namespace pwmix {

namespace {

constexpr double kPi = std::numbers::pi;

void require_cells(int m, int n) {
    if (m < 2 || n < m) throw DomainError(fmt::format("closed forms need N >= m >= 2, got m = {}, N = {}", m, n));
}

} // namespace

double zigzag_worst_rate(int m, int n) {
    require_cells(m, n);
    const int d = std::gcd(m, 2 * n);
    if (d == m) return 1.0;
    return d * std::sin(m * kPi / (2.0 * n)) / (m * std::sin(d * kPi / (2.0 * n)));
}

double sf_worst_rate(int m, int n) {
    require_cells(m, n);
    const int d = std::gcd(m, n);
    if (d == m) return 1.0;
    return d * std::sin(m * kPi / n) / (m * std::sin(d * kPi / n));
}

double circulant_tau_formula(CirculantKind kind, int m, int n) {
    if (m < 1 || m > n || std::gcd(m, n) != 1) {
        throw PreconditionError(fmt::format("circulant formula needs 1 <= m <= N and gcd(m,N) = 1, got m = {}, N = {}", m, n));
    }
    if (n == 1) return 0.0;
    const double c = std::sin(m * kPi / n) / std::sin(kPi / n);
    return kind == CirculantKind::C ? c : 2.0 * c;
}

bool degeneracy_predicate(int m, int n, const SlopeSignature& f) {
    require_cells(m, n);
    if (f.m() != m) throw DomainError(fmt::format("signature has {} branches, expected {}", f.m(), m));
    if (n % m == 0) return true;
    if ((2 * n) % m != 0) return false;
    const auto canon = canonical_signatures(m);
    return f == canon.zigzag || f == canon.inverted_zigzag;
}

Rational asymptotic_constant(int m) {
    if (m < 3 || m % 2 == 0) throw DomainError(fmt::format("asymptotic constant needs odd m >= 3, got {}", m));
    const std::int64_t mm = m;
    return Rational(12, mm * mm * mm * mm - mm * mm);
}

RegionTest::RegionTest(int odd_n) : n(odd_n) {
    if (odd_n < 3 || odd_n % 2 == 0) throw DomainError(fmt::format("tent region needs odd N >= 3, got {}", odd_n));
    const double half = std::cos(kPi / (2.0 * odd_n));
    left = -half * half;
    right = std::cos(kPi / odd_n);
    slope = std::tan(kPi / odd_n);
}

RegionVerdict tent_region_contains(std::complex<double> lambda, int n, double slack) {
    const RegionTest region(n);
    RegionVerdict v;
    v.left_slack = lambda.real() - region.left;
    v.right_slack = region.right - lambda.real();
    v.slant_slack = 1.0 - lambda.real() - std::abs(lambda.imag()) * region.slope;
    v.inside = v.left_slack >= -slack && v.right_slack >= -slack && v.slant_slack >= -slack;
    v.active = "left";
    double least = v.left_slack;
    if (v.right_slack < least) {
        least = v.right_slack;
        v.active = "right";
    }
    if (v.slant_slack < least) v.active = "slant";
    return v;
}

} // namespace pwmix
