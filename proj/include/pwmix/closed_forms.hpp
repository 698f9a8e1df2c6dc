#pragma once

#include <complex>
#include <string>

#include "pwmix/map_family.hpp"

namespace pwmix {

/// Worst mixing rate of the m-fold zigzag map over S_N:
/// d sin(m pi / 2N) / (m sin(d pi / 2N)) with d = gcd(m, 2N).
double zigzag_worst_rate(int m, int n);

/// Worst mixing rate of the stretch-and-fold map over S_N:
/// d sin(m pi / N) / (m sin(d pi / N)) with d = gcd(m, N).
double sf_worst_rate(int m, int n);

enum class CirculantKind { C, D };

/// tau(C(m,N)) = sin(m pi/N) / sin(pi/N); tau(D) is twice that.
/// Requires gcd(m,N) = 1 and 1 <= m <= N.
double circulant_tau_formula(CirculantKind kind, int m, int n);

/// True iff every sigma o f mixes at rate 1 for some sigma, which happens
/// exactly when m | N, or m | 2N and f is the zigzag or inverted zigzag map.
bool degeneracy_predicate(int m, int n, const SlopeSignature& f);

/// 12 / (m^4 - m^2) for odd m >= 3.
Rational asymptotic_constant(int m);

/// Convex region containing every nonleading eigenvalue (modulus > 1/2) of
/// the halved reduced matrix of a topologically mixing sigma o f_tent, odd N.
struct RegionTest {
    int n = 0;
    double left = 0.0;   // -cos^2(pi / 2N)
    double right = 0.0;  // cos(pi / N)
    double slope = 0.0;  // tan(pi / N)

    explicit RegionTest(int odd_n);
};

struct RegionVerdict {
    bool inside = false;
    double left_slack = 0.0;   // Re(lambda) - left
    double right_slack = 0.0;  // right - Re(lambda)
    double slant_slack = 0.0;  // 1 - Re(lambda) - |Im(lambda)| slope
    /// "left", "right" or "slant": the constraint with the least slack.
    std::string active;
};

RegionVerdict tent_region_contains(std::complex<double> lambda, int n, double slack = 1e-9);

} // namespace pwmix
