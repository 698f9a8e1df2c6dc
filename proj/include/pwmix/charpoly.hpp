#pragma once

#include <complex>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pwmix/integer_matrix.hpp"

namespace pwmix {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Coefficients of det(xI - M), highest degree first (leading 1). Exact,
/// division-free (Berkowitz).
std::vector<BigInt> characteristic_polynomial(const IntegerMatrix& m);

/// p / gcd(p, p'), monic, highest degree first: same roots as p, all simple.
std::vector<BigRational> squarefree_part(const std::vector<BigInt>& p);

/// Distinct roots of the squarefree polynomial, refined by Newton iteration
/// from companion-matrix starting values.
std::vector<std::complex<double>> simple_roots(const std::vector<BigRational>& q);

/// Replaces each approximate eigenvalue of the integer matrix m by the nearest
/// exact-polynomial root. Repairs the loss of accuracy of dense solvers at
/// defective (Jordan) eigenvalues.
void refine_eigenvalues(const IntegerMatrix& m, std::vector<std::complex<double>>& approx);

/// True if two entries lie within rel_gap * max(1, |z|) of each other.
bool has_cluster(const std::vector<std::complex<double>>& values, double rel_gap);

} // namespace pwmix
