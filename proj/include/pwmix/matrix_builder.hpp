#pragma once

#include <iosfwd>
#include <optional>

#include "pwmix/integer_matrix.hpp"
#include "pwmix/map_family.hpp"

namespace pwmix {

/// {0,1} transition matrix of g on the N*m-cell partition: entry (p,q) is 1
/// iff the open fine cell q lies in g(fine cell p). Every row holds m
/// consecutive ones covering one coarse cell.
IntegerMatrix fine_markov(const ComposedMap& g);

/// N-by-N reduced matrix: entry (i,j) sums the fine rows of coarse cell i at
/// the first fine column of coarse cell j. Entries lie in {0,1,2}.
IntegerMatrix reduced_markov(const ComposedMap& g);

/// M * P(sigma): column sigma(k) of the result is column k of M.
IntegerMatrix permute_columns(const IntegerMatrix& m, const IntervalPermutation& sigma);

/// P(sigma) with p_ij = 1 iff j = sigma(i).
IntegerMatrix permutation_matrix(const IntervalPermutation& sigma);

/// Q(sigma): P(sigma) with each entry expanded to an m-by-m identity or zero
/// block.
IntegerMatrix block_permutation_matrix(const IntervalPermutation& sigma, int m);

/// J_N, the anti-diagonal identity.
IntegerMatrix backwards_identity(int n);

/// Symmetric circulant C(m,N): c_ij = 1 iff j = i + delta + r (mod N) for some
/// 0 <= r < m, with delta = (1-m)/2 for odd m and (1-m+N)/2 for even m.
/// Requires 1 <= m <= N and gcd(m,N) = 1.
IntegerMatrix circulant(int m, int n);

/// D = C + C * J_N for the circulant above.
IntegerMatrix folded_circulant(int m, int n);

/// Row-permuted reduced tent matrix used to witness the tent lower bound
/// (odd N = 2s+1). Its nonleading spectrum is {0 (s times)} together with
/// 2 cos(2 pi r / N), 1 <= r <= s, and its graph contains an N-circuit.
IntegerMatrix tent_witness_matrix(int n);

enum class StructuredKind { permutation, block_permutation, backwards_identity, circulant, folded_circulant, tent_witness };

struct StructuredParams {
    int m = 1;
    int n = 1;
    std::optional<IntervalPermutation> sigma;
};

/// Dispatches to the named builders above.
IntegerMatrix structured_matrix(StructuredKind kind, const StructuredParams& params);

/// A^: every entry a_ij replaced by a d-by-d block filled with a_ij.
IntegerMatrix lift(const IntegerMatrix& a, int d);

/// True when, inside every d-by-d block, all d columns coincide.
bool has_column_block_property(const IntegerMatrix& b, int d);

/// Inverse of lift up to scaling: block (i,j) is replaced by the sum of its
/// first column. Rows group as p = (i-1)d + r. Throws StructuralError if the
/// column block property fails.
IntegerMatrix collapse(const IntegerMatrix& b, int d);

/// E = At + At * J_2N where At is the stretch-and-fold reduced matrix on 2N
/// cells. J_2N * E = E = E * J_2N and the upper-left N-by-N quarter of E is
/// the zigzag reduced matrix.
IntegerMatrix doubled_matrix(int m, int n);

/// First line "n=<order>,rowsum=<c>" (rowsum=none if rows differ), then one
/// comma-separated line per row.
void write_matrix_csv(std::ostream& os, const IntegerMatrix& m);

} // namespace pwmix
