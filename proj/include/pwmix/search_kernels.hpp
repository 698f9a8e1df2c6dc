#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pwmix/integer_matrix.hpp"
#include "pwmix/map_family.hpp"

namespace pwmix {

// Kernels that score permutations sigma by tau(M * P(sigma)) and, optionally,
// by whether sigma o f is topologically mixing. Each kernel has a serial
// reference and an OpenMP version; both write score k into slot k, so their
// outputs are bit-identical whatever the worker count.

enum class Execution { serial, parallel };

inline constexpr int kMaxExhaustiveCells = 9;

/// n! for n <= 20.
std::uint64_t factorial(int n);

/// Zero-based images of the permutation with lexicographic rank `rank`.
std::vector<int> unrank_permutation(int n, std::uint64_t rank);

struct PermutationScores {
    std::vector<double> tau;
    /// 1 where sigma o f is topologically mixing; empty unless requested.
    std::vector<std::uint8_t> mixing;
};

/// Scores all n! permutations in lexicographic order. `mixing_signature`
/// switches on the exact primitivity test of B(f,N) Q(sigma).
PermutationScores scan_all_permutations(const IntegerMatrix& m,
                                        const std::optional<SlopeSignature>& mixing_signature,
                                        Execution execution, int workers = 0);

/// Scores an explicit list of permutations (zero-based images), in order.
PermutationScores scan_permutation_list(const IntegerMatrix& m, std::span<const std::vector<int>> perms,
                                        const std::optional<SlopeSignature>& mixing_signature,
                                        Execution execution, int workers = 0);

/// Exact primitivity of B(f,N) Q(sigma) for zero-based images of sigma.
bool composition_is_mixing(const SlopeSignature& f, std::span<const int> images0);

/// Index of the largest score among admissible entries (mask empty = all
/// admissible). Scores within tie_tol * max(1, best) of the maximum count as
/// ties and the smallest index wins. nullopt if nothing is admissible.
std::optional<std::size_t> select_best(std::span<const double> scores, std::span<const std::uint8_t> mask,
                                       double tie_tol = 1e-12);

/// All admissible indices whose score is within tie_tol * max(1, best) of
/// the maximum, ascending.
std::vector<std::size_t> tied_with_best(std::span<const double> scores, std::span<const std::uint8_t> mask,
                                        double tie_tol = 1e-12);

/// Worker count actually used for `requested` (0 = all available).
int resolve_workers(int requested);

} // namespace pwmix
