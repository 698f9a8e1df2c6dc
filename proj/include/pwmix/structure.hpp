#pragma once

#include <optional>
#include <vector>

#include "pwmix/integer_matrix.hpp"
#include "pwmix/map_family.hpp"
#include "pwmix/spectral.hpp"

namespace pwmix {

struct Connectivity {
    bool irreducible = false;
    bool primitive = false;
    int period = 0;  // 0 when reducible
};

/// Exact graph test on the digraph with an edge i -> j iff m_ij != 0.
Connectivity connectivity(const IntegerMatrix& m);

/// Classes of the transitive closure of "columns i and j share a nonzero row".
/// Zero-based, each class sorted, classes ordered by smallest member.
std::vector<std::vector<int>> row_relation_classes(const IntegerMatrix& m);

inline constexpr int kMaxIndexOrder = 20;
inline constexpr int kMaxCircuitOrder = 12;

/// Fiedler's index of irreducibility of M / c where c is the common line sum:
/// the minimum over nonempty proper subsets S of the weight leaving S.
/// Exhaustive; order <= 20.
Rational irreducibility_index(const IntegerMatrix& m);

/// Length of the longest simple directed cycle; self-loops count as 1, 0 if
/// the graph is acyclic. Backtracking; order <= 12.
int longest_circuit(const IntegerMatrix& m);

struct StructureReport {
    Connectivity connectivity;
    std::optional<Rational> mu;   // absent above the exhaustive capacity
    std::optional<int> kappa;
};

StructureReport structure_report(const IntegerMatrix& m);

struct BoundCheck {
    Complex lambda;
    double fiedler_lhs = 0, fiedler_rhs = 0;
    bool fiedler_pass = false;
    bool ptak_checked = false;  // odd order only
    double ptak_lhs = 0, ptak_rhs = 0;
    bool ptak_pass = true;
    double ks_lhs = 0, ks_rhs = 0;
    bool ks_pass = false;

    bool pass() const { return fiedler_pass && ptak_pass && ks_pass; }
};

struct BoundReport {
    int order = 0;
    Rational mu;
    int kappa = 0;
    std::vector<BoundCheck> checks;  // one per nonleading eigenvalue

    bool pass() const;
};

/// Checks the Fiedler, Fiedler-Ptak and Kellogg-Stephens eigenvalue bounds for
/// every nonleading eigenvalue of the doubly stochastic M / c, each with
/// absolute slack `slack`.
BoundReport bound_report(const IntegerMatrix& m, double slack = 1e-9);

} // namespace pwmix
