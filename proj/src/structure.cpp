#include "pwmix/structure.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>

#include <fmt/format.h>

#include "pwmix/errors.hpp"

namespace pwmix {

namespace {

using Adjacency = std::vector<std::vector<int>>;

Adjacency adjacency(const IntegerMatrix& m, bool reverse) {
    const int n = m.order();
    Adjacency adj(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (m(i, j) != 0) adj[static_cast<std::size_t>(reverse ? j : i)].push_back(reverse ? i : j);
        }
    }
    return adj;
}

// Breadth-first levels from vertex 0; -1 for unreached.
std::vector<int> bfs_levels(const Adjacency& adj) {
    std::vector<int> level(adj.size(), -1);
    std::queue<int> todo;
    level[0] = 0;
    todo.push(0);
    while (!todo.empty()) {
        const int u = todo.front();
        todo.pop();
        for (int v : adj[static_cast<std::size_t>(u)]) {
            if (level[static_cast<std::size_t>(v)] < 0) {
                level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
                todo.push(v);
            }
        }
    }
    return level;
}

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) { std::iota(parent_.begin(), parent_.end(), 0); }
    int find(int x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
            x = parent_[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }

private:
    std::vector<int> parent_;
};

struct CircuitSearch {
    const Adjacency& adj;
    int n;
    int best = 0;
    int start = 0;
    std::vector<bool> on_path;

    // Cycles are enumerated once per smallest vertex `start`; only vertices
    // greater than start may appear on the path.
    void extend(int u, int length) {
        for (int v : adj[static_cast<std::size_t>(u)]) {
            if (best == n) return;
            if (v == start) {
                best = std::max(best, length);
            } else if (v > start && !on_path[static_cast<std::size_t>(v)]) {
                on_path[static_cast<std::size_t>(v)] = true;
                extend(v, length + 1);
                on_path[static_cast<std::size_t>(v)] = false;
            }
        }
    }
};

void require_order(const IntegerMatrix& m, int cap, const char* what) {
    if (m.order() > cap) {
        throw CapacityError(fmt::format("{} is exhaustive and limited to order {}, got {}", what, cap, m.order()));
    }
}

} // namespace

Connectivity connectivity(const IntegerMatrix& m) {
    const auto fwd = adjacency(m, false);
    const auto bwd = adjacency(m, true);
    const auto level = bfs_levels(fwd);
    const auto back = bfs_levels(bwd);
    Connectivity c;
    const bool reach_all = std::all_of(level.begin(), level.end(), [](int l) { return l >= 0; }) &&
                           std::all_of(back.begin(), back.end(), [](int l) { return l >= 0; });
    const bool has_edge = std::any_of(fwd.begin(), fwd.end(), [](const auto& e) { return !e.empty(); });
    c.irreducible = reach_all && has_edge;
    if (!c.irreducible) return c;
    int g = 0;
    for (std::size_t u = 0; u < fwd.size(); ++u) {
        for (int v : fwd[u]) g = std::gcd(g, std::abs(level[u] + 1 - level[static_cast<std::size_t>(v)]));
    }
    c.period = g;
    c.primitive = (g == 1);
    return c;
}

std::vector<std::vector<int>> row_relation_classes(const IntegerMatrix& m) {
    const int n = m.order();
    UnionFind uf(n);
    for (int h = 0; h < n; ++h) {
        int first = -1;
        for (int j = 0; j < n; ++j) {
            if (m(h, j) == 0) continue;
            if (first < 0) {
                first = j;
            } else {
                uf.unite(first, j);
            }
        }
    }
    std::vector<std::vector<int>> classes;
    std::vector<int> slot(static_cast<std::size_t>(n), -1);
    for (int j = 0; j < n; ++j) {
        const int root = uf.find(j);
        if (slot[static_cast<std::size_t>(root)] < 0) {
            slot[static_cast<std::size_t>(root)] = static_cast<int>(classes.size());
            classes.emplace_back();
        }
        classes[static_cast<std::size_t>(slot[static_cast<std::size_t>(root)])].push_back(j);
    }
    return classes;
}

Rational irreducibility_index(const IntegerMatrix& m) {
    require_order(m, kMaxIndexOrder, "irreducibility index");
    const auto c = m.line_sum();
    if (!c || *c <= 0) throw PreconditionError("irreducibility index needs equal positive row and column sums");
    const int n = m.order();
    if (n == 1) return Rational(0);
    // Gray-code walk over subsets; cut = total weight from S to its complement.
    std::vector<bool> in(static_cast<std::size_t>(n), false);
    std::int64_t cut = 0;
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    const std::uint32_t total = 1u << n;
    for (std::uint32_t k = 1; k < total; ++k) {
        const int v = std::countr_zero(k);
        const bool adding = !in[static_cast<std::size_t>(v)];
        // weight of edges between v and the rest, before the flip
        std::int64_t into_v_from_s = 0;
        std::int64_t from_v_to_out = 0;
        for (int u = 0; u < n; ++u) {
            if (u == v) continue;
            if (in[static_cast<std::size_t>(u)]) {
                into_v_from_s += m(u, v);
            } else {
                from_v_to_out += m(v, u);
            }
        }
        if (adding) {
            cut += from_v_to_out - into_v_from_s;
        } else {
            cut -= from_v_to_out - into_v_from_s;
        }
        in[static_cast<std::size_t>(v)] = adding;
        const std::uint32_t gray = k ^ (k >> 1);
        if (gray != total - 1) best = std::min(best, cut);
    }
    return Rational(best, *c);
}

int longest_circuit(const IntegerMatrix& m) {
    require_order(m, kMaxCircuitOrder, "longest circuit");
    const auto adj = adjacency(m, false);
    CircuitSearch search{adj, m.order(), 0, 0, std::vector<bool>(static_cast<std::size_t>(m.order()), false)};
    for (int s = 0; s < m.order() && search.best < m.order() - s; ++s) {
        search.start = s;
        search.on_path[static_cast<std::size_t>(s)] = true;
        search.extend(s, 1);
        search.on_path[static_cast<std::size_t>(s)] = false;
    }
    return search.best;
}

StructureReport structure_report(const IntegerMatrix& m) {
    StructureReport r;
    r.connectivity = connectivity(m);
    if (m.order() <= kMaxIndexOrder && m.line_sum().value_or(0) > 0) r.mu = irreducibility_index(m);
    if (m.order() <= kMaxCircuitOrder) r.kappa = longest_circuit(m);
    return r;
}

bool BoundReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass(); });
}

BoundReport bound_report(const IntegerMatrix& m, double slack) {
    BoundReport report;
    report.order = m.order();
    report.mu = irreducibility_index(m);
    report.kappa = longest_circuit(m);
    const double c = static_cast<double>(*m.line_sum());
    const double mu = boost::rational_cast<double>(report.mu);
    const double n = m.order();
    const double gap = 1.0 - std::cos(std::numbers::pi / n);
    const bool odd = m.order() % 2 == 1;

    for (const auto& raw : spectrum(m).nonleading) {
        BoundCheck chk;
        chk.lambda = raw / c;
        chk.fiedler_lhs = std::abs(1.0 - chk.lambda);
        chk.fiedler_rhs = 2.0 * gap * mu;
        chk.fiedler_pass = chk.fiedler_lhs >= chk.fiedler_rhs - slack;
        if (odd) {
            chk.ptak_checked = true;
            chk.ptak_lhs = std::abs(1.0 + chk.lambda);
            chk.ptak_rhs = gap * mu;
            chk.ptak_pass = chk.ptak_lhs >= chk.ptak_rhs - slack;
        }
        // spectral radius of a doubly stochastic matrix is 1
        chk.ks_rhs = 1.0;
        if (report.kappa > 2) {
            chk.ks_lhs = chk.lambda.real() + std::abs(chk.lambda.imag()) * std::tan(std::numbers::pi / report.kappa);
            chk.ks_pass = chk.ks_lhs <= chk.ks_rhs + slack;
        } else {
            // circuits of length <= 2 force a real spectrum
            chk.ks_lhs = chk.lambda.real();
            chk.ks_pass = std::abs(chk.lambda.imag()) <= slack && chk.ks_lhs <= chk.ks_rhs + slack;
        }
        report.checks.push_back(chk);
    }
    return report;
}

} // namespace pwmix
