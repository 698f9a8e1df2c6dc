#include "pwmix/matrix_builder.hpp"

#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "pwmix/errors.hpp"

namespace pwmix {

IntegerMatrix fine_markov(const ComposedMap& g) {
    const int m = g.m();
    const int fine = g.cells() * m;
    IntegerMatrix b(fine);
    for (int p = 1; p <= fine; ++p) {
        const int k = coarse_image_of_fine_cell(g, p);
        for (int h = 1; h <= m; ++h) b(p - 1, (k - 1) * m + h - 1) = 1;
    }
    return b;
}

IntegerMatrix reduced_markov(const ComposedMap& g) {
    const int m = g.m();
    const int n = g.cells();
    IntegerMatrix a(n);
    // a_ij = sum_h b_{(i-1)m+h, (j-1)m+1}; each fine row hits exactly one coarse column
    for (int i = 1; i <= n; ++i) {
        for (int h = 1; h <= m; ++h) {
            const int k = coarse_image_of_fine_cell(g, (i - 1) * m + h);
            a(i - 1, k - 1) += 1;
        }
    }
    return a;
}

IntegerMatrix permute_columns(const IntegerMatrix& mat, const IntervalPermutation& sigma) {
    const int n = mat.order();
    if (sigma.size() != n) {
        throw DomainError(fmt::format("permutation on {} cells applied to order {}", sigma.size(), n));
    }
    IntegerMatrix out(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 1; k <= n; ++k) out(i, sigma(k) - 1) = mat(i, k - 1);
    }
    return out;
}

IntegerMatrix permutation_matrix(const IntervalPermutation& sigma) {
    const int n = sigma.size();
    IntegerMatrix p(n);
    for (int i = 1; i <= n; ++i) p(i - 1, sigma(i) - 1) = 1;
    return p;
}

IntegerMatrix block_permutation_matrix(const IntervalPermutation& sigma, int m) {
    if (m < 1) throw DomainError(fmt::format("block size must be positive, got {}", m));
    const int n = sigma.size();
    IntegerMatrix q(n * m);
    for (int i = 1; i <= n; ++i) {
        const int j = sigma(i);
        for (int r = 0; r < m; ++r) q((i - 1) * m + r, (j - 1) * m + r) = 1;
    }
    return q;
}

IntegerMatrix backwards_identity(int n) {
    IntegerMatrix j(n);
    for (int i = 0; i < n; ++i) j(i, n - 1 - i) = 1;
    return j;
}

IntegerMatrix circulant(int m, int n) {
    if (m < 1 || m > n) throw PreconditionError(fmt::format("circulant needs 1 <= m <= N, got m = {}, N = {}", m, n));
    if (std::gcd(m, n) != 1) {
        throw PreconditionError(fmt::format("circulant needs gcd(m,N) = 1, got gcd({},{}) = {}", m, n, std::gcd(m, n)));
    }
    const int delta = (m % 2 == 1) ? (1 - m) / 2 : (1 - m + n) / 2;
    IntegerMatrix c(n);
    for (int i = 0; i < n; ++i) {
        for (int r = 0; r < m; ++r) {
            const int j = ((i + delta + r) % n + n) % n;
            c(i, j) = 1;
        }
    }
    return c;
}

IntegerMatrix folded_circulant(int m, int n) {
    const IntegerMatrix c = circulant(m, n);
    return c + c * backwards_identity(n);
}

IntegerMatrix tent_witness_matrix(int n) {
    if (n < 3 || n % 2 == 0) throw DomainError(fmt::format("tent witness matrix needs odd N >= 3, got {}", n));
    const int s = (n - 1) / 2;
    IntegerMatrix d(n);
    auto set = [&d](int i, int j, std::int64_t v) { d(i - 1, j - 1) = v; };  // 1-based
    for (int i : {1, 3}) {
        set(i, 1, 1);
        set(i, 2, 1);
    }
    for (int h = 2; h <= s; ++h) {
        for (int i : {2 * h - 2, 2 * h + 1}) {
            set(i, 2 * h - 1, 1);
            set(i, 2 * h, 1);
        }
    }
    set(n - 1, n, 2);
    return d;
}

IntegerMatrix structured_matrix(StructuredKind kind, const StructuredParams& params) {
    auto need_sigma = [&]() -> const IntervalPermutation& {
        if (!params.sigma) throw PreconditionError("permutation kinds need a permutation");
        return *params.sigma;
    };
    switch (kind) {
    case StructuredKind::permutation:
        return permutation_matrix(need_sigma());
    case StructuredKind::block_permutation:
        return block_permutation_matrix(need_sigma(), params.m);
    case StructuredKind::backwards_identity:
        return backwards_identity(params.n);
    case StructuredKind::circulant:
        return circulant(params.m, params.n);
    case StructuredKind::folded_circulant:
        return folded_circulant(params.m, params.n);
    case StructuredKind::tent_witness:
        return tent_witness_matrix(params.n);
    }
    throw DomainError("unknown structured matrix kind");
}

IntegerMatrix lift(const IntegerMatrix& a, int d) {
    if (d < 1) throw DomainError(fmt::format("lift factor must be >= 1, got {}", d));
    const int n = a.order();
    IntegerMatrix out(n * d);
    for (int p = 0; p < n * d; ++p) {
        for (int q = 0; q < n * d; ++q) out(p, q) = a(p / d, q / d);
    }
    return out;
}

namespace {

// First block (i,j) (0-based) whose d columns differ, if any.
std::optional<std::pair<int, int>> first_block_violation(const IntegerMatrix& b, int d) {
    const int n = b.order() / d;
    for (int p = 0; p < b.order(); ++p) {
        for (int j = 0; j < n; ++j) {
            const auto lead = b(p, j * d);
            for (int s = 1; s < d; ++s) {
                if (b(p, j * d + s) != lead) return std::pair{p / d, j};
            }
        }
    }
    return std::nullopt;
}

void require_divisible(const IntegerMatrix& b, int d) {
    if (d < 1 || b.order() % d != 0) {
        throw DomainError(fmt::format("block size {} does not divide order {}", d, b.order()));
    }
}

} // namespace

bool has_column_block_property(const IntegerMatrix& b, int d) {
    require_divisible(b, d);
    return !first_block_violation(b, d).has_value();
}

IntegerMatrix collapse(const IntegerMatrix& b, int d) {
    require_divisible(b, d);
    if (auto bad = first_block_violation(b, d)) {
        throw StructuralError(fmt::format("column block property fails in block ({},{}) for d = {}",
                                          bad->first + 1, bad->second + 1, d));
    }
    const int n = b.order() / d;
    IntegerMatrix out(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::int64_t s = 0;
            for (int r = 0; r < d; ++r) s += b(i * d + r, j * d);
            out(i, j) = s;
        }
    }
    return out;
}

IntegerMatrix doubled_matrix(int m, int n) {
    if (m < 2 || n < m) throw DomainError(fmt::format("doubled matrix needs N >= m >= 2, got m = {}, N = {}", m, n));
    const auto sf = canonical_signatures(m).stretch_fold;
    const IntegerMatrix at = reduced_markov(ComposedMap(sf, IntervalPermutation::identity(2 * n)));
    return at + at * backwards_identity(2 * n);
}

void write_matrix_csv(std::ostream& os, const IntegerMatrix& m) {
    const auto rs = m.row_sum();
    os << "n=" << m.order() << ",rowsum=" << (rs ? std::to_string(*rs) : std::string("none")) << '\n';
    for (int i = 0; i < m.order(); ++i) os << fmt::format("{}", fmt::join(m.row(i), ",")) << '\n';
}

} // namespace pwmix
