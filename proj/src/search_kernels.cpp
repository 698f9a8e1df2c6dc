#include "pwmix/search_kernels.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <fmt/format.h>

#include "pwmix/errors.hpp"
#include "pwmix/spectral.hpp"

namespace pwmix {

namespace {

// Coarse image (zero-based) of each fine cell under f alone.
std::vector<int> fine_targets(const SlopeSignature& f, int n) {
    const ComposedMap plain(f, IntervalPermutation::identity(n));
    std::vector<int> out(static_cast<std::size_t>(n * f.m()));
    for (int p = 0; p < n * f.m(); ++p) out[static_cast<std::size_t>(p)] = coarse_image_of_fine_cell(plain, p + 1) - 1;
    return out;
}

bool mixing_from_targets(std::span<const int> targets, int m, std::span<const int> images0) {
    const int fine = static_cast<int>(targets.size());
    const int n = fine / m;
    // fine cell p maps onto every fine cell of coarse cell sigma(target_p)
    auto coarse_of = [&](int p) { return images0[static_cast<std::size_t>(targets[static_cast<std::size_t>(p)])]; };

    std::vector<int> level(static_cast<std::size_t>(fine), -1);
    std::queue<int> todo;
    level[0] = 0;
    todo.push(0);
    while (!todo.empty()) {
        const int p = todo.front();
        todo.pop();
        const int c = coarse_of(p);
        for (int r = 0; r < m; ++r) {
            const int q = c * m + r;
            if (level[static_cast<std::size_t>(q)] < 0) {
                level[static_cast<std::size_t>(q)] = level[static_cast<std::size_t>(p)] + 1;
                todo.push(q);
            }
        }
    }
    if (std::any_of(level.begin(), level.end(), [](int l) { return l < 0; })) return false;

    // reverse reachability of node 0: predecessors of q are all p landing in q's coarse cell
    std::vector<std::vector<int>> landing(static_cast<std::size_t>(n));
    for (int p = 0; p < fine; ++p) landing[static_cast<std::size_t>(coarse_of(p))].push_back(p);
    std::vector<bool> seen(static_cast<std::size_t>(fine), false);
    seen[0] = true;
    todo.push(0);
    while (!todo.empty()) {
        const int q = todo.front();
        todo.pop();
        for (int p : landing[static_cast<std::size_t>(q / m)]) {
            if (!seen[static_cast<std::size_t>(p)]) {
                seen[static_cast<std::size_t>(p)] = true;
                todo.push(p);
            }
        }
    }
    if (std::any_of(seen.begin(), seen.end(), [](bool b) { return !b; })) return false;

    int g = 0;
    for (int p = 0; p < fine && g != 1; ++p) {
        const int c = coarse_of(p);
        for (int r = 0; r < m; ++r) {
            g = std::gcd(g, std::abs(level[static_cast<std::size_t>(p)] + 1 - level[static_cast<std::size_t>(c * m + r)]));
        }
    }
    return g == 1;
}

struct Scorer {
    PermutedTau tau;
    std::vector<int> targets;
    int m = 0;

    void score(std::span<const int> images0, std::size_t slot, PermutationScores& out) {
        out.tau[slot] = tau(images0);
        if (!out.mixing.empty()) out.mixing[slot] = mixing_from_targets(targets, m, images0) ? 1 : 0;
    }
};

Scorer make_scorer(const IntegerMatrix& mat, const std::optional<SlopeSignature>& sig) {
    Scorer s{PermutedTau(mat), {}, 0};
    if (sig) {
        s.targets = fine_targets(*sig, mat.order());
        s.m = sig->m();
    }
    return s;
}

PermutationScores allocate(std::size_t count, bool mixing) {
    PermutationScores out;
    out.tau.assign(count, 0.0);
    if (mixing) out.mixing.assign(count, 0);
    return out;
}

void check_signature(const IntegerMatrix& mat, const std::optional<SlopeSignature>& sig) {
    if (sig && sig->m() > mat.order()) {
        throw DomainError(fmt::format("mixing test needs N >= m, got N = {}, m = {}", mat.order(), sig->m()));
    }
}

} // namespace

std::uint64_t factorial(int n) {
    if (n < 0 || n > 20) throw CapacityError(fmt::format("factorial of {} out of range", n));
    std::uint64_t f = 1;
    for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
    return f;
}

std::vector<int> unrank_permutation(int n, std::uint64_t rank) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = n; k >= 1; --k) {
        const std::uint64_t block = factorial(k - 1);
        const auto idx = static_cast<std::size_t>(rank / block);
        rank %= block;
        out.push_back(pool[idx]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    return out;
}

bool composition_is_mixing(const SlopeSignature& f, std::span<const int> images0) {
    const int n = static_cast<int>(images0.size());
    return mixing_from_targets(fine_targets(f, n), f.m(), images0);
}

int resolve_workers(int requested) {
#ifdef _OPENMP
    return requested > 0 ? requested : omp_get_max_threads();
#else
    (void)requested;
    return 1;
#endif
}

PermutationScores scan_all_permutations(const IntegerMatrix& mat, const std::optional<SlopeSignature>& sig,
                                        Execution execution, int workers) {
    const int n = mat.order();
    if (n > kMaxExhaustiveCells) {
        throw CapacityError(fmt::format("exhaustive search is limited to N <= {}, got N = {}", kMaxExhaustiveCells, n));
    }
    check_signature(mat, sig);
    const std::uint64_t total = factorial(n);
    PermutationScores out = allocate(total, sig.has_value());

    if (execution == Execution::serial) {
        Scorer scorer = make_scorer(mat, sig);
        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        std::size_t slot = 0;
        do {
            scorer.score(perm, slot++, out);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return out;
    }

    const int threads = resolve_workers(workers);
    // contiguous lexicographic rank ranges; chunking only affects scheduling
    const std::uint64_t chunks = std::min<std::uint64_t>(total, static_cast<std::uint64_t>(threads) * 16);
    const auto chunk_count = static_cast<std::int64_t>(chunks);
#pragma omp parallel num_threads(threads)
    {
        Scorer scorer = make_scorer(mat, sig);
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t c = 0; c < chunk_count; ++c) {
            const std::uint64_t begin = total * static_cast<std::uint64_t>(c) / chunks;
            const std::uint64_t end = total * static_cast<std::uint64_t>(c + 1) / chunks;
            std::vector<int> perm = unrank_permutation(n, begin);
            for (std::uint64_t r = begin; r < end; ++r) {
                scorer.score(perm, static_cast<std::size_t>(r), out);
                std::next_permutation(perm.begin(), perm.end());
            }
        }
    }
    return out;
}

PermutationScores scan_permutation_list(const IntegerMatrix& mat, std::span<const std::vector<int>> perms,
                                        const std::optional<SlopeSignature>& sig, Execution execution, int workers) {
    check_signature(mat, sig);
    for (const auto& p : perms) {
        if (static_cast<int>(p.size()) != mat.order()) throw DomainError("permutation length differs from matrix order");
    }
    PermutationScores out = allocate(perms.size(), sig.has_value());
    if (execution == Execution::serial) {
        Scorer scorer = make_scorer(mat, sig);
        for (std::size_t k = 0; k < perms.size(); ++k) scorer.score(perms[k], k, out);
        return out;
    }
    const int threads = resolve_workers(workers);
    const auto count = static_cast<std::int64_t>(perms.size());
#pragma omp parallel num_threads(threads)
    {
        Scorer scorer = make_scorer(mat, sig);
#pragma omp for schedule(static)
        for (std::int64_t k = 0; k < count; ++k) {
            scorer.score(perms[static_cast<std::size_t>(k)], static_cast<std::size_t>(k), out);
        }
    }
    return out;
}

std::vector<std::size_t> tied_with_best(std::span<const double> scores, std::span<const std::uint8_t> mask,
                                        double tie_tol) {
    auto admissible = [&](std::size_t k) { return mask.empty() || mask[k] != 0; };
    std::optional<double> best;
    for (std::size_t k = 0; k < scores.size(); ++k) {
        if (admissible(k) && (!best || scores[k] > *best)) best = scores[k];
    }
    std::vector<std::size_t> ties;
    if (!best) return ties;
    const double floor = *best - tie_tol * std::max(1.0, *best);
    for (std::size_t k = 0; k < scores.size(); ++k) {
        if (admissible(k) && scores[k] >= floor) ties.push_back(k);
    }
    return ties;
}

std::optional<std::size_t> select_best(std::span<const double> scores, std::span<const std::uint8_t> mask,
                                       double tie_tol) {
    const auto ties = tied_with_best(scores, mask, tie_tol);
    if (ties.empty()) return std::nullopt;
    return ties.front();
}

} // namespace pwmix
