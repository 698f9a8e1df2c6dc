#include "pwmix/worst_case.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "pwmix/errors.hpp"
#include "pwmix/matrix_builder.hpp"
#include "pwmix/spectral.hpp"

namespace pwmix {

namespace {

IntervalPermutation from_zero_based(const std::vector<int>& images0) {
    std::vector<int> images(images0.size());
    std::transform(images0.begin(), images0.end(), images.begin(), [](int v) { return v + 1; });
    return IntervalPermutation(std::move(images));
}

std::vector<int> identity0(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    return p;
}

// Identity first, then k seeded Fisher-Yates shuffles (mt19937_64).
std::vector<std::vector<int>> draw_samples(int n, std::uint64_t k, std::uint64_t seed) {
    std::vector<std::vector<int>> out;
    out.reserve(static_cast<std::size_t>(k) + 1);
    out.push_back(identity0(n));
    std::mt19937_64 rng(seed);
    for (std::uint64_t s = 0; s < k; ++s) {
        std::vector<int> p = identity0(n);
        for (int i = n - 1; i > 0; --i) {
            std::uniform_int_distribution<int> pick(0, i);
            std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(pick(rng))]);
        }
        out.push_back(std::move(p));
    }
    return out;
}

void require_line_sums(const IntegerMatrix& m) {
    if (!m.line_sum()) throw PreconditionError("permutation search needs constant row and column sums");
}

// Core search shared by tperm_search and worst_mixing_rate; value is the raw
// tau(M P(sigma)) maximum over admissible sigma.
SearchResult search(const IntegerMatrix& mat, const Strategy& strategy, const std::optional<SlopeSignature>& mixing,
                    const SearchOptions& options) {
    require_line_sums(mat);
    const int n = mat.order();
    SearchResult result;
    result.strategy = strategy;
    result.mixing_only = mixing.has_value();

    switch (strategy.kind) {
    case Strategy::Kind::symmetric_shortcut: {
        if (mixing) throw PreconditionError("symmetric shortcut does not apply to the mixing-only maximum");
        if (!mat.is_symmetric()) throw PreconditionError("symmetric shortcut needs a symmetric matrix");
        result.value = tau(mat);
        result.argmax = IntervalPermutation::identity(n);
        result.evaluated = 1;
        return result;
    }
    case Strategy::Kind::exhaustive: {
        const auto scores = scan_all_permutations(mat, mixing, options.execution, options.workers);
        const auto best = select_best(scores.tau, scores.mixing);
        if (!best) throw DomainError("no permutation makes the composition topologically mixing");
        result.value = scores.tau[*best];
        result.argmax = from_zero_based(unrank_permutation(n, *best));
        result.evaluated = scores.tau.size();
        return result;
    }
    case Strategy::Kind::sampled: {
        const auto perms = draw_samples(n, strategy.samples, strategy.seed);
        const auto scores = scan_permutation_list(mat, perms, mixing, options.execution, options.workers);
        const auto ties = tied_with_best(scores.tau, scores.mixing);
        if (ties.empty()) throw DomainError("no sampled permutation makes the composition topologically mixing");
        const auto best = *std::min_element(ties.begin(), ties.end(),
                                            [&](std::size_t a, std::size_t b) { return perms[a] < perms[b]; });
        result.value = scores.tau[best];
        result.argmax = from_zero_based(perms[best]);
        result.evaluated = perms.size();
        return result;
    }
    }
    throw DomainError("unknown strategy");
}

} // namespace

std::string Strategy::str() const {
    switch (kind) {
    case Kind::exhaustive:
        return "exhaustive";
    case Kind::sampled:
        return fmt::format("sampled({},{})", samples, seed);
    case Kind::symmetric_shortcut:
        return "symmetric_shortcut";
    }
    return "unknown";
}

std::string to_string(RateMode mode) { return mode == RateMode::all ? "all" : "mixing_only"; }

SearchResult tperm_search(const IntegerMatrix& m, const Strategy& strategy, const SearchOptions& options) {
    return search(m, strategy, std::nullopt, options);
}

SearchResult worst_mixing_rate(const SlopeSignature& f, int n, RateMode mode, const Strategy& strategy,
                               const SearchOptions& options) {
    const IntegerMatrix a = reduced_markov(ComposedMap(f, IntervalPermutation::identity(n)));
    std::optional<SlopeSignature> mixing;
    if (mode == RateMode::mixing_only) mixing = f;
    SearchResult r = search(a, strategy, mixing, options);
    r.value = std::max(1.0, r.value) / f.m();
    // the exact graph test decides rate 1; the eigensolver only gets close
    if (mode == RateMode::all && r.value > 1.0 - 1e-9) {
        std::vector<int> images0(r.argmax.images().begin(), r.argmax.images().end());
        for (int& v : images0) --v;
        if (!composition_is_mixing(f, images0)) r.value = 1.0;
    }
    return r;
}

std::optional<IntervalPermutation> non_mixing_witness(const SlopeSignature& f, int n) {
    if (n > kMaxExhaustiveCells) {
        throw CapacityError(fmt::format("exhaustive search is limited to N <= {}, got N = {}", kMaxExhaustiveCells, n));
    }
    if (n < f.m()) throw DomainError(fmt::format("composition needs N >= m, got N = {}, m = {}", n, f.m()));
    std::vector<int> perm = identity0(n);
    do {
        if (!composition_is_mixing(f, perm)) return from_zero_based(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

double gram_bound(const IntegerMatrix& a) {
    require_line_sums(a);
    return std::sqrt(tau(a.transposed() * a));
}

Strategy default_strategy(int n) { return n <= 7 ? Strategy::exhaustive() : Strategy::sampled(10000, 1); }

void write_survey_header(std::ostream& os) { os << "m,N,signature,mode,strategy,value,argmax,evaluated,wall_ms\n"; }

void write_survey_row(std::ostream& os, const SurveyRow& row) {
    os << fmt::format("{},{},{},{},\"{}\",{:.12g},\"{}\",{},{:.3f}\n", row.m, row.n, row.signature,
                      to_string(row.mode), row.result.strategy.str(), row.result.value, row.result.argmax.str(),
                      row.result.evaluated, row.wall_ms);
}

SurveyRow survey_point(const SlopeSignature& f, int n, RateMode mode, const Strategy& strategy,
                       const SearchOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    SurveyRow row;
    row.m = f.m();
    row.n = n;
    row.signature = f.str();
    row.mode = mode;
    row.result = worst_mixing_rate(f, n, mode, strategy, options);
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return row;
}

} // namespace pwmix
