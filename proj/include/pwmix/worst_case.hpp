#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "pwmix/integer_matrix.hpp"
#include "pwmix/map_family.hpp"
#include "pwmix/search_kernels.hpp"

namespace pwmix {

struct Strategy {
    enum class Kind { exhaustive, sampled, symmetric_shortcut };

    Kind kind = Kind::exhaustive;
    std::uint64_t samples = 0;
    std::uint64_t seed = 1;

    static Strategy exhaustive() { return {Kind::exhaustive, 0, 1}; }
    static Strategy sampled(std::uint64_t k, std::uint64_t seed) { return {Kind::sampled, k, seed}; }
    static Strategy symmetric_shortcut() { return {Kind::symmetric_shortcut, 0, 1}; }

    /// "exhaustive", "sampled(k,seed)" or "symmetric_shortcut".
    std::string str() const;
};

enum class RateMode { all, mixing_only };

std::string to_string(RateMode mode);

struct SearchResult {
    double value = 0.0;
    IntervalPermutation argmax = IntervalPermutation::identity(1);
    Strategy strategy;
    std::uint64_t evaluated = 0;
    bool mixing_only = false;
};

struct SearchOptions {
    Execution execution = Execution::parallel;
    int workers = 0;  // 0 = all available
};

/// tperm(M) = max over sigma of tau(M P(sigma)).
///  - exhaustive: exact, N <= 9, smallest lexicographic argmax among ties.
///  - sampled(k, seed): identity first, then k seeded Fisher-Yates draws; a
///    lower bound.
///  - symmetric_shortcut: tau(M) with the identity; M must be symmetric.
SearchResult tperm_search(const IntegerMatrix& m, const Strategy& strategy, const SearchOptions& options = {});

/// Worst mixing rate over sigma in S_N of sigma o f:
///   all:         max(1, tperm(A(f,N))) / m
///   mixing_only: max(1, tau(A(f,N) P(sigma))) / m over sigma with sigma o f
///                topologically mixing (exact test on B(f,N) Q(sigma)).
/// Throws DomainError when mixing_only finds no admissible sigma.
SearchResult worst_mixing_rate(const SlopeSignature& f, int n, RateMode mode, const Strategy& strategy,
                               const SearchOptions& options = {});

/// Some sigma for which sigma o f is not topologically mixing, smallest in
/// lexicographic order, if one exists. Exhaustive; N <= 9.
std::optional<IntervalPermutation> non_mixing_witness(const SlopeSignature& f, int n);

/// sqrt(tau(A^T A)), an upper bound for tperm(A).
double gram_bound(const IntegerMatrix& a);

/// Default strategy: exhaustive for N <= 7, else sampled(10000, seed 1).
Strategy default_strategy(int n);

struct SurveyRow {
    int m = 0;
    int n = 0;
    std::string signature;
    RateMode mode = RateMode::all;
    SearchResult result;
    double wall_ms = 0.0;
};

/// Columns m,N,signature,mode,strategy,value,argmax,evaluated,wall_ms.
void write_survey_header(std::ostream& os);
void write_survey_row(std::ostream& os, const SurveyRow& row);

/// Times worst_mixing_rate and packs the result into a survey row.
SurveyRow survey_point(const SlopeSignature& f, int n, RateMode mode, const Strategy& strategy,
                       const SearchOptions& options = {});

} // namespace pwmix
