#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace pwmix {

using Rational = boost::rational<std::int64_t>;

/// Sign vector (eps_1, ..., eps_m) selecting one of the 2^m maps with slope
/// m * eps_j on the j-th of m equal subintervals.
class SlopeSignature {
public:
    explicit SlopeSignature(std::vector<int> epsilons);

    /// Parses the text form, a string over {+,-} of length m >= 2.
    static SlopeSignature parse(std::string_view text);

    int m() const { return static_cast<int>(eps_.size()); }
    int epsilon(int j) const { return eps_.at(static_cast<std::size_t>(j - 1)); }  // 1-based
    std::span<const int> epsilons() const { return eps_; }

    SlopeSignature reversed() const;
    SlopeSignature negated() const;

    std::string str() const;

    auto operator<=>(const SlopeSignature&) const = default;
    bool operator==(const SlopeSignature&) const = default;

private:
    std::vector<int> eps_;
};

struct CanonicalSignatures {
    SlopeSignature stretch_fold;
    SlopeSignature zigzag;
    SlopeSignature inverted_zigzag;
};

CanonicalSignatures canonical_signatures(int m);

/// All 2^m signatures for branch count m, in lexicographic order of their
/// text form ('+' < '-').
std::vector<SlopeSignature> all_signatures(int m);

/// {s, reverse(s), negate(s), negate(reverse(s))} without duplicates, sorted.
std::vector<SlopeSignature> symmetry_orbit(const SlopeSignature& s);

/// One representative (the smallest member of each orbit) per symmetry orbit.
std::vector<SlopeSignature> orbit_representatives(int m);

/// A permutation of the N cells of the uniform partition, stored by its
/// one-based images.
class IntervalPermutation {
public:
    explicit IntervalPermutation(std::vector<int> images);

    static IntervalPermutation identity(int n);
    static IntervalPermutation parse(std::string_view text);

    int size() const { return static_cast<int>(images_.size()); }
    int operator()(int j) const { return images_[static_cast<std::size_t>(j - 1)]; }  // 1-based
    std::span<const int> images() const { return images_; }

    IntervalPermutation inverse() const;
    bool is_identity() const;

    std::string str() const;

    auto operator<=>(const IntervalPermutation&) const = default;
    bool operator==(const IntervalPermutation&) const = default;

private:
    std::vector<int> images_;
};

/// g = sigma o f with f given by a slope signature and sigma acting on N >= m
/// cells.
class ComposedMap {
public:
    ComposedMap(SlopeSignature signature, IntervalPermutation perm);

    const SlopeSignature& signature() const { return sig_; }
    const IntervalPermutation& perm() const { return perm_; }
    int m() const { return sig_.m(); }
    int cells() const { return perm_.size(); }

    std::string str() const;

private:
    SlopeSignature sig_;
    IntervalPermutation perm_;
};

/// f(x) for the signature alone; cell j is [ (j-1)/m, j/m ), x = 1 uses j = m.
Rational eval_signature(const SlopeSignature& s, const Rational& x);

/// sigma(x) = x + (sigma(j) - j)/N on cell [ (j-1)/N, j/N ), x = 1 uses j = N.
Rational eval_exchange(const IntervalPermutation& perm, const Rational& x);

/// sigma(f(x)), exact. Throws DomainError for x outside [0,1].
Rational eval_map(const ComposedMap& g, const Rational& x);

/// Floating-point evaluation with the same branch conventions, for sampling.
double eval_map(const ComposedMap& g, double x);

/// The fine partition has N*m cells. Fine cell p (1-based) is carried by g
/// affinely onto coarse cell k of the N-cell partition; returns k.
int coarse_image_of_fine_cell(const ComposedMap& g, int fine_cell);

/// +1 if g is increasing on fine cell p, -1 otherwise.
int orientation_on_fine_cell(const ComposedMap& g, int fine_cell);

} // namespace pwmix
