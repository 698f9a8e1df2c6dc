#pragma once

#include <algorithm>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include "pwmix/map_family.hpp"

namespace testing {

inline pwmix::IntervalPermutation random_perm(int n, std::mt19937_64& rng) {
    std::vector<int> images(static_cast<std::size_t>(n));
    std::iota(images.begin(), images.end(), 1);
    std::shuffle(images.begin(), images.end(), rng);
    return pwmix::IntervalPermutation(std::move(images));
}

inline pwmix::IntervalPermutation perm(const char* text) { return pwmix::IntervalPermutation::parse(text); }
inline pwmix::SlopeSignature sig(const char* text) { return pwmix::SlopeSignature::parse(text); }

/// Greedy nearest matching of two complex multisets; largest pair distance.
inline double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
    if (a.size() != b.size()) return 1e300;
    double worst = 0.0;
    for (const auto& x : a) {
        auto it = std::min_element(b.begin(), b.end(),
                                   [&](const auto& p, const auto& q) { return std::abs(p - x) < std::abs(q - x); });
        worst = std::max(worst, std::abs(*it - x));
        b.erase(it);
    }
    return worst;
}

} // namespace testing
