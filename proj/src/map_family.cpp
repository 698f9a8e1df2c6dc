#include "pwmix/map_family.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pwmix/errors.hpp"

namespace pwmix {

namespace {

// Branch index j with j-1 <= k*x < j, clamped to k at x = 1.
int branch_of(const Rational& x, int k) {
    const Rational scaled = x * Rational(k);
    const auto j = static_cast<int>(scaled.numerator() / scaled.denominator()) + 1;
    return std::min(j, k);
}

void require_unit_interval(const Rational& x) {
    if (x < Rational(0) || x > Rational(1)) {
        throw DomainError(fmt::format("x = {}/{} lies outside [0,1]", x.numerator(), x.denominator()));
    }
}

} // namespace

SlopeSignature::SlopeSignature(std::vector<int> epsilons) : eps_(std::move(epsilons)) {
    if (eps_.size() < 2) {
        throw DomainError(fmt::format("slope signature needs m >= 2 branches, got {}", eps_.size()));
    }
    for (int e : eps_) {
        if (e != 1 && e != -1) {
            throw DomainError(fmt::format("slope sign must be +1 or -1, got {}", e));
        }
    }
}

SlopeSignature SlopeSignature::parse(std::string_view text) {
    std::vector<int> eps;
    eps.reserve(text.size());
    for (char c : text) {
        if (c == '+') {
            eps.push_back(1);
        } else if (c == '-') {
            eps.push_back(-1);
        } else {
            throw DomainError(fmt::format("invalid character '{}' in signature \"{}\"", c, text));
        }
    }
    return SlopeSignature(std::move(eps));
}

SlopeSignature SlopeSignature::reversed() const {
    return SlopeSignature(std::vector<int>(eps_.rbegin(), eps_.rend()));
}

SlopeSignature SlopeSignature::negated() const {
    std::vector<int> out(eps_);
    for (int& e : out) e = -e;
    return SlopeSignature(std::move(out));
}

std::string SlopeSignature::str() const {
    std::string out;
    out.reserve(eps_.size());
    for (int e : eps_) out.push_back(e > 0 ? '+' : '-');
    return out;
}

CanonicalSignatures canonical_signatures(int m) {
    if (m < 2) throw DomainError(fmt::format("canonical signatures need m >= 2, got {}", m));
    std::vector<int> sf(static_cast<std::size_t>(m), 1);
    std::vector<int> zz(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) zz[static_cast<std::size_t>(j)] = (j % 2 == 0) ? 1 : -1;
    SlopeSignature zigzag(zz);
    return {SlopeSignature(std::move(sf)), zigzag, zigzag.negated()};
}

std::vector<SlopeSignature> all_signatures(int m) {
    if (m < 2) throw DomainError(fmt::format("signatures need m >= 2, got {}", m));
    if (m > 20) throw CapacityError(fmt::format("refusing to enumerate 2^{} signatures", m));
    std::vector<SlopeSignature> out;
    out.reserve(std::size_t{1} << m);
    for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
        std::vector<int> eps(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) {
            // most significant bit first so '+' < '-' ordering matches the text form
            eps[static_cast<std::size_t>(j)] = ((bits >> (m - 1 - j)) & 1u) ? -1 : 1;
        }
        out.emplace_back(std::move(eps));
    }
    return out;
}

std::vector<SlopeSignature> symmetry_orbit(const SlopeSignature& s) {
    std::vector<SlopeSignature> orbit{s, s.reversed(), s.negated(), s.reversed().negated()};
    std::sort(orbit.begin(), orbit.end(), [](const auto& a, const auto& b) { return a.str() < b.str(); });
    orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
    return orbit;
}

std::vector<SlopeSignature> orbit_representatives(int m) {
    std::vector<SlopeSignature> reps;
    for (const auto& s : all_signatures(m)) {
        if (symmetry_orbit(s).front() == s) reps.push_back(s);
    }
    return reps;
}

IntervalPermutation::IntervalPermutation(std::vector<int> images) : images_(std::move(images)) {
    const int n = static_cast<int>(images_.size());
    if (n < 1) throw DomainError("permutation must act on at least one cell");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : images_) {
        if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)]) {
            throw DomainError(fmt::format("images [{}] are not a permutation of 1..{}",
                                          fmt::join(images_, ","), n));
        }
        seen[static_cast<std::size_t>(v - 1)] = true;
    }
}

IntervalPermutation IntervalPermutation::identity(int n) {
    if (n < 1) throw DomainError(fmt::format("identity needs N >= 1, got {}", n));
    std::vector<int> images(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) images[static_cast<std::size_t>(j)] = j + 1;
    return IntervalPermutation(std::move(images));
}

IntervalPermutation IntervalPermutation::parse(std::string_view text) {
    std::vector<int> images;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string token(text.substr(pos, comma - pos));
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (token.empty() || used != token.size()) {
            throw DomainError(fmt::format("invalid permutation text \"{}\"", text));
        }
        images.push_back(value);
        pos = comma + 1;
    }
    return IntervalPermutation(std::move(images));
}

IntervalPermutation IntervalPermutation::inverse() const {
    std::vector<int> inv(images_.size());
    for (std::size_t j = 0; j < images_.size(); ++j) {
        inv[static_cast<std::size_t>(images_[j] - 1)] = static_cast<int>(j) + 1;
    }
    return IntervalPermutation(std::move(inv));
}

bool IntervalPermutation::is_identity() const {
    for (std::size_t j = 0; j < images_.size(); ++j) {
        if (images_[j] != static_cast<int>(j) + 1) return false;
    }
    return true;
}

std::string IntervalPermutation::str() const { return fmt::format("{}", fmt::join(images_, ",")); }

ComposedMap::ComposedMap(SlopeSignature signature, IntervalPermutation perm)
    : sig_(std::move(signature)), perm_(std::move(perm)) {
    if (perm_.size() < sig_.m()) {
        throw DomainError(fmt::format("composition needs N >= m, got N = {}, m = {}", perm_.size(), sig_.m()));
    }
}

std::string ComposedMap::str() const { return fmt::format("{}|{}", sig_.str(), perm_.str()); }

Rational eval_signature(const SlopeSignature& s, const Rational& x) {
    require_unit_interval(x);
    const int m = s.m();
    const int j = branch_of(x, m);
    const Rational mx = x * Rational(m);
    return s.epsilon(j) > 0 ? mx - Rational(j - 1) : Rational(j) - mx;
}

Rational eval_exchange(const IntervalPermutation& perm, const Rational& x) {
    require_unit_interval(x);
    const int n = perm.size();
    const int j = branch_of(x, n);
    return x + Rational(perm(j) - j, n);
}

Rational eval_map(const ComposedMap& g, const Rational& x) {
    return eval_exchange(g.perm(), eval_signature(g.signature(), x));
}

double eval_map(const ComposedMap& g, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError(fmt::format("x = {} lies outside [0,1]", x));
    const int m = g.m();
    const int j = std::min(static_cast<int>(std::floor(m * x)), m - 1) + 1;
    double y = g.signature().epsilon(j) > 0 ? m * x - (j - 1) : j - m * x;
    y = std::clamp(y, 0.0, 1.0);
    const int n = g.cells();
    const int k = std::min(static_cast<int>(std::floor(n * y)), n - 1) + 1;
    return std::clamp(y + static_cast<double>(g.perm()(k) - k) / n, 0.0, 1.0);
}

int coarse_image_of_fine_cell(const ComposedMap& g, int fine_cell) {
    const int n = g.cells();
    const int branch = (fine_cell - 1) / n + 1;
    const int offset = fine_cell - (branch - 1) * n;
    const int k = g.signature().epsilon(branch) > 0 ? offset : n + 1 - offset;
    return g.perm()(k);
}

int orientation_on_fine_cell(const ComposedMap& g, int fine_cell) {
    return g.signature().epsilon((fine_cell - 1) / g.cells() + 1);
}

} // namespace pwmix
