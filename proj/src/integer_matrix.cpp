#include "pwmix/integer_matrix.hpp"

#include <algorithm>
#include <cstdlib>

#include <fmt/format.h>

#include "pwmix/errors.hpp"

namespace pwmix {

IntegerMatrix::IntegerMatrix(int order, std::int64_t fill) : n_(order) {
    if (order < 1) throw DomainError(fmt::format("matrix order must be positive, got {}", order));
    if (order > kMaxOrder) {
        throw CapacityError(fmt::format("matrix order {} exceeds the limit {}", order, kMaxOrder));
    }
    data_.assign(static_cast<std::size_t>(order) * static_cast<std::size_t>(order), fill);
}

IntegerMatrix::IntegerMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows)
    : IntegerMatrix(static_cast<int>(rows.size())) {
    int i = 0;
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != n_) throw DomainError("matrix literal is not square");
        std::copy(r.begin(), r.end(), data_.begin() + static_cast<std::ptrdiff_t>(index(i, 0)));
        ++i;
    }
}

IntegerMatrix IntegerMatrix::identity(int order) {
    IntegerMatrix out(order);
    for (int i = 0; i < order; ++i) out(i, i) = 1;
    return out;
}

std::optional<std::int64_t> IntegerMatrix::row_sum() const {
    std::optional<std::int64_t> common;
    for (int i = 0; i < n_; ++i) {
        std::int64_t s = 0;
        for (auto v : row(i)) s += v;
        if (common && *common != s) return std::nullopt;
        common = s;
    }
    return common;
}

std::optional<std::int64_t> IntegerMatrix::col_sum() const {
    std::optional<std::int64_t> common;
    for (int j = 0; j < n_; ++j) {
        std::int64_t s = 0;
        for (int i = 0; i < n_; ++i) s += (*this)(i, j);
        if (common && *common != s) return std::nullopt;
        common = s;
    }
    return common;
}

std::optional<std::int64_t> IntegerMatrix::line_sum() const {
    const auto r = row_sum();
    const auto c = col_sum();
    if (r && c && *r == *c) return r;
    return std::nullopt;
}

bool IntegerMatrix::is_symmetric() const {
    for (int i = 0; i < n_; ++i) {
        for (int j = i + 1; j < n_; ++j) {
            if ((*this)(i, j) != (*this)(j, i)) return false;
        }
    }
    return true;
}

bool IntegerMatrix::is_nonnegative() const {
    return std::all_of(data_.begin(), data_.end(), [](auto v) { return v >= 0; });
}

std::int64_t IntegerMatrix::max_abs_entry() const {
    std::int64_t best = 0;
    for (auto v : data_) best = std::max(best, std::abs(v));
    return best;
}

IntegerMatrix IntegerMatrix::transposed() const {
    IntegerMatrix out(n_);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) out(j, i) = (*this)(i, j);
    }
    return out;
}

IntegerMatrix IntegerMatrix::leading_block(int k) const {
    if (k < 1 || k > n_) throw DomainError(fmt::format("block size {} invalid for order {}", k, n_));
    IntegerMatrix out(k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) out(i, j) = (*this)(i, j);
    }
    return out;
}

IntegerMatrix operator+(const IntegerMatrix& a, const IntegerMatrix& b) {
    if (a.n_ != b.n_) throw DomainError("matrix sum of mismatched orders");
    IntegerMatrix out(a);
    for (std::size_t k = 0; k < out.data_.size(); ++k) out.data_[k] += b.data_[k];
    return out;
}

IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
    if (a.n_ != b.n_) throw DomainError("matrix product of mismatched orders");
    const int n = a.n_;
    IntegerMatrix out(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const auto aik = a(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

IntegerMatrix operator*(std::int64_t s, const IntegerMatrix& a) {
    IntegerMatrix out(a);
    for (auto& v : out.data_) v *= s;
    return out;
}

std::string IntegerMatrix::str() const {
    std::string out;
    for (int i = 0; i < n_; ++i) {
        out += fmt::format("[{}]\n", fmt::join(row(i), " "));
    }
    return out;
}

} // namespace pwmix
