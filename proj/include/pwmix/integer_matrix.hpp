#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pwmix {

/// Dense square matrix of machine integers in row-major order. Entries in
/// this library are small nonnegative counts (at most m per row).
class IntegerMatrix {
public:
    static constexpr int kMaxOrder = 4096;

    IntegerMatrix() = default;
    explicit IntegerMatrix(int order, std::int64_t fill = 0);
    IntegerMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);

    static IntegerMatrix identity(int order);

    int order() const { return n_; }

    std::int64_t& operator()(int i, int j) { return data_[index(i, j)]; }  // 0-based
    std::int64_t operator()(int i, int j) const { return data_[index(i, j)]; }

    std::span<const std::int64_t> row(int i) const {
        return {data_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n_),
                static_cast<std::size_t>(n_)};
    }

    /// The common row sum, if every row has the same sum.
    std::optional<std::int64_t> row_sum() const;
    /// The common column sum, if every column has the same sum.
    std::optional<std::int64_t> col_sum() const;
    /// Common value c when every row and every column sums to c.
    std::optional<std::int64_t> line_sum() const;

    bool is_symmetric() const;
    bool is_nonnegative() const;
    std::int64_t max_abs_entry() const;

    IntegerMatrix transposed() const;
    /// Upper-left k-by-k block.
    IntegerMatrix leading_block(int k) const;

    friend IntegerMatrix operator+(const IntegerMatrix& a, const IntegerMatrix& b);
    friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b);
    friend IntegerMatrix operator*(std::int64_t s, const IntegerMatrix& a);
    bool operator==(const IntegerMatrix&) const = default;

    std::string str() const;

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
    }

    int n_ = 0;
    std::vector<std::int64_t> data_;
};

} // namespace pwmix
