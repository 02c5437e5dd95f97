#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <vector>

#include "subring/checked_int.hpp"

namespace subring {

using IntVector = std::vector<Int>;

/// Dense row-major matrix of exact 64-bit integers.
///
/// A matrix may have zero rows; that shape stands for the basis of the zero
/// lattice. Arithmetic on entries goes through `checked::` so overflow
/// surfaces as `OverflowError` instead of wrapping.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  IntMatrix(std::initializer_list<std::initializer_list<Int>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw UsageError("IntMatrix: ragged rows");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static IntMatrix from_rows(std::size_t cols, std::span<const IntVector> rows) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols)
        throw UsageError("IntMatrix: row length does not match column count");
      std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix diagonal(std::span<const Int> diag) {
    IntMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Int operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Int> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Int> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  IntVector row_vector(std::size_t i) const {
    auto r = row(i);
    return {r.begin(), r.end()};
  }

  IntVector column(std::size_t j) const {
    IntVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Int x) { return x == 0; });
  }

  bool row_is_zero(std::size_t i) const {
    auto r = row(i);
    return std::all_of(r.begin(), r.end(), [](Int x) { return x == 0; });
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(row(a).begin(), row(a).end(), row(b).begin());
  }

  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  /// row(dst) += factor * row(src)
  void add_row_multiple(std::size_t dst, std::size_t src, Int factor) {
    if (factor == 0) return;
    for (std::size_t j = 0; j < cols_; ++j)
      (*this)(dst, j) = checked::add((*this)(dst, j), checked::mul(factor, (*this)(src, j)));
  }

  /// col(dst) += factor * col(src)
  void add_col_multiple(std::size_t dst, std::size_t src, Int factor) {
    if (factor == 0) return;
    for (std::size_t i = 0; i < rows_; ++i)
      (*this)(i, dst) = checked::add((*this)(i, dst), checked::mul(factor, (*this)(i, src)));
  }

  void negate_row(std::size_t i) {
    for (auto& x : row(i)) x = checked::neg(x);
  }

  void negate_col(std::size_t j) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = checked::neg((*this)(i, j));
  }

  /// Keeps the first `n` rows.
  IntMatrix top_rows(std::size_t n) const {
    IntMatrix out(n, cols_);
    std::copy_n(data_.begin(), n * cols_, out.data_.begin());
    return out;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  // Shape first, then entries lexicographically.
  friend std::strong_ordering operator<=>(const IntMatrix& a, const IntMatrix& b) {
    if (auto c = a.rows_ <=> b.rows_; c != 0) return c;
    if (auto c = a.cols_ <=> b.cols_; c != 0) return c;
    return std::lexicographical_compare_three_way(a.data_.begin(), a.data_.end(),
                                                  b.data_.begin(), b.data_.end());
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  IntVector data_;
};

/// Matrix product a * b with checked arithmetic.
inline IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw UsageError("multiply: inner dimensions differ");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t t = 0; t < a.cols(); ++t) {
      Int x = a(i, t);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        out(i, j) = checked::add(out(i, j), checked::mul(x, b(t, j)));
    }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) os << ',';
    os << '[';
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j);
    }
    os << ']';
  }
  return os << ']';
}

}  // namespace subring
