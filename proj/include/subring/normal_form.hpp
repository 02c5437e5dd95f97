#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "subring/checked_int.hpp"
#include "subring/int_matrix.hpp"

namespace subring {

namespace detail {

inline std::size_t leading_col(std::span<const Int> v) {
  std::size_t c = 0;
  while (c < v.size() && v[c] == 0) ++c;
  return c;
}

// Replaces (h, v) by a unimodular combination with h[col] = gcd > 0 and
// v[col] = 0.
inline void gcd_combine(IntVector& h, IntVector& v, std::size_t col) {
  const auto [g, x, y] = checked::xgcd(h[col], v[col]);
  const Int a_g = h[col] / g;
  const Int b_g = v[col] / g;
  for (std::size_t j = 0; j < h.size(); ++j) {
    const Int u = h[j];
    const Int w = v[j];
    h[j] = checked::add(checked::mul(x, u), checked::mul(y, w));
    v[j] = checked::sub(checked::mul(a_g, w), checked::mul(b_g, u));
  }
}

// Makes every entry above a pivot of the echelon rows `h` lie in [0, pivot).
inline void reduce_above_pivots(std::vector<IntVector>& h, const std::vector<std::size_t>& pivots) {
  for (std::size_t t = 1; t < h.size(); ++t)
    for (std::size_t i = 0; i < t; ++i) {
      const Int q = checked::floor_div(h[i][pivots[t]], h[t][pivots[t]]);
      if (q == 0) continue;
      for (std::size_t j = pivots[t]; j < h[i].size(); ++j)
        h[i][j] = checked::sub(h[i][j], checked::mul(q, h[t][j]));
    }
}

}  // namespace detail

/// Canonical row-style Hermite normal form of the row span of `m`.
///
/// Pivots are positive, each entry above a pivot lies in [0, pivot), and zero
/// rows sit at the bottom. The output keeps the input shape, so an all-zero
/// input comes back unchanged.
///
/// Rows are inserted one at a time into an already reduced echelon form.
inline IntMatrix hermite_normal_form(IntMatrix m) {
  std::vector<IntVector> h;
  std::vector<std::size_t> pivots;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    IntVector v = m.row_vector(r);
    for (;;) {
      const std::size_t c = detail::leading_col(v);
      if (c == v.size()) break;
      const auto at = std::lower_bound(pivots.begin(), pivots.end(), c);
      const auto t = static_cast<std::size_t>(at - pivots.begin());
      if (at == pivots.end() || *at != c) {
        if (v[c] < 0)
          for (auto& x : v) x = checked::neg(x);
        h.insert(h.begin() + static_cast<std::ptrdiff_t>(t), std::move(v));
        pivots.insert(at, c);
        detail::reduce_above_pivots(h, pivots);
        break;
      }
      detail::gcd_combine(h[t], v, c);
      detail::reduce_above_pivots(h, pivots);
    }
  }
  IntMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = h[i][j];
  return out;
}

/// Number of nonzero rows of a matrix already in Hermite normal form.
inline std::size_t hnf_rank(const IntMatrix& h) {
  std::size_t r = 0;
  while (r < h.rows() && !h.row_is_zero(r)) ++r;
  return r;
}

/// Rank over Q.
inline std::size_t rank(const IntMatrix& m) { return hnf_rank(hermite_normal_form(m)); }

/// Smith normal form diagonal d_1 | d_2 | ... of `m`, nonnegative, of length
/// min(rows, cols) with trailing zeros for rank-deficient input. The all-zero
/// matrix yields an empty diagonal.
inline std::vector<Int> smith_normal_form(IntMatrix m) {
  if (m.is_zero()) return {};
  const std::size_t diag_len = std::min(m.rows(), m.cols());
  std::vector<Int> diag;
  diag.reserve(diag_len);
  for (std::size_t t = 0; t < diag_len; ++t) {
    for (;;) {
      // Move the smallest nonzero entry of the trailing block to (t, t).
      std::size_t bi = m.rows(), bj = m.cols();
      Int best = 0;
      for (std::size_t i = t; i < m.rows(); ++i)
        for (std::size_t j = t; j < m.cols(); ++j) {
          const Int v = checked::abs(m(i, j));
          if (v != 0 && (best == 0 || v < best)) {
            best = v;
            bi = i;
            bj = j;
          }
        }
      if (best == 0) break;
      m.swap_rows(t, bi);
      m.swap_cols(t, bj);
      if (m(t, t) < 0) m.negate_row(t);
      const Int pivot = m(t, t);

      bool clean = true;
      for (std::size_t i = t + 1; i < m.rows(); ++i) {
        const Int q = checked::floor_div(m(i, t), pivot);
        m.add_row_multiple(i, t, checked::neg(q));
        if (m(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < m.cols(); ++j) {
        const Int q = checked::floor_div(m(t, j), pivot);
        m.add_col_multiple(j, t, checked::neg(q));
        if (m(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Enforce divisibility into the trailing block.
      std::size_t bad_row = m.rows();
      for (std::size_t i = t + 1; i < m.rows() && bad_row == m.rows(); ++i)
        for (std::size_t j = t + 1; j < m.cols(); ++j)
          if (m(i, j) % pivot != 0) {
            bad_row = i;
            break;
          }
      if (bad_row == m.rows()) break;
      m.add_row_multiple(t, bad_row, 1);
    }
    diag.push_back(m(t, t));
  }
  return diag;
}

/// Solves c * h = v for integer c, where `h` is in Hermite normal form.
/// Returns nullopt when v is not in the integer row span. Coefficients for
/// zero rows of `h` are 0.
inline std::optional<IntVector> solve_in_row_span(const IntMatrix& h,
                                                  std::span<const Int> v) {
  if (v.size() != h.cols())
    throw UsageError("solve_in_row_span: vector length does not match matrix columns");
  IntVector residual(v.begin(), v.end());
  IntVector coeffs(h.rows(), 0);
  std::size_t col = 0;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    while (col < h.cols() && h(i, col) == 0) ++col;
    if (col == h.cols()) break;
    // Columns left of this pivot must already be cleared.
    for (std::size_t j = 0; j < col; ++j)
      if (residual[j] != 0) return std::nullopt;
    const Int pivot = h(i, col);
    if (residual[col] % pivot != 0) return std::nullopt;
    const Int c = residual[col] / pivot;
    coeffs[i] = c;
    if (c != 0)
      for (std::size_t j = col; j < h.cols(); ++j)
        residual[j] = checked::sub_mul(residual[j], c, h(i, j));
    ++col;
  }
  for (Int x : residual)
    if (x != 0) return std::nullopt;
  return coeffs;
}

/// Lower echelon Hermite form of the row span: nonzero rows only, row i has
/// its last nonzero entry (positive pivot) at column p_i with p_0 < p_1 < ...,
/// and each pivot column's entries in later rows are reduced into
/// [0, pivot).
inline IntMatrix lower_hermite_form(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  IntMatrix reversed(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) reversed(i, j) = m(i, cols - 1 - j);
  const IntMatrix h = hermite_normal_form(std::move(reversed));
  const std::size_t r = hnf_rank(h);
  IntMatrix out(r, cols);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = h(r - 1 - i, cols - 1 - j);
  return out;
}

}  // namespace subring
