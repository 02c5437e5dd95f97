#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "subring/checked_int.hpp"
#include "subring/int_matrix.hpp"
#include "subring/lattice.hpp"
#include "subring/normal_form.hpp"
#include "subring/parallel.hpp"
#include "subring/partition.hpp"

namespace subring {

struct EnumerationOptions {
  std::size_t jobs = 1;
  SearchBudget budget{};
};

namespace detail {

struct PivotRow {
  const IntVector* row;
  std::size_t pivot_col;
};

// Membership test for a set of echelon rows. `rows` must be listed so that
// each row's pivot column is zero in every row listed after it. This is the
// search-time pruning test; final results are rechecked through the Hermite
// route in `is_multiplicative`.
inline bool in_echelon_span(IntVector v, std::span<const PivotRow> rows) {
  for (const auto& pr : rows) {
    const IntVector& row = *pr.row;
    const Int pivot = row[pr.pivot_col];
    const Int x = v[pr.pivot_col];
    if (x == 0) continue;
    if (x % pivot != 0) return false;
    const Int c = x / pivot;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (row[j] != 0) v[j] = checked::sub_mul(v[j], c, row[j]);
  }
  return std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; });
}

// Ordered factorizations of r into `parts` positive factors, lexicographic.
inline std::vector<std::vector<Int>> ordered_factorizations(Int r, std::size_t parts) {
  std::vector<std::vector<Int>> out;
  std::vector<Int> cur;
  auto rec = [&](auto&& self, Int rest, std::size_t left) -> void {
    if (left == 1) {
      cur.push_back(rest);
      out.push_back(cur);
      cur.pop_back();
      return;
    }
    for (Int d = 1; d <= rest; ++d) {
      if (rest % d != 0) continue;
      cur.push_back(d);
      self(self, rest / d, left - 1);
      cur.pop_back();
    }
  };
  if (parts > 0) rec(rec, r, parts);
  return out;
}

// Increment an odometer whose digit t runs over [0, limits[t]). Returns false
// after the last configuration.
inline bool odometer_next(std::vector<Int>& digits, const std::vector<Int>& limits) {
  for (std::size_t t = digits.size(); t-- > 0;) {
    if (++digits[t] < limits[t]) return true;
    digits[t] = 0;
  }
  return false;
}

inline void sort_unique(std::vector<Lattice>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Post-hoc check of a search hit through the Hermite/Smith routes.
inline Lattice confirm_hit(const IntMatrix& rows, std::size_t expected_rank, Int r) {
  Lattice l = Lattice::from_generators(rows);
  if (l.rank() != expected_rank || !is_multiplicative(l) || torsion_size(l) != r)
    throw InternalError("search hit failed re-verification: " + [&] {
      std::ostringstream os;
      os << rows;
      return os.str();
    }());
  return l;
}

}  // namespace detail

/// All full-rank multiplicative sublattices of Z^n of index r, sorted by
/// canonical basis.
///
/// Scans upper-triangular Hermite bases shard by shard over the diagonal
/// (ordered factorizations of r). Rows are built bottom-up; the last rows of
/// a Hermite basis span L intersected with a coordinate subring, so every
/// suffix must itself be multiplicative, which prunes the scan.
inline std::vector<Lattice> enumerate_full_rank_multiplicative(std::size_t n, Int r,
                                                               const EnumerationOptions& opts = {}) {
  if (n == 0) throw UsageError("enumerate_full_rank_multiplicative: n must be >= 1");
  if (r < 1) throw UsageError("enumerate_full_rank_multiplicative: r must be >= 1");
  const auto diagonals = detail::ordered_factorizations(r, n);
  StepCounter counter(opts.budget);

  auto shard = [&](std::size_t s) {
    const std::vector<Int>& diag = diagonals[s];
    std::vector<Lattice> hits;
    std::vector<IntVector> rows(n, IntVector(n, 0));

    auto rec = [&](auto&& self, std::size_t i) -> void {
      // rows i+1..n-1 are fixed; choose row i.
      std::vector<Int> limits(diag.begin() + static_cast<std::ptrdiff_t>(i) + 1, diag.end());
      std::vector<Int> digits(limits.size(), 0);
      IntVector& row = rows[i];
      std::fill(row.begin(), row.end(), 0);
      row[i] = diag[i];
      std::vector<detail::PivotRow> span;
      for (std::size_t t = i; t < n; ++t) span.push_back({&rows[t], t});
      do {
        counter.tick();
        for (std::size_t t = 0; t < digits.size(); ++t) row[i + 1 + t] = digits[t];
        bool closed = true;
        for (std::size_t t = i; t < n && closed; ++t)
          closed = detail::in_echelon_span(pointwise_product(row, rows[t]), span);
        if (!closed) continue;
        if (i == 0) {
          hits.push_back(detail::confirm_hit(IntMatrix::from_rows(n, rows), n, r));
        } else {
          self(self, i - 1);
        }
      } while (detail::odometer_next(digits, limits));
    };
    rec(rec, n - 1);
    return hits;
  };

  auto per_shard = run_sharded<std::vector<Lattice>>(diagonals.size(), opts.jobs, shard);
  std::vector<Lattice> out;
  for (auto& v : per_shard) std::move(v.begin(), v.end(), std::back_inserter(out));
  detail::sort_unique(out);
  return out;
}

/// Number of full-rank multiplicative sublattices of Z^n of index r, with
/// phi_0(1) = 1 and phi_0(r) = 0 for r > 1.
inline Int phi(std::size_t n, Int r, const EnumerationOptions& opts = {}) {
  if (r < 1) throw UsageError("phi: r must be >= 1");
  if (n == 0) return r == 1 ? 1 : 0;
  return static_cast<Int>(enumerate_full_rank_multiplicative(n, r, opts).size());
}

/// Number of subrings with identity of Z^n of index r.
inline Int f_count(std::size_t n, Int r, const EnumerationOptions& opts = {}) {
  if (n == 0) throw UsageError("f_count: n must be >= 1");
  const auto all = enumerate_full_rank_multiplicative(n, r, opts);
  return static_cast<Int>(std::count_if(all.begin(), all.end(), contains_identity));
}

/// Exhaustive co-rank oracle: every multiplicative sublattice of Z^ambient of
/// co-rank k whose quotient has torsion of size r, found without reference to
/// acceptable maps.
///
/// The scan runs over lower echelon bases (row i ends in a positive pivot at
/// column p_i, p_0 < p_1 < ...; these satisfy x_ij = 0 for j - i > k). Entries
/// in earlier pivot columns are reduced modulo that pivot; every other entry,
/// pivots included, ranges over [0, bound_multiplier * r]. Each prefix of such
/// a basis spans L intersected with a coordinate subring, hence must be
/// multiplicative on its own; that prunes the scan. The pivot product is a
/// multiple of the torsion size, which prunes completed bases.
inline std::vector<Lattice> enumerate_corank_oracle(std::size_t ambient, std::size_t corank, Int r,
                                                    Int bound_multiplier,
                                                    const EnumerationOptions& opts = {}) {
  if (corank > ambient) throw UsageError("enumerate_corank_oracle: corank exceeds ambient dimension");
  if (r < 1) throw UsageError("enumerate_corank_oracle: r must be >= 1");
  if (bound_multiplier < 1) throw UsageError("enumerate_corank_oracle: bound multiplier must be >= 1");
  const std::size_t m = ambient - corank;
  if (m == 0) {
    std::vector<Lattice> out;
    if (r == 1) out.push_back(Lattice::zero(ambient));
    return out;
  }
  const Int bound = checked::mul(bound_multiplier, r);

  // Shards: pivot column set x first pivot value.
  std::vector<std::vector<std::size_t>> pivot_sets;
  {
    std::vector<std::size_t> cur;
    auto rec = [&](auto&& self, std::size_t start) -> void {
      if (cur.size() == m) {
        pivot_sets.push_back(cur);
        return;
      }
      for (std::size_t c = start; c + (m - cur.size()) <= ambient; ++c) {
        cur.push_back(c);
        self(self, c + 1);
        cur.pop_back();
      }
    };
    rec(rec, 0);
  }
  const std::size_t shard_count = pivot_sets.size() * static_cast<std::size_t>(bound);
  StepCounter counter(opts.budget);

  auto shard = [&](std::size_t s) {
    const std::vector<std::size_t>& pivots = pivot_sets[s / static_cast<std::size_t>(bound)];
    const Int first_pivot = static_cast<Int>(s % static_cast<std::size_t>(bound)) + 1;
    std::vector<Lattice> hits;
    std::vector<IntVector> rows(m, IntVector(ambient, 0));
    // reduction modulus for each column; bound + 1 for non-pivot columns
    std::vector<Int> col_limit(ambient, bound + 1);

    auto rec = [&](auto&& self, std::size_t i) -> void {
      const std::size_t p = pivots[i];
      std::vector<Int> limits(col_limit.begin(), col_limit.begin() + static_cast<std::ptrdiff_t>(p));
      limits.push_back(i == 0 ? 1 : bound);  // pivot digit is value - 1
      std::vector<Int> digits(limits.size(), 0);
      IntVector& row = rows[i];
      std::vector<detail::PivotRow> span;
      for (std::size_t t = i + 1; t-- > 0;) span.push_back({&rows[t], pivots[t]});
      do {
        counter.tick();
        std::fill(row.begin(), row.end(), 0);
        for (std::size_t c = 0; c < p; ++c) row[c] = digits[c];
        row[p] = (i == 0 ? first_pivot : digits[p] + 1);
        bool closed = true;
        for (std::size_t t = 0; t <= i && closed; ++t)
          closed = detail::in_echelon_span(pointwise_product(row, rows[t]), span);
        if (!closed) continue;
        if (i + 1 == m) {
          Int pivot_product = 1;
          for (std::size_t t = 0; t < m; ++t) pivot_product = checked::mul(pivot_product, rows[t][pivots[t]]);
          if (pivot_product % r != 0) continue;
          Lattice l = Lattice::from_generators(IntMatrix::from_rows(ambient, rows));
          if (torsion_size(l) != r) continue;
          if (l.rank() != m || !is_multiplicative(l))
            throw InternalError("co-rank oracle hit failed re-verification");
          hits.push_back(std::move(l));
        } else {
          col_limit[p] = row[p];
          self(self, i + 1);
          col_limit[p] = bound + 1;
        }
      } while (detail::odometer_next(digits, limits));
      std::fill(row.begin(), row.end(), 0);
    };
    rec(rec, 0);
    return hits;
  };

  auto per_shard = run_sharded<std::vector<Lattice>>(shard_count, opts.jobs, shard);
  std::vector<Lattice> out;
  for (auto& v : per_shard) std::move(v.begin(), v.end(), std::back_inserter(out));
  detail::sort_unique(out);
  return out;
}

/// stirling2(n+k+1, n+1) * phi(n, r).
inline Int phi_corank_formula(std::size_t n, std::size_t k, Int r, const EnumerationOptions& opts = {}) {
  return checked::mul(stirling2(n + k + 1, n + 1), phi(n, r, opts));
}

struct Decomposition {
  AcceptableMap map;
  Lattice base;
};

/// Splits a multiplicative lattice into the unique ordered acceptable map g
/// and full-rank multiplicative base L' with g(L') = l. The blocks of g are
/// the positions of each distinct nonzero column of the canonical basis,
/// numbered by first appearance; L' is spanned by those distinct columns.
inline Decomposition decompose(const Lattice& l) {
  if (!is_multiplicative(l)) throw PreconditionError("decompose: lattice is not multiplicative");
  const IntMatrix& b = l.basis();
  const std::size_t m = l.rank();
  std::vector<IntVector> classes;
  std::vector<std::size_t> assignment(l.ambient_dim(), 0);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    IntVector col = b.column(j);
    if (std::all_of(col.begin(), col.end(), [](Int x) { return x == 0; })) continue;
    auto it = std::find(classes.begin(), classes.end(), col);
    if (it == classes.end()) {
      classes.push_back(std::move(col));
      assignment[j] = classes.size();
    } else {
      assignment[j] = static_cast<std::size_t>(it - classes.begin()) + 1;
    }
  }
  if (classes.size() != m)
    throw InternalError("decompose: distinct nonzero column count differs from rank");
  IntMatrix base_gen(m, m);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t i = 0; i < m; ++i) base_gen(i, c) = classes[c][i];
  Lattice base = Lattice::from_generators(base_gen);
  if (!base.is_full_rank()) throw InternalError("decompose: distinct columns are dependent");
  AcceptableMap g(m, std::move(assignment));
  if (apply_map(g, base) != l) throw InternalError("decompose: image does not reproduce the lattice");
  return {std::move(g), std::move(base)};
}

/// Images g(L) over every ordered map g : Z^n -> Z^(n+k) and every full-rank
/// multiplicative L of index r, sorted, duplicates kept.
inline std::vector<Lattice> enumerate_corank_by_maps(std::size_t n, std::size_t k, Int r,
                                                     const EnumerationOptions& opts = {}) {
  std::vector<Lattice> bases;
  if (n == 0) {
    if (r == 1) bases.push_back(Lattice::full(0));
  } else {
    bases = enumerate_full_rank_multiplicative(n, r, opts);
  }
  std::vector<Lattice> out;
  for (const auto& g : enumerate_ordered_maps(n, n + k))
    for (const auto& l : bases) out.push_back(apply_map(g, l));
  std::sort(out.begin(), out.end());
  return out;
}

struct VerificationReport {
  std::size_t n = 0;
  std::size_t k = 0;
  Int r = 1;
  Int bound_multiplier = 1;
  Int oracle_count = 0;
  Int formula_count = 0;
  Int stirling_factor = 0;
  Int phi_base = 0;
  std::size_t witnesses_checked = 0;
  bool pass = false;
  std::string failure;                    // empty on pass
  std::optional<Lattice> counterexample;  // first offending lattice, if any
};

/// Checks the co-rank identity for one (n, k, r) cell against the oracle:
/// counts agree, every oracle lattice is rigid, decomposes into an ordered
/// map and a base whose image round-trips, and has torsion equal to the
/// base's index r.
inline VerificationReport verify_main_theorem(std::size_t n, std::size_t k, Int r, Int bound_multiplier,
                                              const EnumerationOptions& opts = {}) {
  VerificationReport rep;
  rep.n = n;
  rep.k = k;
  rep.r = r;
  rep.bound_multiplier = bound_multiplier;
  const auto oracle = enumerate_corank_oracle(n + k, k, r, bound_multiplier, opts);
  rep.oracle_count = static_cast<Int>(oracle.size());
  rep.stirling_factor = stirling2(n + k + 1, n + 1);
  rep.phi_base = phi(n, r, opts);
  rep.formula_count = checked::mul(rep.stirling_factor, rep.phi_base);

  auto fail = [&](std::string why, const Lattice& witness) {
    if (rep.failure.empty()) {
      rep.failure = std::move(why);
      rep.counterexample = witness;
    }
  };

  for (const auto& w : oracle) {
    try {
      if (!rigidity_check(w)) {
        fail("rigidity: distinct nonzero columns differ from rank", w);
        continue;
      }
      const Decomposition d = decompose(w);
      if (!d.map.is_ordered() || d.base.ambient_dim() != n || !d.base.is_full_rank() ||
          !is_multiplicative(d.base)) {
        fail("decomposition produced a malformed pair", w);
        continue;
      }
      if (apply_map(d.map, d.base) != w) {
        fail("decomposition does not round-trip", w);
        continue;
      }
      if (torsion_size(w) != torsion_size(d.base) || torsion_size(d.base) != r) {
        fail("torsion size differs from base index", w);
        continue;
      }
    } catch (const InternalError& e) {
      fail(e.what(), w);
      continue;
    }
    ++rep.witnesses_checked;
  }

  if (rep.oracle_count != rep.formula_count && rep.failure.empty()) {
    // Find a lattice on one side only.
    auto images = enumerate_corank_by_maps(n, k, r, opts);
    images.erase(std::unique(images.begin(), images.end()), images.end());
    std::vector<Lattice> diff;
    std::set_symmetric_difference(oracle.begin(), oracle.end(), images.begin(), images.end(),
                                  std::back_inserter(diff));
    rep.failure = "oracle count " + std::to_string(rep.oracle_count) + " differs from formula " +
                  std::to_string(rep.formula_count);
    if (!diff.empty()) rep.counterexample = diff.front();
  }
  rep.pass = rep.failure.empty() && rep.oracle_count == rep.formula_count &&
             rep.witnesses_checked == oracle.size();
  return rep;
}

}  // namespace subring
