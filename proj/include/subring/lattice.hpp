#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <ostream>
#include <set>
#include <span>
#include <vector>

#include "subring/checked_int.hpp"
#include "subring/int_matrix.hpp"
#include "subring/normal_form.hpp"

namespace subring {

/// A sublattice of Z^ambient, stored by its canonical Hermite basis.
///
/// `basis()` holds only the nonzero HNF rows, so it is rank x ambient and may
/// have zero rows (the zero lattice). Equal lattices compare equal.
class Lattice {
 public:
  /// The full lattice Z^n.
  static Lattice full(std::size_t n) { return Lattice(n, IntMatrix::identity(n)); }

  static Lattice zero(std::size_t n) { return Lattice(n, IntMatrix(0, n)); }

  /// Lattice spanned by the rows of `generators`.
  static Lattice from_generators(const IntMatrix& generators) {
    const IntMatrix h = hermite_normal_form(generators);
    return Lattice(generators.cols(), h.top_rows(hnf_rank(h)));
  }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t rank() const { return basis_.rows(); }
  std::size_t corank() const { return ambient_ - basis_.rows(); }
  bool is_full_rank() const { return rank() == ambient_; }
  const IntMatrix& basis() const { return basis_; }

  bool contains(std::span<const Int> v) const {
    return solve_in_row_span(basis_, v).has_value();
  }

  friend bool operator==(const Lattice&, const Lattice&) = default;
  friend std::strong_ordering operator<=>(const Lattice& a, const Lattice& b) {
    if (auto c = a.ambient_ <=> b.ambient_; c != 0) return c;
    return a.basis_ <=> b.basis_;
  }

 private:
  Lattice(std::size_t ambient, IntMatrix basis) : ambient_(ambient), basis_(std::move(basis)) {}

  std::size_t ambient_ = 0;
  IntMatrix basis_;
};

inline std::ostream& operator<<(std::ostream& os, const Lattice& l) {
  return os << "Lattice(ambient=" << l.ambient_dim() << ", rank=" << l.rank()
            << ", basis=" << l.basis() << ')';
}

inline Lattice lattice_from_rows(std::size_t ambient_dim, std::span<const IntVector> rows) {
  for (const auto& r : rows)
    if (r.size() != ambient_dim)
      throw UsageError("lattice_from_rows: row length does not match ambient dimension");
  return Lattice::from_generators(IntMatrix::from_rows(ambient_dim, rows));
}

inline Lattice lattice_from_rows(std::size_t ambient_dim, std::initializer_list<IntVector> rows) {
  return lattice_from_rows(ambient_dim, std::span<const IntVector>(rows.begin(), rows.size()));
}

inline IntVector pointwise_product(std::span<const Int> u, std::span<const Int> v) {
  if (u.size() != v.size()) throw UsageError("pointwise_product: length mismatch");
  IntVector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = checked::mul(u[i], v[i]);
  return out;
}

/// Closure under coordinatewise product. Checking basis pairs suffices since
/// the product is bilinear.
inline bool is_multiplicative(const Lattice& l) {
  const IntMatrix& b = l.basis();
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = i; j < b.rows(); ++j)
      if (!l.contains(pointwise_product(b.row(i), b.row(j)))) return false;
  return true;
}

/// Size of the torsion subgroup of Z^ambient / L: product of the nonzero
/// Smith invariants. 1 for the zero lattice.
inline Int torsion_size(const Lattice& l) {
  Int out = 1;
  for (Int d : smith_normal_form(l.basis()))
    if (d != 0) out = checked::mul(out, d);
  return out;
}

/// Distinct nonzero columns of an arbitrary matrix.
inline std::size_t distinct_nonzero_columns(const IntMatrix& m) {
  std::set<IntVector> seen;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    IntVector c = m.column(j);
    if (std::any_of(c.begin(), c.end(), [](Int x) { return x != 0; })) seen.insert(std::move(c));
  }
  return seen.size();
}

inline std::size_t distinct_nonzero_columns(const Lattice& l) {
  return distinct_nonzero_columns(l.basis());
}

/// A multiplicative lattice of rank m has exactly m distinct nonzero columns
/// in any basis. Throws PreconditionError for non-multiplicative input.
inline bool rigidity_check(const Lattice& l) {
  if (!is_multiplicative(l))
    throw PreconditionError("rigidity_check: lattice is not multiplicative");
  return distinct_nonzero_columns(l) == l.rank();
}

/// Basis matrix of `l` with x_ij = 0 whenever j - i > corank.
inline IntMatrix echelon_lower(const Lattice& l) {
  IntMatrix out = lower_hermite_form(l.basis());
  const std::size_t k = l.corank();
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = i + k + 1; j < out.cols(); ++j)
      if (out(i, j) != 0) throw InternalError("echelon_lower: shape violated");
  return out;
}

/// Image of `l` under the coordinate permutation sending coordinate j to
/// position perm[j] (0-based).
inline Lattice permute_coordinates(const Lattice& l, std::span<const std::size_t> perm) {
  if (perm.size() != l.ambient_dim()) throw UsageError("permute_coordinates: size mismatch");
  const IntMatrix& b = l.basis();
  IntMatrix out(b.rows(), b.cols());
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, perm[j]) = b(i, j);
  return Lattice::from_generators(out);
}

/// Whether the all-ones vector lies in `l`.
inline bool contains_identity(const Lattice& l) {
  return l.contains(IntVector(l.ambient_dim(), 1));
}

}  // namespace subring
