#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "subring/enumeration.hpp"
#include "subring/lattice.hpp"
#include "subring/records.hpp"
#include "test_support.hpp"

namespace subring {
namespace {

TEST(LatticeFromRows, Examples) {
  const Lattice z2 = lattice_from_rows(2, {{1, 0}, {0, 1}});
  EXPECT_EQ(z2, Lattice::full(2));
  EXPECT_EQ(z2.rank(), 2u);

  const Lattice l = lattice_from_rows(2, {{2, 2}, {2, 6}, {4, 8}});
  EXPECT_EQ(l.basis(), (IntMatrix{{2, 2}, {0, 4}}));
  EXPECT_EQ(l.rank(), 2u);

  const Lattice c = lattice_from_rows(4, {{2, 2, 0, 0}, {0, 0, 3, 3}});
  EXPECT_EQ(c.rank(), 2u);
  EXPECT_EQ(c.corank(), 2u);
}

TEST(LatticeFromRows, LengthMismatchIsUsageError) {
  EXPECT_THROW(lattice_from_rows(3, {{1, 2}}), UsageError);
}

TEST(LatticeFromRows, EqualSpansCompareEqual) {
  EXPECT_EQ(lattice_from_rows(2, {{1, 1}, {0, 2}}), lattice_from_rows(2, {{1, -1}, {2, 0}}));
  EXPECT_NE(lattice_from_rows(2, {{1, 1}, {0, 2}}), lattice_from_rows(2, {{1, 0}, {0, 2}}));
}

TEST(PointwiseProduct, Examples) {
  const IntVector v{4, -2, 7};
  EXPECT_EQ(pointwise_product(IntVector{1, 1, 1}, v), v);
  EXPECT_EQ(pointwise_product(IntVector{1, 2}, IntVector{1, 2}), (IntVector{1, 4}));
  EXPECT_EQ(pointwise_product(IntVector{2, 0, 3}, IntVector{5, 7, 0}), (IntVector{10, 0, 0}));
  EXPECT_THROW(pointwise_product(IntVector{1}, IntVector{1, 2}), UsageError);
}

TEST(IsMultiplicative, Examples) {
  EXPECT_TRUE(is_multiplicative(Lattice::full(3)));
  EXPECT_TRUE(is_multiplicative(lattice_from_rows(2, {{1, 1}, {0, 2}})));
  EXPECT_FALSE(is_multiplicative(lattice_from_rows(2, {{1, 2}, {0, 5}})));
  EXPECT_TRUE(is_multiplicative(Lattice::zero(3)));
}

TEST(IsMultiplicative, InvariantUnderCoordinatePermutation) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<Int> entry(0, 3);
  for (int trial = 0; trial < 500; ++trial) {
    IntMatrix g(2, 3);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 3; ++j) g(i, j) = entry(rng);
    const Lattice l = Lattice::from_generators(g);
    std::vector<std::size_t> perm(3);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    ASSERT_EQ(is_multiplicative(l), is_multiplicative(permute_coordinates(l, perm))) << l;
  }
}

TEST(TorsionSize, Examples) {
  EXPECT_EQ(torsion_size(Lattice::full(4)), 1);
  EXPECT_EQ(torsion_size(lattice_from_rows(2, {{2, 0}, {0, 3}})), 6);
  EXPECT_EQ(torsion_size(lattice_from_rows(4, {{2, 0, 0, 0}, {0, 3, 3, 0}})), 6);
  EXPECT_EQ(torsion_size(Lattice::zero(3)), 1);
  // primitive vector: quotient is torsion-free
  EXPECT_EQ(torsion_size(lattice_from_rows(3, {{1, 2, 3}})), 1);
}

TEST(TorsionSize, InvariantUnderUnimodularRebasing) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<Int> entry(-4, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    IntMatrix g(3, 4);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j) g(i, j) = entry(rng);
    const Lattice l = Lattice::from_generators(g);
    const IntMatrix rebased = multiply(testing::random_unimodular(l.rank(), rng), l.basis());
    Int t = 1;
    for (Int d : smith_normal_form(rebased))
      if (d) t *= d;
    if (l.rank() == 0) t = 1;
    ASSERT_EQ(t, torsion_size(l));
  }
}

TEST(DistinctNonzeroColumns, Examples) {
  EXPECT_EQ(distinct_nonzero_columns(lattice_from_rows(4, {{2, 2, 0, 0}, {0, 0, 3, 3}})), 2u);
  EXPECT_EQ(distinct_nonzero_columns(Lattice::full(5)), 5u);
  EXPECT_EQ(distinct_nonzero_columns(lattice_from_rows(2, {{7, 0}})), 1u);
  EXPECT_EQ(distinct_nonzero_columns(Lattice::zero(3)), 0u);
}

TEST(RigidityCheck, Examples) {
  EXPECT_TRUE(rigidity_check(lattice_from_rows(4, {{2, 2, 0, 0}, {0, 0, 3, 3}})));
  EXPECT_TRUE(rigidity_check(Lattice::full(3)));
  EXPECT_TRUE(rigidity_check(lattice_from_rows(2, {{5, 5}})));
  EXPECT_TRUE(rigidity_check(Lattice::zero(2)));
}

TEST(RigidityCheck, NonMultiplicativeIsPreconditionError) {
  EXPECT_THROW(rigidity_check(lattice_from_rows(2, {{1, 2}, {0, 5}})), PreconditionError);
}

TEST(RigidityCheck, HoldsForEveryEnumeratedMultiplicativeLattice) {
  for (std::size_t ambient = 1; ambient <= 4; ++ambient)
    for (std::size_t k = 0; k <= ambient; ++k)
      for (Int r = 1; r <= 4; ++r)
        for (const auto& l : enumerate_corank_oracle(ambient, k, r, 1)) {
          ASSERT_TRUE(rigidity_check(l)) << l;
          if (k == 1) {
            // a zero column or two identical columns
            const IntMatrix& b = l.basis();
            bool found = false;
            for (std::size_t i = 0; i < b.cols() && !found; ++i) {
              const auto ci = b.column(i);
              if (std::all_of(ci.begin(), ci.end(), [](Int x) { return x == 0; })) found = true;
              for (std::size_t j = i + 1; j < b.cols() && !found; ++j) found = ci == b.column(j);
            }
            ASSERT_TRUE(found) << l;
          }
        }
}

TEST(EchelonLower, Examples) {
  const Lattice full = lattice_from_rows(3, {{1, 1, 0}, {0, 2, 0}, {0, 0, 3}});
  const IntMatrix e = echelon_lower(full);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) EXPECT_EQ(e(i, j), 0);
  EXPECT_EQ(Lattice::from_generators(e), full);

  EXPECT_EQ(echelon_lower(lattice_from_rows(2, {{0, 5}})), (IntMatrix{{0, 5}}));
  EXPECT_EQ(echelon_lower(lattice_from_rows(4, {{2, 2, 0, 0}, {0, 0, 3, 3}})),
            (IntMatrix{{2, 2, 0, 0}, {0, 0, 3, 3}}));
}

TEST(EchelonLower, ShapeAndSpanOnRandomLattices) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<Int> entry(-5, 5);
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t ambient = dim(rng);
    std::uniform_int_distribution<std::size_t> rows_d(1, ambient);
    IntMatrix g(rows_d(rng), ambient);
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < ambient; ++j) g(i, j) = entry(rng);
    const Lattice l = Lattice::from_generators(g);
    const IntMatrix e = echelon_lower(l);
    ASSERT_EQ(e.rows(), l.rank());
    for (std::size_t i = 0; i < e.rows(); ++i)
      for (std::size_t j = 0; j < e.cols(); ++j)
        if (j > i + l.corank()) { ASSERT_EQ(e(i, j), 0); }
    ASSERT_EQ(Lattice::from_generators(e), l);
  }
}

TEST(LatticeJson, RoundTrip) {
  const Lattice l = lattice_from_rows(4, {{2, 2, 0, 0}, {0, 0, 3, 3}});
  const auto j = to_json(l);
  EXPECT_EQ(j.dump(), R"({"ambient":4,"rank":2,"basis":[[2,2,0,0],[0,0,3,3]]})");
  EXPECT_EQ(lattice_from_json(nlohmann::json::parse(j.dump())), l);
  EXPECT_EQ(lattice_from_json(nlohmann::json::parse(to_json(Lattice::zero(2)).dump())), Lattice::zero(2));
}

}  // namespace
}  // namespace subring
