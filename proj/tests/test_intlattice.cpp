// Integer lattice layer: Smith normal form against the determinantal-divisor
// characterization (products of the diagonal equal gcds of k-by-k minors),
// transform unimodularity via exact determinants, and the derived lattice
// utilities.  The Cayley-table invariant-factor oracle is cross-checked here
// on groups of known shape before later suites rely on it.

#include <gtest/gtest.h>

#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "gammaspec/intlattice.hpp"
#include "support/oracles.hpp"

namespace {

using namespace gammaspec;

IntMatrix from_rows(const std::vector<std::vector<int64_t>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  IntMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
  return m;
}

// Fraction-free exact determinant; intermediate values are minors, held in
// 128-bit to keep the division steps exact and overflow-free at test sizes.
int64_t det_exact(const IntMatrix& in) {
  const int n = in.rows;
  std::vector<__int128> m(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[static_cast<size_t>(i) * n + j] = in.at(i, j);
  auto at = [&](int i, int j) -> __int128& {
    return m[static_cast<size_t>(i) * n + j];
  };
  __int128 prev = 1;
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    if (at(k, k) == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i)
        if (at(i, k) != 0) {
          swap_row = i;
          break;
        }
      if (swap_row < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(swap_row, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
    prev = at(k, k);
  }
  return n == 0 ? sign : sign * static_cast<int64_t>(at(n - 1, n - 1));
}

// gcd over the absolute values of every k-by-k minor; 0 when all vanish.
int64_t minor_gcd(const IntMatrix& a, int k) {
  std::vector<int> ri(k), ci(k);
  int64_t g = 0;
  std::function<void(int, int)> pick_cols = [&](int depth, int start) {
    if (depth == k) {
      IntMatrix sub(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub.at(i, j) = a.at(ri[i], ci[j]);
      g = std::gcd(g, std::abs(det_exact(sub)));
      return;
    }
    for (int c = start; c <= a.cols - (k - depth); ++c) {
      ci[depth] = c;
      pick_cols(depth + 1, c + 1);
    }
  };
  std::function<void(int, int)> pick_rows = [&](int depth, int start) {
    if (depth == k) {
      pick_cols(0, 0);
      return;
    }
    for (int r = start; r <= a.rows - (k - depth); ++r) {
      ri[depth] = r;
      pick_rows(depth + 1, r + 1);
    }
  };
  pick_rows(0, 0);
  return g;
}

void expect_smith_sound(const IntMatrix& a) {
  const auto s = smith_normal_form(a);
  EXPECT_EQ(matmul(matmul(s.u, a), s.v), s.d);
  EXPECT_EQ(std::abs(det_exact(s.u)), 1);
  EXPECT_EQ(std::abs(det_exact(s.v)), 1);
  for (int i = 0; i < s.d.rows; ++i)
    for (int j = 0; j < s.d.cols; ++j)
      if (i != j) {
        EXPECT_EQ(s.d.at(i, j), 0);
      }
  int64_t running = 1;
  for (size_t i = 0; i < s.diagonal.size(); ++i) {
    EXPECT_GE(s.diagonal[i], 0);
    if (i + 1 < s.diagonal.size()) {
      if (s.diagonal[i] == 0)
        EXPECT_EQ(s.diagonal[i + 1], 0) << "nonzero after zero at " << i;
      else
        EXPECT_EQ(s.diagonal[i + 1] % s.diagonal[i], 0)
            << "diagonal not a divisibility chain at " << i;
    }
    // Determinantal divisors: d_1 ... d_k equals the gcd of k-by-k minors.
    running *= s.diagonal[i];
    EXPECT_EQ(std::abs(running), minor_gcd(a, static_cast<int>(i) + 1))
        << "determinantal divisor mismatch at k=" << i + 1;
  }
}

TEST(Smith, FrozenSmallForms) {
  const auto s1 = smith_normal_form(from_rows({{4, 0}, {0, 6}}));
  EXPECT_EQ(s1.diagonal, (std::vector<int64_t>{2, 12}));
  const auto s2 = smith_normal_form(from_rows({{2, 0}, {0, 3}}));
  EXPECT_EQ(s2.diagonal, (std::vector<int64_t>{1, 6}));
  const auto s3 = smith_normal_form(from_rows({{6, 4}, {8, 10}}));
  EXPECT_EQ(s3.diagonal, (std::vector<int64_t>{2, 14}));
  const auto s4 = smith_normal_form(from_rows({{1, 2, 3}, {4, 5, 6}}));
  EXPECT_EQ(s4.diagonal, (std::vector<int64_t>{1, 3}));
  EXPECT_EQ(s4.rank, 2);
  const auto s5 = smith_normal_form(IntMatrix(2, 2));
  EXPECT_EQ(s5.diagonal, (std::vector<int64_t>{0, 0}));
  EXPECT_EQ(s5.rank, 0);
  expect_smith_sound(from_rows({{4, 0}, {0, 6}}));
  expect_smith_sound(from_rows({{6, 4}, {8, 10}}));
}

TEST(Smith, RandomMatricesMatchMinorGcds) {
  std::mt19937 rng(20240817);
  std::uniform_int_distribution<int> dim(1, 5), entry(-9, 9);
  for (int trial = 0; trial < 200; ++trial) {
    IntMatrix a(dim(rng), dim(rng));
    for (int i = 0; i < a.rows; ++i)
      for (int j = 0; j < a.cols; ++j) a.at(i, j) = entry(rng);
    expect_smith_sound(a);
  }
}

TEST(Smith, DegenerateShapes) {
  expect_smith_sound(IntMatrix(0, 0));
  expect_smith_sound(IntMatrix(0, 3));
  expect_smith_sound(IntMatrix(3, 0));
  expect_smith_sound(from_rows({{0, 0, 7}}));
}

TEST(Lattice, BasisPreservesRowSpan) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> entry(-6, 6);
  for (int trial = 0; trial < 50; ++trial) {
    IntMatrix a(4, 3);
    for (int i = 0; i < a.rows; ++i)
      for (int j = 0; j < a.cols; ++j) a.at(i, j) = entry(rng);
    const auto b = lattice_basis(a);
    EXPECT_LE(b.rows, 3);
    for (int i = 0; i < a.rows; ++i) {
      std::vector<int64_t> v(a.cols);
      for (int j = 0; j < a.cols; ++j) v[j] = a.at(i, j);
      EXPECT_TRUE(solve_row(b, v).has_value());
    }
    for (int i = 0; i < b.rows; ++i) {
      std::vector<int64_t> v(b.cols);
      for (int j = 0; j < b.cols; ++j) v[j] = b.at(i, j);
      EXPECT_TRUE(solve_row(a, v).has_value());
    }
  }
}

TEST(Lattice, SolveAndMembership) {
  const auto basis = from_rows({{2, 0}, {0, 3}});
  const auto y = solve_row(basis, {4, -9});
  ASSERT_TRUE(y.has_value());
  EXPECT_EQ(*y, (std::vector<int64_t>{2, -3}));
  EXPECT_FALSE(solve_row(basis, {1, 0}).has_value());
  EXPECT_FALSE(solve_row(basis, {2, 1}).has_value());
  EXPECT_TRUE(lattice_contains(from_rows({{6, 4}, {8, 10}}), {14, 14}));
  EXPECT_TRUE(lattice_contains(from_rows({{6, 4}, {8, 10}}), {4, -2}));
  EXPECT_FALSE(lattice_contains(from_rows({{2, 4}}), {1, 2}));
  EXPECT_THROW(solve_row(basis, {1, 2, 3}), InvalidInput);
}

TEST(Lattice, KernelRowsAnnihilate) {
  const auto k1 = kernel_basis(from_rows({{2}, {4}}));
  ASSERT_EQ(k1.rows, 1);
  EXPECT_EQ(std::abs(k1.at(0, 0) * 2 + k1.at(0, 1) * 4), 0);
  EXPECT_TRUE(lattice_contains(k1, {2, -1}));

  std::mt19937 rng(99);
  std::uniform_int_distribution<int> entry(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    IntMatrix a(4, 2);
    for (int i = 0; i < a.rows; ++i)
      for (int j = 0; j < a.cols; ++j) a.at(i, j) = entry(rng);
    const auto ker = kernel_basis(a);
    const auto s = smith_normal_form(a);
    EXPECT_EQ(ker.rows, a.rows - s.rank);
    if (ker.rows > 0) {
      const auto image = matmul(ker, a);
      for (const auto e : image.a) EXPECT_EQ(e, 0);
    }
  }
}

TEST(Lattice, PreimageMatchesBruteScan) {
  const auto p1 = preimage_lattice(from_rows({{2}}), from_rows({{4}}));
  EXPECT_TRUE(lattice_contains(p1, {2}));
  EXPECT_FALSE(lattice_contains(p1, {1}));

  const auto m = from_rows({{2, 0}, {0, 3}});
  const auto l = from_rows({{6, 0}, {0, 6}});
  const auto pre = preimage_lattice(m, l);
  for (int64_t x = -4; x <= 4; ++x)
    for (int64_t y = -4; y <= 4; ++y) {
      const std::vector<int64_t> v{x, y};
      const bool inside = (2 * x) % 6 == 0 && (3 * y) % 6 == 0;
      EXPECT_EQ(lattice_contains(pre, v), inside) << x << "," << y;
    }
  EXPECT_THROW(preimage_lattice(from_rows({{1, 2}}), from_rows({{1}})),
               InvalidInput);
}

TEST(Quotients, CanonicalFormAndReduction) {
  const auto q1 = quotient_structure(from_rows({{2, 0}, {0, 4}}), 2);
  EXPECT_EQ(q1.invariant_factors, (std::vector<int64_t>{2, 4}));
  EXPECT_EQ(q1.free_rank, 0);
  EXPECT_TRUE(q1.finite());
  EXPECT_EQ(q1.order(), 8);

  const auto q2 = quotient_structure(from_rows({{2, 0}, {0, 3}}), 2);
  EXPECT_EQ(q2.invariant_factors, (std::vector<int64_t>{6}));

  const auto q3 = quotient_structure(IntMatrix(0, 3), 3);
  EXPECT_TRUE(q3.invariant_factors.empty());
  EXPECT_EQ(q3.free_rank, 3);
  EXPECT_FALSE(q3.finite());
  EXPECT_EQ(q3.order(), 0);

  const auto q4 = quotient_structure(from_rows({{2, 0}}), 2);
  EXPECT_EQ(q4.invariant_factors, (std::vector<int64_t>{2}));
  EXPECT_EQ(q4.free_rank, 1);

  // Reduction is a homomorphism onto the canonical coordinates and separates
  // exactly the cosets: the image count over one exponent box is the order.
  const auto relations = from_rows({{4, 2}, {0, 6}});
  const auto q = quotient_structure(relations, 2);
  std::set<std::vector<int64_t>> images;
  const int64_t f =
      q.invariant_factors.empty() ? 1 : q.invariant_factors.back();
  for (int64_t x = 0; x < f; ++x)
    for (int64_t y = 0; y < f; ++y)
      images.insert(q.reduce({x, y}));
  EXPECT_EQ(static_cast<int64_t>(images.size()), q.order());
  for (int64_t x = -3; x <= 3; ++x)
    for (int64_t y = -3; y <= 3; ++y) {
      const auto a = q.reduce({x, y});
      const auto b = q.reduce({x + 4, y + 2});
      EXPECT_EQ(a, b);  // shifting by a relation row fixes the coset
    }
}

TEST(Quotients, RejectsMismatchedWidth) {
  EXPECT_THROW(quotient_structure(from_rows({{1, 2, 3}}), 2), InvalidInput);
}

TEST(Quotients, SublatticeQuotients) {
  const auto whole = IntMatrix::identity(2);
  EXPECT_EQ(lattice_quotient(whole, from_rows({{2, 0}, {0, 3}}))
                .invariant_factors,
            (std::vector<int64_t>{6}));
  EXPECT_EQ(lattice_quotient(from_rows({{2, 0}, {0, 2}}),
                             from_rows({{4, 0}, {0, 4}}))
                .invariant_factors,
            (std::vector<int64_t>{2, 2}));
  EXPECT_THROW(lattice_quotient(from_rows({{2, 0}, {0, 2}}),
                                from_rows({{1, 1}})),
               InvalidInput);
}

TEST(GroupOracle, KnownShapesAndGroupLawChecks) {
  using oracle::invariant_factors_brute;
  using oracle::product_group_table;
  EXPECT_EQ(invariant_factors_brute(product_group_table({12}), 12),
            (std::vector<int64_t>{12}));
  EXPECT_EQ(invariant_factors_brute(product_group_table({2, 4}), 8),
            (std::vector<int64_t>{2, 4}));
  EXPECT_EQ(invariant_factors_brute(product_group_table({2, 3}), 6),
            (std::vector<int64_t>{6}));
  EXPECT_EQ(invariant_factors_brute(product_group_table({2, 2}), 4),
            (std::vector<int64_t>{2, 2}));
  EXPECT_EQ(invariant_factors_brute(product_group_table({4, 6}), 24),
            (std::vector<int64_t>{2, 12}));
  EXPECT_EQ(invariant_factors_brute(product_group_table({1}), 1),
            (std::vector<int64_t>{}));

  // OR is a monoid but not a group; the oracle must refuse it.
  EXPECT_THROW(invariant_factors_brute({0, 1, 1, 1}, 2), std::runtime_error);
}

// Disguise a diagonal presentation by unimodular transforms; the quotient
// group is unchanged, and the two independent structure computations
// (matrix pipeline vs Cayley-table splitting) must agree on it.
TEST(Quotients, AgreesWithCayleyOracleThroughDisguise) {
  std::mt19937 rng(424242);
  std::uniform_int_distribution<int> small(-2, 2);
  const std::vector<std::vector<int>> shapes = {
      {2, 4}, {4, 6}, {2, 2}, {6, 10}, {2, 3, 4}, {8}, {3, 9}};
  for (const auto& shape : shapes) {
    const int g = static_cast<int>(shape.size());
    IntMatrix rel(g, g);
    for (int i = 0; i < g; ++i) rel.at(i, i) = shape[i];
    for (int step = 0; step < 12; ++step) {
      const int i = static_cast<int>(rng() % g), j = static_cast<int>(rng() % g);
      if (i == j) continue;
      const int64_t f = small(rng);
      for (int k = 0; k < g; ++k)
        rel.at(i, k) += f * rel.at(j, k);  // unimodular row op
      for (int k = 0; k < g; ++k)
        rel.at(k, i) += f * rel.at(k, j);  // unimodular column op
    }
    int order = 1;
    for (const int s : shape) order *= s;
    const auto expected =
        oracle::invariant_factors_brute(oracle::product_group_table(shape),
                                        order);
    EXPECT_EQ(quotient_structure(rel, g).invariant_factors, expected)
        << "shape size " << shape.size();
  }
}

TEST(Arithmetic, OverflowIsAnError) {
  IntMatrix a(1, 1), b(1, 1);
  a.at(0, 0) = int64_t{1} << 62;
  b.at(0, 0) = 4;
  EXPECT_THROW(matmul(a, b), InternalError);
}

}  // namespace
