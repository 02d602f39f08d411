#pragma once

// Exact integer matrix arithmetic for finitely presented abelian groups:
// Smith normal form with tracked unimodular transforms, row-span (lattice)
// bases, kernels, preimages, and invariant factors of quotients.
//
// Row-vector convention throughout: a matrix with r rows and c columns maps
// x (length r) to x*A (length c); a lattice is the set of integer
// combinations of a matrix's rows.  All arithmetic is overflow-checked and
// aborts with InternalError rather than wrapping.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gammaspec/core.hpp"

namespace gammaspec {

namespace detail {

inline int64_t checked_add(int64_t a, int64_t b) {
  int64_t out;
  if (__builtin_add_overflow(a, b, &out))
    throw InternalError("integer overflow in lattice arithmetic");
  return out;
}

inline int64_t checked_mul(int64_t a, int64_t b) {
  int64_t out;
  if (__builtin_mul_overflow(a, b, &out))
    throw InternalError("integer overflow in lattice arithmetic");
  return out;
}

}  // namespace detail

struct IntMatrix {
  int rows = 0, cols = 0;
  std::vector<int64_t> a;  // row-major

  IntMatrix() = default;
  IntMatrix(int r, int c)
      : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {
    if (r < 0 || c < 0) throw InvalidInput("negative matrix dimension");
  }

  int64_t& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  int64_t at(int i, int j) const {
    return a[static_cast<size_t>(i) * cols + j];
  }

  static IntMatrix identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  bool operator==(const IntMatrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

inline IntMatrix matmul(const IntMatrix& x, const IntMatrix& y) {
  if (x.cols != y.rows) throw InvalidInput("matrix shapes do not compose");
  IntMatrix out(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const int64_t f = x.at(i, k);
      if (f == 0) continue;
      for (int j = 0; j < y.cols; ++j)
        out.at(i, j) = detail::checked_add(out.at(i, j),
                                           detail::checked_mul(f, y.at(k, j)));
    }
  return out;
}

inline std::vector<int64_t> row_times(const std::vector<int64_t>& x,
                                      const IntMatrix& m) {
  if (static_cast<int>(x.size()) != m.rows)
    throw InvalidInput("row vector length does not match matrix rows");
  std::vector<int64_t> out(m.cols, 0);
  for (int i = 0; i < m.rows; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < m.cols; ++j)
      out[j] = detail::checked_add(out[j],
                                   detail::checked_mul(x[i], m.at(i, j)));
  }
  return out;
}

// u * input * v == d, with u and v unimodular and d diagonal, nonnegative,
// each diagonal entry dividing the next.  rank counts the nonzero entries.
struct SmithResult {
  IntMatrix d, u, v;
  std::vector<int64_t> diagonal;
  int rank = 0;
};

inline SmithResult smith_normal_form(IntMatrix m) {
  const int r = m.rows, c = m.cols;
  IntMatrix u = IntMatrix::identity(r), v = IntMatrix::identity(c);

  auto row_add = [&](IntMatrix& t, int dst, int src, int64_t f) {
    for (int j = 0; j < t.cols; ++j)
      t.at(dst, j) = detail::checked_add(t.at(dst, j),
                                         detail::checked_mul(f, t.at(src, j)));
  };
  auto col_add = [&](IntMatrix& t, int dst, int src, int64_t f) {
    for (int i = 0; i < t.rows; ++i)
      t.at(i, dst) = detail::checked_add(t.at(i, dst),
                                         detail::checked_mul(f, t.at(i, src)));
  };
  auto row_swap = [&](IntMatrix& t, int i, int j) {
    for (int k = 0; k < t.cols; ++k) std::swap(t.at(i, k), t.at(j, k));
  };
  auto col_swap = [&](IntMatrix& t, int i, int j) {
    for (int k = 0; k < t.rows; ++k) std::swap(t.at(k, i), t.at(k, j));
  };
  auto row_negate = [&](IntMatrix& t, int i) {
    for (int k = 0; k < t.cols; ++k) t.at(i, k) = -t.at(i, k);
  };

  const int steps = std::min(r, c);
  for (int k = 0; k < steps; ++k) {
    for (;;) {
      // Smallest nonzero entry of the trailing submatrix becomes the pivot.
      int pi = -1, pj = -1;
      for (int i = k; i < r; ++i)
        for (int j = k; j < c; ++j)
          if (m.at(i, j) != 0 &&
              (pi < 0 || std::abs(m.at(i, j)) < std::abs(m.at(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi < 0) goto done;
      if (pi != k) {
        row_swap(m, pi, k);
        row_swap(u, pi, k);
      }
      if (pj != k) {
        col_swap(m, pj, k);
        col_swap(v, pj, k);
      }
      if (m.at(k, k) < 0) {
        row_negate(m, k);
        row_negate(u, k);
      }
      bool clean = true;
      for (int i = k + 1; i < r; ++i)
        if (m.at(i, k) != 0) {
          const int64_t q = m.at(i, k) / m.at(k, k);
          if (q != 0) {
            row_add(m, i, k, -q);
            row_add(u, i, k, -q);
          }
          if (m.at(i, k) != 0) clean = false;
        }
      for (int j = k + 1; j < c; ++j)
        if (m.at(k, j) != 0) {
          const int64_t q = m.at(k, j) / m.at(k, k);
          if (q != 0) {
            col_add(m, j, k, -q);
            col_add(v, j, k, -q);
          }
          if (m.at(k, j) != 0) clean = false;
        }
      if (!clean) continue;  // leftover remainders shrink the next pivot
      // Divisibility repair: drag a non-multiple into the working row.
      int bi = -1;
      for (int i = k + 1; i < r && bi < 0; ++i)
        for (int j = k + 1; j < c; ++j)
          if (m.at(i, j) % m.at(k, k) != 0) {
            bi = i;
            break;
          }
      if (bi < 0) break;
      row_add(m, k, bi, 1);
      row_add(u, k, bi, 1);
    }
  }
done:
  SmithResult out;
  out.u = std::move(u);
  out.v = std::move(v);
  out.d = std::move(m);
  for (int i = 0; i < steps; ++i) {
    out.diagonal.push_back(out.d.at(i, i));
    if (out.d.at(i, i) != 0) ++out.rank;
  }
  return out;
}

// Reduces spanning rows to a full-row-rank echelon basis of the same
// lattice.  Only unimodular row operations are applied.
inline IntMatrix lattice_basis(IntMatrix m) {
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    for (int i = row + 1; i < m.rows; ++i)
      while (m.at(i, col) != 0) {
        if (m.at(row, col) == 0) {
          for (int k = 0; k < m.cols; ++k) std::swap(m.at(row, k), m.at(i, k));
          continue;
        }
        const int64_t q = m.at(i, col) / m.at(row, col);
        for (int k = 0; k < m.cols; ++k)
          m.at(i, k) = detail::checked_add(
              m.at(i, k), detail::checked_mul(-q, m.at(row, k)));
        if (m.at(i, col) != 0)
          for (int k = 0; k < m.cols; ++k) std::swap(m.at(row, k), m.at(i, k));
      }
    if (m.at(row, col) != 0) {
      if (m.at(row, col) < 0)
        for (int k = 0; k < m.cols; ++k) m.at(row, k) = -m.at(row, k);
      ++row;
    }
  }
  m.a.resize(static_cast<size_t>(row) * m.cols);
  m.rows = row;
  return m;
}

// Solves y * basis == target exactly over the integers.
inline std::optional<std::vector<int64_t>> solve_row(
    const IntMatrix& basis, const std::vector<int64_t>& target) {
  if (static_cast<int>(target.size()) != basis.cols)
    throw InvalidInput("target length does not match lattice dimension");
  const auto snf = smith_normal_form(basis);
  std::vector<int64_t> w(basis.cols, 0);
  for (int j = 0; j < basis.cols; ++j)
    for (int i = 0; i < basis.cols; ++i)
      w[j] = detail::checked_add(
          w[j], detail::checked_mul(target[i], snf.v.at(i, j)));
  std::vector<int64_t> z(basis.rows, 0);
  for (int i = 0; i < basis.cols; ++i) {
    const int64_t d =
        i < static_cast<int>(snf.diagonal.size()) ? snf.diagonal[i] : 0;
    if (d == 0) {
      if (w[i] != 0) return std::nullopt;
    } else {
      if (w[i] % d != 0) return std::nullopt;
      z[i] = w[i] / d;
    }
  }
  std::vector<int64_t> y(basis.rows, 0);
  for (int j = 0; j < basis.rows; ++j)
    for (int i = 0; i < basis.rows; ++i)
      y[j] = detail::checked_add(y[j],
                                 detail::checked_mul(z[i], snf.u.at(i, j)));
  return y;
}

inline bool lattice_contains(const IntMatrix& spanning_rows,
                             const std::vector<int64_t>& v) {
  return solve_row(lattice_basis(spanning_rows), v).has_value();
}

// Basis of {x : x * m == 0}.
inline IntMatrix kernel_basis(const IntMatrix& m) {
  const auto snf = smith_normal_form(m);
  IntMatrix out(m.rows - snf.rank, m.rows);
  for (int i = snf.rank; i < m.rows; ++i)
    for (int j = 0; j < m.rows; ++j)
      out.at(i - snf.rank, j) = snf.u.at(i, j);
  return out;
}

// Basis of {x : x * m lies in the row span of l}.
inline IntMatrix preimage_lattice(const IntMatrix& m, const IntMatrix& l) {
  if (m.cols != l.cols)
    throw InvalidInput("map target and lattice dimensions differ");
  IntMatrix stacked(m.rows + l.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) stacked.at(i, j) = m.at(i, j);
  for (int i = 0; i < l.rows; ++i)
    for (int j = 0; j < l.cols; ++j) stacked.at(m.rows + i, j) = -l.at(i, j);
  const auto ker = kernel_basis(stacked);
  IntMatrix proj(ker.rows, m.rows);
  for (int i = 0; i < ker.rows; ++i)
    for (int j = 0; j < m.rows; ++j) proj.at(i, j) = ker.at(i, j);
  return lattice_basis(proj);
}

// Presented abelian group ℤ^generators / rowspan(relations) in canonical
// form.  Coordinates with modulus 1 are dropped; modulus 0 marks a free
// coordinate.  reduce() maps a generator combination to canonical
// coordinates, normalizing torsion entries into [0, modulus).
struct QuotientStructure {
  std::vector<int64_t> invariant_factors;  // entries > 1, each divides next
  int free_rank = 0;
  IntMatrix projection;         // generators x kept coordinates
  std::vector<int64_t> moduli;  // per kept coordinate; 0 on free ones

  bool finite() const { return free_rank == 0; }
  int64_t order() const {
    int64_t n = 1;
    for (const int64_t f : invariant_factors) n = detail::checked_mul(n, f);
    return free_rank == 0 ? n : 0;
  }

  std::vector<int64_t> reduce(const std::vector<int64_t>& x) const {
    auto y = row_times(x, projection);
    for (size_t i = 0; i < y.size(); ++i)
      if (moduli[i] > 0) {
        y[i] %= moduli[i];
        if (y[i] < 0) y[i] += moduli[i];
      }
    return y;
  }
};

inline QuotientStructure quotient_structure(const IntMatrix& relations,
                                            int generators) {
  if (relations.rows > 0 && relations.cols != generators)
    throw InvalidInput("relation width does not match generator count");
  IntMatrix rel = relations;
  rel.cols = generators;
  rel.a.resize(static_cast<size_t>(rel.rows) * generators);
  const auto basis = lattice_basis(std::move(rel));
  const auto snf = smith_normal_form(basis);

  QuotientStructure q;
  std::vector<int> kept;
  for (int i = 0; i < generators; ++i) {
    const int64_t d =
        i < static_cast<int>(snf.diagonal.size()) ? snf.diagonal[i] : 0;
    if (d == 1) continue;
    kept.push_back(i);
    q.moduli.push_back(d);
    if (d == 0)
      ++q.free_rank;
    else
      q.invariant_factors.push_back(d);
  }
  q.projection = IntMatrix(generators, static_cast<int>(kept.size()));
  for (int g = 0; g < generators; ++g)
    for (size_t k = 0; k < kept.size(); ++k)
      q.projection.at(g, static_cast<int>(k)) = snf.v.at(g, kept[k]);
  return q;
}

// Invariant factors of sub / inner for nested lattices given by spanning
// rows; inner must lie inside sub.
inline QuotientStructure lattice_quotient(const IntMatrix& sub,
                                          const IntMatrix& inner) {
  if (sub.cols != inner.cols)
    throw InvalidInput("lattice dimensions differ");
  const auto basis = lattice_basis(sub);
  IntMatrix coeffs(inner.rows, basis.rows);
  for (int i = 0; i < inner.rows; ++i) {
    std::vector<int64_t> v(inner.cols);
    for (int j = 0; j < inner.cols; ++j) v[j] = inner.at(i, j);
    const auto y = solve_row(basis, v);
    if (!y) throw InvalidInput("inner lattice escapes the ambient lattice");
    for (int j = 0; j < basis.rows; ++j) coeffs.at(i, j) = (*y)[j];
  }
  return quotient_structure(coeffs, basis.rows);
}

}  // namespace gammaspec
