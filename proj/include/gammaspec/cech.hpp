#pragma once

// Cech cohomology of associated module sheaves over a fixed cover of basic
// opens.  Cochains in degree p are families of sections over the (p+1)-fold
// intersections of the cover.  When every section monoid in the complex is a
// group, each one is presented by its Cayley relations, the alternating-sign
// coboundary becomes an integer matrix between presentations, and cohomology
// falls out of Smith reduction.  Otherwise only degree 0 is available, as
// the count of compatible section families on overlaps.
//
// Intersections are extensional prime-set intersections; nothing assumes
// an intersection of basic opens is itself basic.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gammaspec/core.hpp"
#include "gammaspec/gamma_module.hpp"
#include "gammaspec/intlattice.hpp"
#include "gammaspec/sheaf.hpp"

namespace gammaspec {

// One cochain degree: the (p+1)-element subsets of cover positions in
// lexicographic order, the intersection open with its full section list per
// subset, and per-subset addition tables on section indices when the
// sections form a group under pointwise stalk addition.
struct CechLevel {
  int degree = 0;
  std::vector<std::vector<int>> tuples;
  std::vector<OpenSet> opens;
  std::vector<std::vector<SectionFamily>> sections;
  std::vector<std::map<std::vector<Elem>, int>> index_of;
  std::vector<std::vector<int>> add_tables;  // s*s; empty when not a group
  std::vector<int> zero_index;               // per tuple; -1 when absent
  std::vector<int> offsets;                  // generator offset per tuple
  int total_generators = 0;
  bool group_ok = true;
  // Basis of the Cayley relation lattice of the level's direct-sum group;
  // built only when the whole complex has group structure.
  IntMatrix relation_basis;
};

struct CechComplex {
  const ModuleSheaf* sheaf = nullptr;
  std::vector<Elem> cover;
  std::vector<CechLevel> levels;  // degrees 0 .. cover.size()-1
  // Coboundary matrices on Cayley generators, one per level; the last maps
  // into zero columns.  Populated only when coboundaries_defined.
  std::vector<IntMatrix> coboundary;
  bool coboundaries_defined = false;
  std::string availability_note;  // first obstruction when not defined
};

namespace detail {

inline void for_each_combination(
    int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  if (k > n || k <= 0) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline std::string tuple_name(const CechComplex& cx,
                              const std::vector<int>& tuple) {
  const auto& names = cx.sheaf->space->parent->element_names;
  std::string out;
  for (size_t i = 0; i < tuple.size(); ++i) {
    if (i > 0) out += " ∩ ";
    out += "D(" + names[cx.cover[tuple[i]]] + ")";
  }
  return out;
}

// Values of a section after restriction to a smaller open; certificates are
// not rebuilt because the result is matched against the already certified
// enumeration of the smaller open.
inline std::vector<Elem> project_values(const SectionFamily& s,
                                        const OpenSet& target) {
  std::vector<Elem> out;
  out.reserve(target.primes.size());
  for (int q : target.primes)
    out.push_back(s.values[open_pos(s.open_set, q)]);
  return out;
}

}  // namespace detail

inline CechComplex cech_complex(const ModuleSheaf& sheaf,
                                const std::vector<Elem>& cover,
                                const Limits& limits = {}) {
  const SpectrumSpace& space = *sheaf.space;
  const TernarySemiring& t = *space.parent;
  if (cover.empty()) throw InvalidInput("a cover needs at least one element");
  for (const Elem a : cover)
    if (a < 0 || a >= t.n)
      throw InvalidInput("cover element outside the carrier");
  std::vector<char> covered(space.primes.size(), 0);
  for (const Elem a : cover)
    for (const int p : basic_open(space, a)) covered[p] = 1;
  for (size_t p = 0; p < covered.size(); ++p)
    if (!covered[p])
      throw InvalidInput("cover misses prime index " + std::to_string(p));

  CechComplex cx;
  cx.sheaf = &sheaf;
  cx.cover = cover;
  const int k = static_cast<int>(cover.size());

  for (int p = 0; p < k; ++p) {
    CechLevel lv;
    lv.degree = p;
    detail::for_each_combination(k, p + 1, [&](const std::vector<int>& idx) {
      OpenSet u = basic_open_set(space, cover[idx[0]]);
      for (size_t j = 1; j < idx.size(); ++j)
        u = open_intersection(u, basic_open_set(space, cover[idx[j]]));
      lv.tuples.push_back(idx);
      lv.opens.push_back(std::move(u));
    });
    for (size_t ti = 0; ti < lv.tuples.size(); ++ti) {
      lv.sections.push_back(sections(sheaf, lv.opens[ti], limits));
      std::map<std::vector<Elem>, int> by_values;
      for (size_t s = 0; s < lv.sections.back().size(); ++s)
        by_values.emplace(lv.sections.back()[s].values, static_cast<int>(s));
      lv.index_of.push_back(std::move(by_values));
    }
    cx.levels.push_back(std::move(lv));
  }

  // Group structure per tuple: pointwise stalk class addition, closed on the
  // enumerated section list, with a zero and all inverses.  The first
  // obstruction anywhere turns the whole coboundary machinery off.
  auto obstruct = [&](const std::string& why) {
    if (cx.availability_note.empty()) cx.availability_note = why;
  };
  for (auto& lv : cx.levels) {
    for (size_t ti = 0; ti < lv.tuples.size(); ++ti) {
      const auto& u = lv.opens[ti];
      const auto& secs = lv.sections[ti];
      const int count = static_cast<int>(secs.size());
      const std::string where = detail::tuple_name(cx, lv.tuples[ti]);
      bool usable = true;
      for (const int q : u.primes)
        if (!sheaf.stalks[q].addition_supported) {
          obstruct("no class addition on a stalk under " + where);
          usable = false;
          break;
        }
      int zero = -1;
      if (usable) {
        const auto it = lv.index_of[ti].find(
            std::vector<Elem>(u.primes.size(), 0));
        if (it == lv.index_of[ti].end()) {
          obstruct("zero family is not a section over " + where);
          usable = false;
        } else {
          zero = it->second;
        }
      }
      std::vector<int> table;
      if (usable) {
        table.assign(static_cast<size_t>(count) * count, -1);
        for (int i = 0; i < count && usable; ++i)
          for (int j = 0; j < count && usable; ++j) {
            std::vector<Elem> sum(u.primes.size());
            for (size_t q = 0; q < u.primes.size(); ++q)
              sum[q] = sheaf.stalks[u.primes[q]].add_class(
                  secs[i].values[q], secs[j].values[q]);
            const auto it = lv.index_of[ti].find(sum);
            if (it == lv.index_of[ti].end()) {
              obstruct("sections over " + where +
                       " are not closed under addition");
              usable = false;
            } else {
              table[static_cast<size_t>(i) * count + j] = it->second;
            }
          }
      }
      if (usable) {
        for (int i = 0; i < count && usable; ++i) {
          bool inverse = false;
          for (int j = 0; j < count && !inverse; ++j)
            inverse = table[static_cast<size_t>(i) * count + j] == zero;
          if (!inverse) {
            obstruct("a section over " + where + " has no additive inverse");
            usable = false;
          }
        }
      }
      if (!usable) {
        lv.group_ok = false;
        table.clear();
      }
      lv.add_tables.push_back(std::move(table));
      lv.zero_index.push_back(zero);
    }
    lv.offsets.resize(lv.tuples.size());
    int off = 0;
    for (size_t ti = 0; ti < lv.tuples.size(); ++ti) {
      lv.offsets[ti] = off;
      off += static_cast<int>(lv.sections[ti].size());
    }
    lv.total_generators = off;
  }
  cx.coboundaries_defined = cx.availability_note.empty();
  if (!cx.coboundaries_defined) return cx;

  // Cayley relation lattices: one generator per section, one relation per
  // unordered section pair and block.
  for (auto& lv : cx.levels) {
    std::vector<std::vector<int64_t>> rows;
    for (size_t ti = 0; ti < lv.tuples.size(); ++ti) {
      const int count = static_cast<int>(lv.sections[ti].size());
      for (int i = 0; i < count; ++i)
        for (int j = i; j < count; ++j) {
          std::vector<int64_t> row(lv.total_generators, 0);
          row[lv.offsets[ti] + i] += 1;
          row[lv.offsets[ti] + j] += 1;
          row[lv.offsets[ti] +
              lv.add_tables[ti][static_cast<size_t>(i) * count + j]] -= 1;
          bool nonzero = false;
          for (const int64_t v : row) nonzero = nonzero || v != 0;
          if (nonzero) rows.push_back(std::move(row));
        }
    }
    IntMatrix rel(static_cast<int>(rows.size()), lv.total_generators);
    for (int i = 0; i < rel.rows; ++i)
      for (int j = 0; j < rel.cols; ++j) rel.at(i, j) = rows[i][j];
    lv.relation_basis = lattice_basis(std::move(rel));
  }

  // Coboundary on generators: the basis section s over the p-fold
  // intersection maps, for every refining (p+1)-fold intersection obtained
  // by inserting one cover member at position k, to its restriction there
  // with sign (-1)^k.
  for (int p = 0; p < k; ++p) {
    const auto& lv = cx.levels[p];
    const int next_gens =
        p + 1 < k ? cx.levels[p + 1].total_generators : 0;
    IntMatrix d(lv.total_generators, next_gens);
    if (p + 1 < k) {
      const auto& nx = cx.levels[p + 1];
      for (size_t si = 0; si < nx.tuples.size(); ++si) {
        const auto& sigma = nx.tuples[si];
        for (size_t drop = 0; drop < sigma.size(); ++drop) {
          std::vector<int> tau;
          for (size_t j = 0; j < sigma.size(); ++j)
            if (j != drop) tau.push_back(sigma[j]);
          size_t ti = 0;
          while (lv.tuples[ti] != tau) ++ti;
          const int sign = drop % 2 == 0 ? 1 : -1;
          for (size_t s = 0; s < lv.sections[ti].size(); ++s) {
            const auto values =
                detail::project_values(lv.sections[ti][s], nx.opens[si]);
            const auto it = nx.index_of[si].find(values);
            if (it == nx.index_of[si].end())
              throw InternalError(
                  "a restricted section is missing from the enumeration "
                  "over " +
                  detail::tuple_name(cx, sigma));
            d.at(lv.offsets[ti] + static_cast<int>(s),
                 nx.offsets[si] + it->second) += sign;
          }
        }
      }
    }
    cx.coboundary.push_back(std::move(d));
  }

  // The coboundary must send each level's relation lattice into the next
  // one (it is a homomorphism of the presented groups) and must compose to
  // zero modulo relations.  Either failure is a construction bug.
  for (int p = 0; p + 1 < k; ++p) {
    const auto& basis = cx.levels[p].relation_basis;
    for (int i = 0; i < basis.rows; ++i) {
      std::vector<int64_t> row(basis.cols);
      for (int j = 0; j < basis.cols; ++j) row[j] = basis.at(i, j);
      if (!solve_row(cx.levels[p + 1].relation_basis,
                     row_times(row, cx.coboundary[p])))
        throw InternalError(
            "coboundary does not respect the section group presentation");
    }
  }
  for (int p = 0; p + 2 < k; ++p) {
    const auto square = matmul(cx.coboundary[p], cx.coboundary[p + 1]);
    for (int i = 0; i < square.rows; ++i) {
      std::vector<int64_t> row(square.cols);
      for (int j = 0; j < square.cols; ++j) row[j] = square.at(i, j);
      if (!solve_row(cx.levels[p + 2].relation_basis, row))
        throw InternalError("coboundary composition is nonzero in degree " +
                            std::to_string(p));
    }
  }
  return cx;
}

struct CohomologyGroup {
  int degree = 0;
  std::vector<int64_t> invariant_factors;

  bool trivial() const { return invariant_factors.empty(); }
};

struct CohomologyReport {
  std::vector<Elem> cover;
  // Families of sections over the cover members agreeing on all pairwise
  // intersections; computable without any group structure.
  int64_t equalizer_sections = 0;
  bool complete = false;          // full coboundary pipeline ran
  std::string note;               // obstruction when not complete
  std::vector<CohomologyGroup> h; // degrees 0 .. cover.size()-1
};

inline CohomologyReport cohomology(const CechComplex& cx) {
  CohomologyReport rep;
  rep.cover = cx.cover;
  const int k = static_cast<int>(cx.cover.size());

  // Degree-0 equalizer by depth-first choice with pairwise pruning.
  {
    const auto& lv0 = cx.levels[0];
    std::vector<int> pick(k, 0);
    std::function<void(int)> walk = [&](int depth) {
      if (depth == k) {
        ++rep.equalizer_sections;
        return;
      }
      for (size_t s = 0; s < lv0.sections[depth].size(); ++s) {
        bool agrees = true;
        for (int prev = 0; prev < depth && agrees; ++prev) {
          const std::vector<int> pair = {prev, depth};
          size_t pi = 0;
          while (cx.levels[1].tuples[pi] != pair) ++pi;
          const auto& overlap = cx.levels[1].opens[pi];
          agrees = detail::project_values(lv0.sections[prev][pick[prev]],
                                          overlap) ==
                   detail::project_values(lv0.sections[depth][s], overlap);
        }
        if (!agrees) continue;
        pick[depth] = static_cast<int>(s);
        walk(depth + 1);
      }
    };
    if (k == 1)
      rep.equalizer_sections =
          static_cast<int64_t>(lv0.sections[0].size());
    else
      walk(0);
  }

  if (!cx.coboundaries_defined) {
    rep.note = cx.availability_note;
    return rep;
  }
  rep.complete = true;
  for (int p = 0; p < k; ++p) {
    const IntMatrix empty_basis(0, 0);
    const IntMatrix& target = p + 1 < k
                                  ? cx.levels[p + 1].relation_basis
                                  : empty_basis;
    const auto kernel = preimage_lattice(cx.coboundary[p], target);
    const auto& rel = cx.levels[p].relation_basis;
    const int prev_rows = p > 0 ? cx.coboundary[p - 1].rows : 0;
    IntMatrix inner(rel.rows + prev_rows, cx.levels[p].total_generators);
    for (int i = 0; i < rel.rows; ++i)
      for (int j = 0; j < rel.cols; ++j) inner.at(i, j) = rel.at(i, j);
    for (int i = 0; i < prev_rows; ++i)
      for (int j = 0; j < inner.cols; ++j)
        inner.at(rel.rows + i, j) = cx.coboundary[p - 1].at(i, j);
    const auto q = lattice_quotient(kernel, inner);
    if (!q.finite())
      throw InternalError("cohomology of finite section groups came out "
                          "infinite in degree " +
                          std::to_string(p));
    rep.h.push_back({p, q.invariant_factors});
  }
  return rep;
}

// Human-readable account of the whole complex: cover, intersection opens,
// section counts, group availability, and coboundary matrices.  Meant for
// failure reports on nonvanishing higher cohomology.
inline std::string dump_complex(const CechComplex& cx) {
  const auto& names = cx.sheaf->space->parent->element_names;
  std::string out = "cover:";
  for (const Elem a : cx.cover) out += " D(" + names[a] + ")";
  for (const auto& lv : cx.levels) {
    out += "\nC^" + std::to_string(lv.degree) + ":";
    for (size_t ti = 0; ti < lv.tuples.size(); ++ti) {
      out += "\n  " + detail::tuple_name(cx, lv.tuples[ti]) + " primes=[";
      for (size_t i = 0; i < lv.opens[ti].primes.size(); ++i)
        out += (i ? "," : "") + std::to_string(lv.opens[ti].primes[i]);
      out += "] sections=" + std::to_string(lv.sections[ti].size()) +
             (lv.add_tables[ti].empty() ? " (no group)" : " (group)");
    }
  }
  for (size_t p = 0; p < cx.coboundary.size(); ++p) {
    const auto& d = cx.coboundary[p];
    out += "\nd^" + std::to_string(p) + " (" + std::to_string(d.rows) + "x" +
           std::to_string(d.cols) + "):";
    for (int i = 0; i < d.rows; ++i) {
      out += "\n  ";
      for (int j = 0; j < d.cols; ++j)
        out += (j ? " " : "") + std::to_string(d.at(i, j));
      if (d.cols == 0) out += "(empty row)";
    }
  }
  return out + "\n";
}

}  // namespace gammaspec
