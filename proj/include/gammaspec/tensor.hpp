#pragma once

// Tensor products of group-complete modules over one ternary semiring.
//
// The product M (x) N is presented as an abelian group: one generator per
// element pair, relations for additivity in each slot, for moving a scalar
// sandwich across the tensor sign, and for killing pairs with a zero slot.
// Smith reduction of the relation lattice yields canonical coordinates, so
// equality of tensors, the group shape, and induced maps are all decidable.
// On top of the product sit the universal-property checker, the first
// derived functor for cyclic quotients of the carrier (computed from the
// rank-one cover, and labeled with that cover since the value is relative
// to it), and a flatness probe walking the divisors of the carrier.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gammaspec/core.hpp"
#include "gammaspec/gamma_module.hpp"
#include "gammaspec/intlattice.hpp"
#include "gammaspec/semiring.hpp"

namespace gammaspec {

struct AbGroupPresentation {
  int num_generators = 0;
  std::vector<std::vector<int64_t>> relations;
  std::vector<std::string> generator_labels;
};

// Invariant: structure.finite() holds; both factors stay alive as long as
// reduce_pair or pair_generator is used.
struct TensorProduct {
  const GammaModule* left = nullptr;
  const GammaModule* right = nullptr;
  AbGroupPresentation presentation;
  QuotientStructure structure;

  int pair_generator(Elem x, Elem y) const {
    if (x < 0 || x >= left->size || y < 0 || y >= right->size)
      throw InvalidInput("tensor pair outside the factor carriers");
    return x * right->size + y;
  }

  // Canonical coordinates of the pure tensor x (x) y.
  std::vector<int64_t> reduce_pair(Elem x, Elem y) const {
    std::vector<int64_t> e(presentation.num_generators, 0);
    e[pair_generator(x, y)] = 1;
    return structure.reduce(e);
  }

  const std::vector<int64_t>& invariant_factors() const {
    return structure.invariant_factors;
  }
};

namespace detail {

// Canonicalized sparse relation row: accumulate coefficients per generator,
// drop zeros.  Deduplication happens in the std::set ordering.
using SparseRow = std::vector<std::pair<int, int64_t>>;

inline void add_sparse(std::set<SparseRow>& rows,
                       std::initializer_list<std::pair<int, int64_t>> terms) {
  std::map<int, int64_t> acc;
  for (const auto& [idx, c] : terms) acc[idx] += c;
  SparseRow row;
  for (const auto& [idx, c] : acc)
    if (c != 0) row.emplace_back(idx, c);
  if (!row.empty()) rows.insert(std::move(row));
}

}  // namespace detail

inline TensorProduct tensor_product(const GammaModule& m, const GammaModule& n,
                                    const Limits& limits = {}) {
  if (m.parent != n.parent)
    throw InvalidInput("tensor factors live over different semirings");
  if (!m.group_complete || !n.group_complete)
    throw InvalidInput("tensor factors must be group-complete");
  const TernarySemiring& t = *m.parent;
  const long long gens_wide =
      static_cast<long long>(m.size) * static_cast<long long>(n.size);
  if (gens_wide > limits.max_section_space)
    throw CapExceeded("tensor generator count exceeds the configured cap");
  const int gens = static_cast<int>(gens_wide);

  TensorProduct tp;
  tp.left = &m;
  tp.right = &n;
  tp.presentation.num_generators = gens;
  tp.presentation.generator_labels.reserve(gens);
  for (Elem x = 0; x < m.size; ++x)
    for (Elem y = 0; y < n.size; ++y)
      tp.presentation.generator_labels.push_back(m.element_names[x] + "⊗" +
                                                 n.element_names[y]);
  const auto pg = [&](Elem x, Elem y) { return x * n.size + y; };

  std::set<detail::SparseRow> rows;
  for (Elem y = 0; y < n.size; ++y)
    detail::add_sparse(rows, {{pg(0, y), 1}});
  for (Elem x = 0; x < m.size; ++x)
    detail::add_sparse(rows, {{pg(x, 0), 1}});
  for (Elem x = 0; x < m.size; ++x)
    for (Elem x2 = x; x2 < m.size; ++x2)
      for (Elem y = 0; y < n.size; ++y)
        detail::add_sparse(rows, {{pg(m.add(x, x2), y), 1},
                                  {pg(x, y), -1},
                                  {pg(x2, y), -1}});
  for (Elem y = 0; y < n.size; ++y)
    for (Elem y2 = y; y2 < n.size; ++y2)
      for (Elem x = 0; x < m.size; ++x)
        detail::add_sparse(rows, {{pg(x, n.add(y, y2)), 1},
                                  {pg(x, y), -1},
                                  {pg(x, y2), -1}});
  for (GammaIdx g = 0; g < t.gamma_count; ++g)
    for (Elem a = 0; a < t.n; ++a)
      for (Elem b = 0; b < t.n; ++b)
        for (Elem x = 0; x < m.size; ++x)
          for (Elem y = 0; y < n.size; ++y)
            detail::add_sparse(rows, {{pg(m.act(g, a, x, b), y), 1},
                                      {pg(x, n.act(g, a, y, b)), -1}});

  IntMatrix rel(static_cast<int>(rows.size()), gens);
  {
    int i = 0;
    for (const auto& row : rows) {
      for (const auto& [idx, c] : row) rel.at(i, idx) = c;
      ++i;
    }
  }
  tp.presentation.relations.reserve(rows.size());
  for (int i = 0; i < rel.rows; ++i) {
    std::vector<int64_t> dense(gens, 0);
    for (int j = 0; j < gens; ++j) dense[j] = rel.at(i, j);
    tp.presentation.relations.push_back(std::move(dense));
  }
  tp.structure = quotient_structure(rel, gens);
  if (!tp.structure.finite())
    throw InternalError("tensor of finite group-complete modules came out infinite");
  return tp;
}

// Outcome of checking one bilinear map against the universal property of a
// tensor product.  The map is given by its values on element pairs, landing
// in a group-complete module whose addition is the only structure used.
struct BilinearReport {
  bool balanced = true;
  std::string violation;  // first broken law, empty when balanced
  bool relations_vanish = false;
  bool generators_span = false;
  // Canonical tensor coordinates -> image under the induced homomorphism,
  // one entry per element of the product; filled only when it factors.
  std::map<std::vector<int64_t>, Elem> induced;

  bool factors_uniquely() const {
    return balanced && relations_vanish && generators_span;
  }
};

inline BilinearReport check_bilinear_universal_property(
    const TensorProduct& tp, const GammaModule& target,
    const std::vector<Elem>& values) {
  const GammaModule& m = *tp.left;
  const GammaModule& n = *tp.right;
  const TernarySemiring& t = *m.parent;
  if (!target.group_complete)
    throw InvalidInput("universal-property target must be group-complete");
  if (static_cast<int>(values.size()) != tp.presentation.num_generators)
    throw InvalidInput("bilinear map must assign a value to every pair");
  for (const Elem v : values)
    if (v < 0 || v >= target.size)
      throw InvalidInput("bilinear map value outside the target carrier");

  std::vector<Elem> neg(target.size, -1);
  for (Elem x = 0; x < target.size; ++x)
    for (Elem y = 0; y < target.size; ++y)
      if (target.add(x, y) == 0) neg[x] = y;
  const auto f = [&](Elem x, Elem y) {
    return values[static_cast<size_t>(tp.pair_generator(x, y))];
  };

  BilinearReport rep;
  const auto fail = [&](std::string why) {
    if (rep.balanced) {
      rep.balanced = false;
      rep.violation = std::move(why);
    }
  };
  for (Elem y = 0; y < n.size && rep.balanced; ++y)
    if (f(0, y) != 0) fail("zero slot must map to zero");
  for (Elem x = 0; x < m.size && rep.balanced; ++x)
    if (f(x, 0) != 0) fail("zero slot must map to zero");
  for (Elem x = 0; x < m.size && rep.balanced; ++x)
    for (Elem x2 = 0; x2 < m.size && rep.balanced; ++x2)
      for (Elem y = 0; y < n.size && rep.balanced; ++y)
        if (f(m.add(x, x2), y) != target.add(f(x, y), f(x2, y)))
          fail("additivity in the left slot");
  for (Elem x = 0; x < m.size && rep.balanced; ++x)
    for (Elem y = 0; y < n.size && rep.balanced; ++y)
      for (Elem y2 = 0; y2 < n.size && rep.balanced; ++y2)
        if (f(x, n.add(y, y2)) != target.add(f(x, y), f(x, y2)))
          fail("additivity in the right slot");
  for (GammaIdx g = 0; g < t.gamma_count && rep.balanced; ++g)
    for (Elem a = 0; a < t.n && rep.balanced; ++a)
      for (Elem b = 0; b < t.n && rep.balanced; ++b)
        for (Elem x = 0; x < m.size && rep.balanced; ++x)
          for (Elem y = 0; y < n.size && rep.balanced; ++y)
            if (f(m.act(g, a, x, b), y) != f(x, n.act(g, a, y, b)))
              fail("scalar sandwich must move across the tensor sign");
  if (!rep.balanced) return rep;

  // Replaying every relation row through the values certifies that the map
  // is constant on presentation classes, hence descends to the quotient.
  rep.relations_vanish = true;
  for (const auto& row : tp.presentation.relations) {
    Elem acc = 0;
    for (int j = 0; j < tp.presentation.num_generators; ++j) {
      int64_t c = row[j];
      const Elem step = c > 0 ? values[j] : neg[values[j]];
      for (int64_t k = c < 0 ? -c : c; k > 0; --k) acc = target.add(acc, step);
    }
    if (acc != 0) {
      rep.relations_vanish = false;
      break;
    }
  }
  if (!rep.relations_vanish) return rep;

  // Walk the subgroup generated by the pure tensors.  Reaching every class
  // shows any homomorphism is pinned down by its values on pure tensors;
  // each class must carry one image or the walk aborts.
  std::vector<std::pair<std::vector<int64_t>, Elem>> frontier;
  const std::vector<int64_t> zero(tp.structure.moduli.size(), 0);
  rep.induced[zero] = 0;
  frontier.emplace_back(zero, 0);
  std::vector<std::pair<std::vector<int64_t>, Elem>> pures;
  for (Elem x = 0; x < m.size; ++x)
    for (Elem y = 0; y < n.size; ++y)
      pures.emplace_back(tp.reduce_pair(x, y), f(x, y));
  while (!frontier.empty()) {
    const auto [coords, image] = frontier.back();
    frontier.pop_back();
    for (const auto& [pc, pv] : pures) {
      std::vector<int64_t> next(coords.size());
      for (size_t i = 0; i < coords.size(); ++i) {
        next[i] = coords[i] + pc[i];
        if (tp.structure.moduli[i] > 0) next[i] %= tp.structure.moduli[i];
      }
      const Elem nv = target.add(image, pv);
      const auto it = rep.induced.find(next);
      if (it == rep.induced.end()) {
        rep.induced.emplace(next, nv);
        frontier.emplace_back(std::move(next), nv);
      } else if (it->second != nv) {
        throw InternalError("induced map disagreed with itself on one class");
      }
    }
  }
  rep.generators_span =
      static_cast<int64_t>(rep.induced.size()) == tp.structure.order();
  return rep;
}

// First derived functor of - (x) N at the cyclic quotient of the carrier by
// the multiples of m.  The value is computed from, and reported relative to,
// the rank-one cover of that quotient; a different cover may present the
// same quotient, so the report names the one used.
struct TorComputation {
  std::vector<int64_t> invariant_factors;
  std::string presentation;
  int cover_generators = 0;   // tensor generators of the covering term
  int kernel_generators = 0;  // tensor generators of the kernel term
};

// Kernel of K (x) N -> F (x) N for an explicit submodule K of a free
// rank-one cover F, with the inclusion given by K's member list.  Shared by
// the divisor probe and by callers supplying their own cover.
inline TorComputation tor1_from_cover(const Submodule& k, const GammaModule& f,
                                      const GammaModule& nmod,
                                      std::string presentation,
                                      const Limits& limits = {}) {
  const auto tk = tensor_product(k.module, nmod, limits);
  const auto tf = tensor_product(f, nmod, limits);

  IntMatrix map(tk.presentation.num_generators, tf.presentation.num_generators);
  for (Elem i = 0; i < k.module.size; ++i)
    for (Elem y = 0; y < nmod.size; ++y)
      map.at(tk.pair_generator(i, y), tf.pair_generator(k.members[i], y)) = 1;

  const auto dense_rows = [](const AbGroupPresentation& p) {
    IntMatrix out(static_cast<int>(p.relations.size()), p.num_generators);
    for (int i = 0; i < out.rows; ++i)
      for (int j = 0; j < out.cols; ++j) out.at(i, j) = p.relations[i][j];
    return out;
  };
  const auto rel_k = dense_rows(tk.presentation);
  const auto rel_f = lattice_basis(dense_rows(tf.presentation));
  for (int i = 0; i < rel_k.rows; ++i) {
    std::vector<int64_t> v(rel_k.cols);
    for (int j = 0; j < rel_k.cols; ++j) v[j] = rel_k.at(i, j);
    if (!solve_row(rel_f, row_times(v, map)))
      throw InternalError("kernel relations do not map into the cover relations");
  }

  const auto vanishing = preimage_lattice(map, rel_f);
  const auto q = lattice_quotient(vanishing, rel_k);
  if (!q.finite())
    throw InternalError("derived-functor kernel came out infinite");
  TorComputation out;
  out.invariant_factors = q.invariant_factors;
  out.presentation = std::move(presentation);
  out.cover_generators = tf.presentation.num_generators;
  out.kernel_generators = tk.presentation.num_generators;
  return out;
}

inline TorComputation tor1_cyclic(const TernarySemiring& t, int m,
                                  const GammaModule& nmod,
                                  const Limits& limits = {}) {
  if (m < 1 || t.n % m != 0)
    throw InvalidInput("quotient modulus must divide the carrier size");
  if (nmod.parent != &t)
    throw InvalidInput("tensor factors live over different semirings");
  const auto f = module_from_semiring(t, limits);
  std::vector<Elem> members;
  for (int i = 0; i * m < t.n; ++i) members.push_back(static_cast<Elem>(i * m));
  const auto k = submodule_from_members(f, members, limits);
  return tor1_from_cover(
      k, f, nmod,
      "presentation-relative: rank-one cover of Z/" + std::to_string(m) +
          " by Z/" + std::to_string(t.n) + ", kernel the multiples of " +
          std::to_string(m),
      limits);
}

struct FlatnessReport {
  bool flat = true;
  int witness = 0;  // least divisor with nonvanishing functor, 0 when flat
  std::vector<std::pair<int, std::vector<int64_t>>> per_divisor;
};

// Walks every divisor of the carrier size in ascending order and records the
// derived functor against each cyclic quotient; the first nonzero value is
// the non-flatness witness.
inline FlatnessReport flatness_probe(const TernarySemiring& t,
                                     const GammaModule& nmod,
                                     const Limits& limits = {}) {
  FlatnessReport rep;
  for (int m = 1; m <= t.n; ++m) {
    if (t.n % m != 0) continue;
    auto tor = tor1_cyclic(t, m, nmod, limits);
    if (!tor.invariant_factors.empty() && rep.flat) {
      rep.flat = false;
      rep.witness = m;
    }
    rep.per_divisor.emplace_back(m, std::move(tor.invariant_factors));
  }
  return rep;
}

}  // namespace gammaspec
