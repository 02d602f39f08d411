#pragma once

// Fractions of module elements over a multiplicative system of the parent
// semiring: M x S modulo (x,s) ~ (y,t) iff {u,x,{ttt}_g}_d = {u,y,{sss}_h}_d
// for some u in S and g,d,h in Gamma, with module elements kept in the middle
// slot of the action.  The equivalence is the transitive closure of that raw
// relation, with the same diagnostics as the semiring case.
//
// The result stays a module over the original semiring: scalars act through
//   {a, x/s, b}_g = {a,x,b}_g / s
// which is verified representative-independent over every choice; dependence
// is a hard error.  Class addition uses the candidate
//   x/s + y/t := ({t,x,t}_g0 + {s,y,t}_g0) / {s,t,t}_g0
// and is adopted only when it survives representative-independence plus the
// commutative-monoid laws on the instance at hand.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gammaspec/core.hpp"
#include "gammaspec/gamma_module.hpp"
#include "gammaspec/mult_system.hpp"
#include "gammaspec/semiring.hpp"

namespace gammaspec {

struct LocalizedModule {
  const GammaModule* source = nullptr;
  MultiplicativeSystem system;

  // (element, denominator) pairs, element-major, denominators in system
  // order; class 0 is the zero class {(0,s) : s in S}.
  std::vector<std::pair<Elem, Elem>> pairs;
  std::vector<int> pair_class;
  std::vector<std::vector<int>> classes;

  // action_class is [g][a][c][b] with a, b over the parent semiring and c a
  // class index; add_class_table is [c1][c2], empty unless supported.
  std::vector<Elem> action_class;
  std::vector<Elem> add_class_table;
  bool addition_supported = false;
  std::string addition_note;

  bool raw_relation_transitive = false;

  // canonical_class[x] = class of {s0,x,s0}_g0 / {s0,s0,s0}_g0, least s0.
  std::vector<int> canonical_class;

  // Class-level module over the parent semiring; present only when addition
  // is supported and the class count fits construction caps.
  std::optional<GammaModule> view;

  int num_classes() const { return static_cast<int>(classes.size()); }

  int pair_index(Elem x, Elem s) const {
    const auto it =
        std::lower_bound(system.members.begin(), system.members.end(), s);
    if (it == system.members.end() || *it != s)
      throw InvalidInput("denominator " + std::to_string(s) +
                         " is not in the system");
    return x * system.size() +
           static_cast<int>(it - system.members.begin());
  }

  int class_of(Elem x, Elem s) const { return pair_class[pair_index(x, s)]; }

  Elem act_class(GammaIdx g, Elem a, int c, Elem b) const {
    const auto n = static_cast<size_t>(source->parent->n);
    const auto k = static_cast<size_t>(num_classes());
    return action_class[((static_cast<size_t>(g) * n + a) * k + c) * n + b];
  }

  Elem add_class(int c1, int c2) const {
    if (!addition_supported)
      throw InvalidInput("class addition is unsupported on this localization");
    return add_class_table[static_cast<size_t>(c1) * num_classes() + c2];
  }

  std::string class_label(int c) const {
    const auto& p = pairs[classes[c].front()];
    return source->element_names[p.first] + "/" +
           source->parent->element_names[p.second];
  }
};

inline LocalizedModule localize_module(const GammaModule& m,
                                       const MultiplicativeSystem& system,
                                       const Limits& limits = {}) {
  const TernarySemiring& t = *m.parent;
  if (system.parent != &t)
    throw InvalidInput("system belongs to a different semiring");
  LocalizedModule loc;
  loc.source = &m;
  loc.system = system;
  const int ns = system.size();
  const int64_t pair_count = static_cast<int64_t>(m.size) * ns;
  if (pair_count > limits.max_stalk_classes)
    throw CapExceeded("module localization needs " +
                      std::to_string(pair_count) + " pairs > cap " +
                      std::to_string(limits.max_stalk_classes));
  for (Elem x = 0; x < m.size; ++x)
    for (Elem s : system.members) loc.pairs.emplace_back(x, s);
  const int np = static_cast<int>(loc.pairs.size());

  std::vector<Elem> cubes(static_cast<size_t>(t.gamma_count) * t.n);
  for (GammaIdx g = 0; g < t.gamma_count; ++g)
    for (Elem s = 0; s < t.n; ++s)
      cubes[static_cast<size_t>(g) * t.n + s] = t.tern(g, s, s, s);
  // Scaling identity between two pairs; witnesses scan ascending u then
  // lexicographic (g, d, h), mirroring the semiring relation.
  auto related = [&](Elem x, Elem s, Elem y, Elem tt) {
    for (Elem u : system.members)
      for (GammaIdx g = 0; g < t.gamma_count; ++g) {
        const Elem tcube = cubes[static_cast<size_t>(g) * t.n + tt];
        for (GammaIdx d = 0; d < t.gamma_count; ++d) {
          const Elem lhs = m.act(d, u, x, tcube);
          for (GammaIdx h = 0; h < t.gamma_count; ++h)
            if (lhs ==
                m.act(d, u, y, cubes[static_cast<size_t>(h) * t.n + s]))
              return true;
        }
      }
    return false;
  };

  const int words = (np + 63) / 64;
  std::vector<uint64_t> raw(static_cast<size_t>(np) * words, 0);
  auto raw_set = [&raw, words](int p, int q) {
    raw[static_cast<size_t>(p) * words + q / 64] |= uint64_t{1} << (q % 64);
  };
  auto raw_get = [&raw, words](int p, int q) {
    return (raw[static_cast<size_t>(p) * words + q / 64] >> (q % 64)) & 1u;
  };
  std::vector<int> parent(np);
  for (int p = 0; p < np; ++p) parent[p] = p;
  std::function<int(int)> find = [&parent, &find](int p) {
    return parent[p] == p ? p : parent[p] = find(parent[p]);
  };
  for (int p = 0; p < np; ++p) {
    raw_set(p, p);
    for (int q = p + 1; q < np; ++q) {
      const auto [x, s] = loc.pairs[p];
      const auto [y, tt] = loc.pairs[q];
      if (related(x, s, y, tt)) {
        raw_set(p, q);
        raw_set(q, p);
        parent[find(p)] = find(q);
      }
    }
  }
  loc.pair_class.assign(np, -1);
  for (int p = 0; p < np; ++p) {
    const int root = find(p);
    if (loc.pair_class[root] < 0) {
      loc.pair_class[root] = static_cast<int>(loc.classes.size());
      loc.classes.emplace_back();
    }
    loc.pair_class[p] = loc.pair_class[root];
    loc.classes[loc.pair_class[p]].push_back(p);
  }
  for (Elem s : system.members)
    if (loc.class_of(0, s) != 0)
      throw InternalError("zero fractions split across classes");

  loc.raw_relation_transitive = true;
  for (const auto& cls : loc.classes)
    for (size_t i = 0; i < cls.size() && loc.raw_relation_transitive; ++i)
      for (size_t j = i + 1; j < cls.size(); ++j)
        if (!raw_get(cls[i], cls[j])) {
          loc.raw_relation_transitive = false;
          break;
        }

  // Scalar action on classes from least representatives.
  const size_t k = loc.classes.size();
  const size_t n = static_cast<size_t>(t.n);
  loc.action_class.assign(static_cast<size_t>(t.gamma_count) * n * k * n, 0);
  for (GammaIdx g = 0; g < t.gamma_count; ++g)
    for (Elem a = 0; a < t.n; ++a)
      for (size_t c = 0; c < k; ++c)
        for (Elem b = 0; b < t.n; ++b) {
          const auto [x, s] = loc.pairs[loc.classes[c].front()];
          loc.action_class[((static_cast<size_t>(g) * n + a) * k + c) * n +
                           b] = loc.class_of(m.act(g, a, x, b), s);
        }

  // Representative independence over every pair in every class, chunked on
  // the flattened (g, a, pair, b) index; first violation in index order wins.
  struct RepViolation {
    int64_t flat;
    std::string text;
  };
  std::vector<std::optional<RepViolation>> first_violation(
      std::max(1, thread_count()));
  const int64_t total = static_cast<int64_t>(t.gamma_count) * t.n * np * t.n;
  detail::parallel_chunks(total, [&](int chunk, int64_t begin, int64_t end) {
    std::optional<RepViolation>& slot =
        first_violation[static_cast<size_t>(chunk) % first_violation.size()];
    for (int64_t flat = begin; flat < end; ++flat) {
      if (slot && slot->flat < flat) break;
      int64_t rest = flat;
      const Elem b = static_cast<Elem>(rest % t.n);
      rest /= t.n;
      const int p = static_cast<int>(rest % np);
      rest /= np;
      const Elem a = static_cast<Elem>(rest % t.n);
      const GammaIdx g = static_cast<GammaIdx>(rest / t.n);
      const auto [x, s] = loc.pairs[p];
      const int got = loc.class_of(m.act(g, a, x, b), s);
      const int want = loc.act_class(g, a, loc.pair_class[p], b);
      if (got != want && (!slot || flat < slot->flat)) {
        slot = RepViolation{
            flat, "class action depends on representatives: {" +
                      std::to_string(a) + ", " + std::to_string(x) + "/" +
                      std::to_string(s) + ", " + std::to_string(b) + "}_" +
                      t.gamma_names[g]};
      }
    }
  });
  std::optional<RepViolation> worst;
  for (const auto& slot : first_violation)
    if (slot && (!worst || slot->flat < worst->flat)) worst = slot;
  if (worst) throw Error(worst->text);

  // Addition attempt; see the header comment for the candidate formula.
  loc.addition_supported = true;
  loc.add_class_table.assign(k * k, 0);
  for (size_t c1 = 0; c1 < k && loc.addition_supported; ++c1)
    for (size_t c2 = 0; c2 < k && loc.addition_supported; ++c2) {
      int expected = -1;
      for (int p1 : loc.classes[c1]) {
        for (int p2 : loc.classes[c2]) {
          const auto [x, s] = loc.pairs[p1];
          const auto [y, tt] = loc.pairs[p2];
          const Elem num = m.add(m.act(0, tt, x, tt), m.act(0, s, y, tt));
          const Elem den = t.tern(0, s, tt, tt);
          const int got = loc.class_of(num, den);
          if (expected < 0) {
            expected = got;
          } else if (got != expected) {
            loc.addition_supported = false;
            loc.addition_note =
                "sum of classes " + std::to_string(c1) + " and " +
                std::to_string(c2) + " depends on representatives (" +
                std::to_string(x) + "/" + std::to_string(s) + " + " +
                std::to_string(y) + "/" + std::to_string(tt) + ")";
            break;
          }
        }
        if (!loc.addition_supported) break;
      }
      if (loc.addition_supported)
        loc.add_class_table[c1 * k + c2] = static_cast<Elem>(expected);
    }
  if (loc.addition_supported) {
    for (size_t c = 0; c < k && loc.addition_supported; ++c) {
      if (loc.add_class_table[0 * k + c] != static_cast<Elem>(c)) {
        loc.addition_supported = false;
        loc.addition_note = "zero class is not an additive identity";
      }
    }
    for (size_t c1 = 0; c1 < k && loc.addition_supported; ++c1)
      for (size_t c2 = 0; c2 < k && loc.addition_supported; ++c2) {
        if (loc.add_class_table[c1 * k + c2] !=
            loc.add_class_table[c2 * k + c1]) {
          loc.addition_supported = false;
          loc.addition_note = "class addition is not commutative";
          break;
        }
        for (size_t c3 = 0; c3 < k; ++c3) {
          const Elem left =
              loc.add_class_table[static_cast<size_t>(
                                      loc.add_class_table[c1 * k + c2]) *
                                      k +
                                  c3];
          const Elem right =
              loc.add_class_table[c1 * k + static_cast<size_t>(
                                               loc.add_class_table[c2 * k +
                                                                   c3])];
          if (left != right) {
            loc.addition_supported = false;
            loc.addition_note = "class addition is not associative";
            break;
          }
        }
      }
  }
  if (!loc.addition_supported) loc.add_class_table.clear();

  const Elem s0 = system.members.front();
  const Elem den0 = t.tern(0, s0, s0, s0);
  loc.canonical_class.resize(m.size);
  for (Elem x = 0; x < m.size; ++x)
    loc.canonical_class[x] = loc.class_of(m.act(0, s0, x, s0), den0);

  if (loc.addition_supported && k <= 64) {
    std::vector<std::string> labels;
    for (size_t c = 0; c < k; ++c) labels.push_back(loc.class_label(c));
    Limits view_limits = limits;
    view_limits.max_carrier = 64;
    loc.view = build_module_from_tables(t, static_cast<int>(k),
                                        loc.add_class_table, loc.action_class,
                                        labels, view_limits);
  }
  return loc;
}

inline LocalizedModule localize_module_at_prime(const GammaModule& m,
                                                const GammaIdeal& prime,
                                                const Limits& limits = {}) {
  return localize_module(m, prime_complement(*m.parent, prime), limits);
}

// Sections of the associated sheaf over the basic open of a: the fraction
// module over the system a generates.  A degenerate system (closure reaching
// zero) propagates as DegenerateSystem.
inline LocalizedModule associated_sheaf_sections(const GammaModule& m, Elem a,
                                                 const Limits& limits = {}) {
  return localize_module(m, generated_mult_system(*m.parent, {a}), limits);
}

struct ModuleCanonicalMapReport {
  bool zero_ok = false;
  bool action_ok = false;
  bool additive_checked = false;
  bool additive_ok = false;
  std::vector<std::string> failures;

  bool ok() const {
    return zero_ok && action_ok && (!additive_checked || additive_ok);
  }
};

// Checks that x -> x/s0 transports whatever structure exists on both sides:
// the zero, the scalar action, and (when class addition is supported) sums.
inline ModuleCanonicalMapReport verify_module_canonical_map(
    const LocalizedModule& loc) {
  const GammaModule& m = *loc.source;
  const TernarySemiring& t = *m.parent;
  ModuleCanonicalMapReport report;
  report.zero_ok = loc.canonical_class[0] == 0;
  if (!report.zero_ok)
    report.failures.push_back("0 does not map to the zero class");
  report.action_ok = true;
  for (GammaIdx g = 0; g < t.gamma_count && report.action_ok; ++g)
    for (Elem a = 0; a < t.n && report.action_ok; ++a)
      for (Elem x = 0; x < m.size && report.action_ok; ++x)
        for (Elem b = 0; b < t.n; ++b) {
          const int lhs = loc.canonical_class[m.act(g, a, x, b)];
          const int rhs = loc.act_class(g, a, loc.canonical_class[x], b);
          if (lhs != rhs) {
            report.action_ok = false;
            report.failures.push_back(
                "action law breaks at {" + std::to_string(a) + "," +
                std::to_string(x) + "," + std::to_string(b) + "}_" +
                t.gamma_names[g]);
            break;
          }
        }
  if (loc.addition_supported) {
    report.additive_checked = true;
    report.additive_ok = true;
    for (Elem x = 0; x < m.size && report.additive_ok; ++x)
      for (Elem y = 0; y < m.size; ++y) {
        const int lhs = loc.canonical_class[m.add(x, y)];
        const int rhs =
            loc.add_class(loc.canonical_class[x], loc.canonical_class[y]);
        if (lhs != rhs) {
          report.additive_ok = false;
          report.failures.push_back("additive law breaks at " +
                                    std::to_string(x) + "+" +
                                    std::to_string(y));
          break;
        }
      }
  }
  return report;
}

}  // namespace gammaspec
