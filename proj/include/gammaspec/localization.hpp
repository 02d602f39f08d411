#pragma once

// Fractions over a multiplicative system: T x S modulo the cubic-scaling
// relation (a,s) ~ (b,t) iff {u,a,{ttt}_g}_d = {u,b,{sss}_h}_d for some
// u in S and g,d,h in Gamma.  The equivalence used is the transitive closure
// of that raw relation; a diagnostic records whether closure added anything.
//
// The class product {a/s, b/t, c/v}_g = {abc}_g / {stv}_g is verified to be
// representative-independent over every representative triple; dependence is
// a hard error because it would make the quotient structure meaningless.
//
// Class addition has no definition in the underlying theory.  The candidate
//   a/s + b/t := ({a,t,t}_g0 + {b,s,t}_g0) / {s,t,t}_g0     (g0 = index 0)
// is adopted only when it survives a full representative-independence and
// commutative-monoid check on the instance at hand; otherwise the localized
// structure is exposed as multiplicative-only with addition_supported false.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gammaspec/core.hpp"
#include "gammaspec/homomorphism.hpp"
#include "gammaspec/ideal.hpp"
#include "gammaspec/mult_system.hpp"
#include "gammaspec/semiring.hpp"
#include "gammaspec/verify.hpp"

namespace gammaspec {

struct LocalizedSemiring {
  const TernarySemiring* source = nullptr;
  MultiplicativeSystem system;

  // All (numerator, denominator) pairs, numerator-major, denominators in
  // system order.  pair_class maps a pair index to its class index; classes
  // lists each class as sorted pair indices.  Class 0 is the zero class
  // {(0,s) : s in S}.
  std::vector<std::pair<Elem, Elem>> pairs;
  std::vector<int> pair_class;
  std::vector<std::vector<int>> classes;

  // Operation tables on class indices.  class_tern is [g][c1][c2][c3];
  // class_add is [c1][c2] and empty unless addition_supported.
  std::vector<Elem> class_tern;
  std::vector<Elem> class_add;
  bool addition_supported = false;
  std::string addition_note;

  bool raw_relation_transitive = false;

  // canonical_class[a] = class of ({a,s0,s0}_g0 / {s0,s0,s0}_g0), least s0.
  std::vector<int> canonical_class;

  // First gamma index making {s/s, s/s, x}_g = x for every class x, per
  // system member; empty optional when no gamma works.
  std::vector<std::optional<GammaIdx>> local_unit_gamma;
  bool all_local_units = false;

  // Class-level semiring built from the tables; present only when addition
  // is supported and the class count fits construction caps.
  std::optional<TernarySemiring> view;

  int num_classes() const { return static_cast<int>(classes.size()); }

  int pair_index(Elem a, Elem s) const {
    const auto it =
        std::lower_bound(system.members.begin(), system.members.end(), s);
    if (it == system.members.end() || *it != s)
      throw InvalidInput("denominator " + std::to_string(s) +
                         " is not in the system");
    return a * system.size() +
           static_cast<int>(it - system.members.begin());
  }

  int class_of(Elem a, Elem s) const { return pair_class[pair_index(a, s)]; }

  Elem tern_class(GammaIdx g, int c1, int c2, int c3) const {
    const size_t k = static_cast<size_t>(num_classes());
    return class_tern[((static_cast<size_t>(g) * k + c1) * k + c2) * k + c3];
  }

  Elem add_class(int c1, int c2) const {
    if (!addition_supported)
      throw InvalidInput("class addition is unsupported on this localization");
    return class_add[static_cast<size_t>(c1) * num_classes() + c2];
  }

  // Least pair of the class, written numerator/denominator.
  std::string class_label(int c) const {
    const auto& p = pairs[classes[c].front()];
    return source->element_names[p.first] + "/" +
           source->element_names[p.second];
  }
};

namespace detail {

// Scan for the cubic-scaling identity between two pairs.  Witness order is
// ascending u, then lexicographic (g, d, h); only existence is returned.
inline bool cubic_scaling_related(const TernarySemiring& t,
                                  const MultiplicativeSystem& sys,
                                  const std::vector<Elem>& cubes, Elem a,
                                  Elem s, Elem b, Elem tt) {
  const int gc = t.gamma_count;
  for (Elem u : sys.members)
    for (GammaIdx g = 0; g < gc; ++g) {
      const Elem tcube = cubes[static_cast<size_t>(g) * t.n + tt];
      for (GammaIdx d = 0; d < gc; ++d) {
        const Elem lhs = t.tern(d, u, a, tcube);
        for (GammaIdx h = 0; h < gc; ++h)
          if (lhs == t.tern(d, u, b, cubes[static_cast<size_t>(h) * t.n + s]))
            return true;
      }
    }
  return false;
}

}  // namespace detail

inline LocalizedSemiring localize(const TernarySemiring& t,
                                  const MultiplicativeSystem& system,
                                  const Limits& limits = {}) {
  if (system.parent != &t)
    throw InvalidInput("system belongs to a different semiring");
  LocalizedSemiring loc;
  loc.source = &t;
  loc.system = system;
  const int ns = system.size();
  const int64_t pair_count = static_cast<int64_t>(t.n) * ns;
  if (pair_count > limits.max_stalk_classes)
    throw CapExceeded("localization needs " + std::to_string(pair_count) +
                      " pairs > cap " +
                      std::to_string(limits.max_stalk_classes));
  for (Elem a = 0; a < t.n; ++a)
    for (Elem s : system.members) loc.pairs.emplace_back(a, s);
  const int np = static_cast<int>(loc.pairs.size());

  std::vector<Elem> cubes(static_cast<size_t>(t.gamma_count) * t.n);
  for (GammaIdx g = 0; g < t.gamma_count; ++g)
    for (Elem x = 0; x < t.n; ++x)
      cubes[static_cast<size_t>(g) * t.n + x] = t.tern(g, x, x, x);

  // Raw relation as a bit matrix, then union-find for the closure.
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
      const auto [a, s] = loc.pairs[p];
      const auto [b, tt] = loc.pairs[q];
      if (detail::cubic_scaling_related(t, system, cubes, a, s, b, tt)) {
        raw_set(p, q);
        raw_set(q, p);
        parent[find(p)] = find(q);
      }
    }
  }
  // Classes in order of least member pair; pair 0 is (0, least s), whose
  // class absorbs every (0, s) since both identity sides are 0.
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

  // Product tables from least representatives.
  const size_t k = loc.classes.size();
  loc.class_tern.assign(static_cast<size_t>(t.gamma_count) * k * k * k, 0);
  for (GammaIdx g = 0; g < t.gamma_count; ++g)
    for (size_t c1 = 0; c1 < k; ++c1)
      for (size_t c2 = 0; c2 < k; ++c2)
        for (size_t c3 = 0; c3 < k; ++c3) {
          const auto [a, s] = loc.pairs[loc.classes[c1].front()];
          const auto [b, u] = loc.pairs[loc.classes[c2].front()];
          const auto [c, v] = loc.pairs[loc.classes[c3].front()];
          loc.class_tern[((static_cast<size_t>(g) * k + c1) * k + c2) * k +
                         c3] =
              loc.class_of(t.tern(g, a, b, c), t.tern(g, s, u, v));
        }

  // Representative independence, exhaustively over all pair triples.  The
  // scan is chunked on the flattened index; the first violation in index
  // order wins, so the outcome is thread-count independent.
  struct RepViolation {
    int64_t flat;
    std::string text;
  };
  std::vector<std::optional<RepViolation>> first_violation(
      std::max(1, thread_count()));
  const int64_t total =
      static_cast<int64_t>(t.gamma_count) * np * np * np;
  detail::parallel_chunks(total, [&](int chunk, int64_t begin, int64_t end) {
    std::optional<RepViolation>& slot =
        first_violation[static_cast<size_t>(chunk) % first_violation.size()];
    for (int64_t flat = begin; flat < end; ++flat) {
      if (slot && slot->flat < flat) break;
      int64_t rest = flat;
      const int p3 = static_cast<int>(rest % np);
      rest /= np;
      const int p2 = static_cast<int>(rest % np);
      rest /= np;
      const int p1 = static_cast<int>(rest % np);
      const GammaIdx g = static_cast<GammaIdx>(rest / np);
      const auto [a, s] = loc.pairs[p1];
      const auto [b, u] = loc.pairs[p2];
      const auto [c, v] = loc.pairs[p3];
      const int got = loc.class_of(t.tern(g, a, b, c), t.tern(g, s, u, v));
      const int want = loc.tern_class(g, loc.pair_class[p1],
                                      loc.pair_class[p2], loc.pair_class[p3]);
      if (got != want && (!slot || flat < slot->flat)) {
        slot = RepViolation{
            flat, "class product depends on representatives: {" +
                      std::to_string(a) + "/" + std::to_string(s) + ", " +
                      std::to_string(b) + "/" + std::to_string(u) + ", " +
                      std::to_string(c) + "/" + std::to_string(v) + "}_" +
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
  loc.class_add.assign(k * k, 0);
  for (size_t c1 = 0; c1 < k && loc.addition_supported; ++c1)
    for (size_t c2 = 0; c2 < k && loc.addition_supported; ++c2) {
      int expected = -1;
      for (int p1 : loc.classes[c1]) {
        for (int p2 : loc.classes[c2]) {
          const auto [a, s] = loc.pairs[p1];
          const auto [b, tt] = loc.pairs[p2];
          const Elem num = t.add(t.tern(0, a, tt, tt), t.tern(0, b, s, tt));
          const Elem den = t.tern(0, s, tt, tt);
          const int got = loc.class_of(num, den);
          if (expected < 0) {
            expected = got;
          } else if (got != expected) {
            loc.addition_supported = false;
            loc.addition_note =
                "sum of classes " + std::to_string(c1) + " and " +
                std::to_string(c2) + " depends on representatives (" +
                std::to_string(a) + "/" + std::to_string(s) + " + " +
                std::to_string(b) + "/" + std::to_string(tt) + ")";
            break;
          }
        }
        if (!loc.addition_supported) break;
      }
      if (loc.addition_supported)
        loc.class_add[c1 * k + c2] = static_cast<Elem>(expected);
    }
  if (loc.addition_supported) {
    for (size_t c = 0; c < k && loc.addition_supported; ++c) {
      if (loc.class_add[0 * k + c] != static_cast<Elem>(c)) {
        loc.addition_supported = false;
        loc.addition_note = "zero class is not an additive identity";
      }
    }
    for (size_t c1 = 0; c1 < k && loc.addition_supported; ++c1)
      for (size_t c2 = 0; c2 < k && loc.addition_supported; ++c2) {
        if (loc.class_add[c1 * k + c2] != loc.class_add[c2 * k + c1]) {
          loc.addition_supported = false;
          loc.addition_note = "class addition is not commutative";
          break;
        }
        for (size_t c3 = 0; c3 < k; ++c3) {
          const Elem left =
              loc.class_add[static_cast<size_t>(
                                loc.class_add[c1 * k + c2]) *
                                k +
                            c3];
          const Elem right =
              loc.class_add[c1 * k +
                            static_cast<size_t>(loc.class_add[c2 * k + c3])];
          if (left != right) {
            loc.addition_supported = false;
            loc.addition_note = "class addition is not associative";
            break;
          }
        }
      }
  }
  if (!loc.addition_supported) loc.class_add.clear();

  // Canonical embedding via a/s0 = {a,s0,s0}/{s0,s0,s0}.
  const Elem s0 = system.members.front();
  const Elem den0 = t.tern(0, s0, s0, s0);
  loc.canonical_class.resize(t.n);
  for (Elem a = 0; a < t.n; ++a)
    loc.canonical_class[a] = loc.class_of(t.tern(0, a, s0, s0), den0);

  // Local-unit scan: first gamma making s/s an identity for the gamma's
  // class product, per system member.
  loc.all_local_units = true;
  for (Elem s : system.members) {
    const int css = loc.class_of(s, s);
    std::optional<GammaIdx> found;
    for (GammaIdx g = 0; g < t.gamma_count && !found; ++g) {
      bool identity = true;
      for (size_t x = 0; x < k; ++x)
        if (loc.tern_class(g, css, css, static_cast<int>(x)) !=
            static_cast<Elem>(x)) {
          identity = false;
          break;
        }
      if (identity) found = g;
    }
    loc.local_unit_gamma.push_back(found);
    if (!found) loc.all_local_units = false;
  }

  if (loc.addition_supported && k <= 64) {
    std::vector<std::string> labels;
    for (size_t c = 0; c < k; ++c) labels.push_back(loc.class_label(c));
    Limits view_limits = limits;
    view_limits.max_carrier = 64;
    view_limits.max_gamma = std::max(limits.max_gamma, t.gamma_count);
    loc.view = build_from_tables(static_cast<int>(k), t.gamma_names,
                                 loc.class_add, loc.class_tern, labels,
                                 view_limits);
  }
  return loc;
}

inline LocalizedSemiring localize_at_prime(const TernarySemiring& t,
                                           const GammaIdeal& prime,
                                           const Limits& limits = {}) {
  return localize(t, prime_complement(t, prime), limits);
}

struct CanonicalMapReport {
  bool zero_ok = false;
  bool ternary_ok = false;
  bool additive_checked = false;
  bool additive_ok = false;
  std::vector<std::string> failures;

  bool ok() const {
    return zero_ok && ternary_ok && (!additive_checked || additive_ok);
  }
};

// The canonical map must transport every law that exists on both sides; the
// additive law is checkable only when class addition is supported.
inline CanonicalMapReport verify_canonical_map(const LocalizedSemiring& loc) {
  const TernarySemiring& t = *loc.source;
  CanonicalMapReport report;
  report.zero_ok = loc.canonical_class[0] == 0;
  if (!report.zero_ok) report.failures.push_back("0 does not map to the zero class");
  report.ternary_ok = true;
  for (GammaIdx g = 0; g < t.gamma_count && report.ternary_ok; ++g)
    for (Elem a = 0; a < t.n && report.ternary_ok; ++a)
      for (Elem b = 0; b < t.n && report.ternary_ok; ++b)
        for (Elem c = 0; c < t.n; ++c) {
          const int lhs = loc.canonical_class[t.tern(g, a, b, c)];
          const int rhs =
              loc.tern_class(g, loc.canonical_class[a], loc.canonical_class[b],
                             loc.canonical_class[c]);
          if (lhs != rhs) {
            report.ternary_ok = false;
            report.failures.push_back(
                "ternary law breaks at {" + std::to_string(a) + "," +
                std::to_string(b) + "," + std::to_string(c) + "}_" +
                t.gamma_names[g]);
            break;
          }
        }
  if (loc.addition_supported) {
    report.additive_checked = true;
    report.additive_ok = true;
    for (Elem a = 0; a < t.n && report.additive_ok; ++a)
      for (Elem b = 0; b < t.n; ++b) {
        const int lhs = loc.canonical_class[t.add(a, b)];
        const int rhs =
            loc.add_class(loc.canonical_class[a], loc.canonical_class[b]);
        if (lhs != rhs) {
          report.additive_ok = false;
          report.failures.push_back("additive law breaks at " +
                                    std::to_string(a) + "+" +
                                    std::to_string(b));
          break;
        }
      }
  }
  return report;
}

struct UniversalPropertyReport {
  bool precondition_ok = false;
  std::vector<Elem> non_invertible_images;
  int64_t factorization_count = 0;
  bool unique = false;
  // Populated when unique: class index -> target element, plus the gamma
  // map (always the gamma map of f, forced by commutation with the
  // canonical embedding).
  std::vector<Elem> factor_element_map;
  std::vector<GammaIdx> factor_gamma_map;
  std::string obstruction;
};

// Counts homomorphisms h : S^{-1}T -> R with h(canonical(a)) = f(a).  The
// commutation requirement pins h on every class the canonical map hits and
// pins h's gamma map to f's, so the enumeration below walks exactly the
// candidate factorizations; free classes are filled by backtracking.
inline UniversalPropertyReport check_universal_property(
    const LocalizedSemiring& loc, const TGHomomorphism& f) {
  const TernarySemiring& t = *loc.source;
  if (f.source != &t)
    throw InvalidInput("map does not start at the localized semiring's source");
  if (!verify_homomorphism(f).ok)
    throw InvalidInput("map is not a verified homomorphism");
  const TernarySemiring& r = *f.target;
  UniversalPropertyReport report;
  for (Elem s : loc.system.members)
    if (!find_gamma_inverse(r, f.element_map[s]))
      report.non_invertible_images.push_back(f.element_map[s]);
  report.precondition_ok = report.non_invertible_images.empty();
  if (!report.precondition_ok) return report;

  const int k = loc.num_classes();
  std::vector<Elem> assign(k, -1);
  for (Elem a = 0; a < t.n; ++a) {
    const int c = loc.canonical_class[a];
    if (assign[c] < 0) {
      assign[c] = f.element_map[a];
    } else if (assign[c] != f.element_map[a]) {
      report.obstruction = "canonical classes force conflicting values: "
                           "class " +
                           std::to_string(c) + " needs both " +
                           std::to_string(assign[c]) + " and " +
                           std::to_string(f.element_map[a]);
      return report;
    }
  }
  std::vector<int> free_classes;
  for (int c = 0; c < k; ++c)
    if (assign[c] < 0) free_classes.push_back(c);
  double space = 1;
  for (size_t i = 0; i < free_classes.size(); ++i) space *= r.n;
  if (space > 2e6)
    throw CapExceeded("universal-property search space too large (" +
                      std::to_string(free_classes.size()) +
                      " unconstrained classes)");

  auto is_hom = [&loc, &r, &f, k](const std::vector<Elem>& h) {
    if (h[0] != 0) return false;
    if (loc.addition_supported) {
      for (int c1 = 0; c1 < k; ++c1)
        for (int c2 = 0; c2 < k; ++c2)
          if (h[loc.add_class(c1, c2)] != r.add(h[c1], h[c2])) return false;
    }
    for (GammaIdx g = 0; g < loc.source->gamma_count; ++g)
      for (int c1 = 0; c1 < k; ++c1)
        for (int c2 = 0; c2 < k; ++c2)
          for (int c3 = 0; c3 < k; ++c3)
            if (h[loc.tern_class(g, c1, c2, c3)] !=
                r.tern(f.gamma_map[g], h[c1], h[c2], h[c3]))
              return false;
    return true;
  };
  std::function<void(size_t)> walk = [&](size_t depth) {
    if (depth == free_classes.size()) {
      if (is_hom(assign)) {
        ++report.factorization_count;
        if (report.factorization_count == 1) {
          report.factor_element_map = assign;
          report.factor_gamma_map = f.gamma_map;
        }
      }
      return;
    }
    for (Elem v = 0; v < r.n; ++v) {
      assign[free_classes[depth]] = v;
      walk(depth + 1);
    }
    assign[free_classes[depth]] = -1;
  };
  walk(0);
  report.unique = report.factorization_count == 1;
  if (!report.unique) {
    report.factor_element_map.clear();
    report.factor_gamma_map.clear();
  }
  return report;
}

}  // namespace gammaspec
