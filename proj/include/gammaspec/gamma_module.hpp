#pragma once

// Modules over a ternary semiring: an additive commutative monoid M with a
// triadic action (a, m, b, gamma) -> {amb}_g placing the module element in
// the middle slot.  Laws checked here: monoid axioms, distributivity in all
// three slots, zero absorption on every slot, symmetry of the scalar slots,
// and the interchange law {a,{cmd}_d,b}_g = {c,{amb}_g,d}_d that ties nested
// actions together.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "gammaspec/core.hpp"
#include "gammaspec/semiring.hpp"

namespace gammaspec {

struct GammaModule {
  const TernarySemiring* parent = nullptr;
  int size = 0;  // carrier indices 0..size-1 with 0 the additive zero
  std::vector<std::string> element_names;
  std::vector<Elem> add_table;     // size * size
  std::vector<Elem> action_table;  // [g][a][m][b], scalars over the parent
  bool group_complete = false;     // every element has an additive inverse

  Elem add(Elem x, Elem y) const {
    return add_table[static_cast<size_t>(x) * size + y];
  }
  Elem act(GammaIdx g, Elem a, Elem m, Elem b) const {
    const auto n = static_cast<size_t>(parent->n);
    return action_table[((static_cast<size_t>(g) * n + a) * size + m) * n + b];
  }
};

inline GammaModule build_module_from_tables(
    const TernarySemiring& t, int size, std::vector<Elem> add_table,
    std::vector<Elem> action_table,
    std::vector<std::string> element_names = {}, const Limits& limits = {}) {
  if (size < 1)
    throw InvalidInput("module carrier must be nonempty");
  if (size > limits.max_carrier)
    throw CapExceeded("module carrier size " + std::to_string(size) +
                      " exceeds cap " + std::to_string(limits.max_carrier));
  if (add_table.size() != static_cast<size_t>(size) * size)
    throw InvalidInput("module add table must have size^2 entries");
  const size_t want = static_cast<size_t>(t.gamma_count) * t.n * size * t.n;
  if (action_table.size() != want)
    throw InvalidInput("action table must have gamma_count*n*size*n entries");
  for (Elem e : add_table)
    if (e < 0 || e >= size)
      throw InvalidInput("module add table entry out of range");
  for (Elem e : action_table)
    if (e < 0 || e >= size)
      throw InvalidInput("module action table entry out of range");
  GammaModule m;
  m.parent = &t;
  m.size = size;
  m.add_table = std::move(add_table);
  m.action_table = std::move(action_table);
  if (element_names.empty()) {
    for (int x = 0; x < size; ++x)
      m.element_names.push_back(std::to_string(x));
  } else {
    if (element_names.size() != static_cast<size_t>(size))
      throw InvalidInput("module needs one name per element");
    m.element_names = std::move(element_names);
  }
  m.group_complete = true;
  for (Elem x = 0; x < size && m.group_complete; ++x) {
    bool has_inverse = false;
    for (Elem y = 0; y < size; ++y)
      if (m.add(x, y) == 0) {
        has_inverse = true;
        break;
      }
    m.group_complete = has_inverse;
  }
  return m;
}

// Quotient module Z/m over a modular semiring Z/n, m dividing n; the action
// is gamma*a*x*b reduced mod m.  Gamma residues are recovered from the
// parent's tables, so this works on any semiring built by build_modular.
inline GammaModule build_modular_module(const TernarySemiring& t, int m,
                                        const Limits& limits = {}) {
  if (m < 1 || t.n % m != 0)
    throw InvalidInput("module size " + std::to_string(m) +
                       " does not divide the carrier size " +
                       std::to_string(t.n));
  std::vector<Elem> add(static_cast<size_t>(m) * m);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) add[static_cast<size_t>(x) * m + y] = (x + y) % m;
  std::vector<Elem> action(static_cast<size_t>(t.gamma_count) * t.n * m * t.n);
  for (GammaIdx g = 0; g < t.gamma_count; ++g) {
    // gamma residue = {1,1,1}_g when the carrier has a 1; degenerate Z/1
    // parents only admit the zero module, handled by m = 1 below.
    const int64_t gamma = t.n > 1 ? t.tern(g, 1, 1, 1) : 0;
    for (Elem a = 0; a < t.n; ++a)
      for (Elem x = 0; x < m; ++x)
        for (Elem b = 0; b < t.n; ++b)
          action[((static_cast<size_t>(g) * t.n + a) * m + x) * t.n + b] =
              static_cast<Elem>(gamma * a % m * x % m * b % m);
  }
  return build_module_from_tables(t, m, std::move(add), std::move(action), {},
                                  limits);
}

// The semiring as a module over itself; the action is the ternary product.
inline GammaModule module_from_semiring(const TernarySemiring& t,
                                        const Limits& limits = {}) {
  std::vector<Elem> action(static_cast<size_t>(t.gamma_count) * t.n * t.n *
                           t.n);
  for (GammaIdx g = 0; g < t.gamma_count; ++g)
    for (Elem a = 0; a < t.n; ++a)
      for (Elem x = 0; x < t.n; ++x)
        for (Elem b = 0; b < t.n; ++b)
          action[((static_cast<size_t>(g) * t.n + a) * t.n + x) * t.n + b] =
              t.tern(g, a, x, b);
  return build_module_from_tables(t, t.n, t.add_table, std::move(action),
                                  t.element_names, limits);
}

// Componentwise sum of two modules over the same semiring; element (x, y) is
// indexed x * right.size + y.
inline GammaModule direct_sum_module(const GammaModule& left,
                                     const GammaModule& right,
                                     const Limits& limits = {}) {
  if (left.parent != right.parent)
    throw InvalidInput("direct sum factors live over different semirings");
  const TernarySemiring& t = *left.parent;
  const int k = left.size * right.size;
  std::vector<Elem> add(static_cast<size_t>(k) * k);
  std::vector<std::string> names(k);
  for (Elem x = 0; x < k; ++x) {
    names[x] = "(" + left.element_names[x / right.size] + "," +
               right.element_names[x % right.size] + ")";
    for (Elem y = 0; y < k; ++y)
      add[static_cast<size_t>(x) * k + y] =
          left.add(x / right.size, y / right.size) * right.size +
          right.add(x % right.size, y % right.size);
  }
  std::vector<Elem> action(static_cast<size_t>(t.gamma_count) * t.n * k * t.n);
  for (GammaIdx g = 0; g < t.gamma_count; ++g)
    for (Elem a = 0; a < t.n; ++a)
      for (Elem x = 0; x < k; ++x)
        for (Elem b = 0; b < t.n; ++b)
          action[((static_cast<size_t>(g) * t.n + a) * k + x) * t.n + b] =
              left.act(g, a, x / right.size, b) * right.size +
              right.act(g, a, x % right.size, b);
  return build_module_from_tables(t, k, std::move(add), std::move(action),
                                  std::move(names), limits);
}

// A subset of a module closed under addition and the action, relabeled to
// its own carrier.  members maps the new indices back to the parent module.
struct Submodule {
  GammaModule module;
  std::vector<Elem> members;  // ascending, members[0] == 0
};

inline Submodule submodule_from_members(const GammaModule& m,
                                        std::vector<Elem> members,
                                        const Limits& limits = {}) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (!members.empty() && (members.front() < 0 || members.back() >= m.size))
    throw InvalidInput("submodule member outside the module carrier");
  if (members.empty() || members.front() != 0)
    throw InvalidInput("a submodule must contain the zero element");
  const TernarySemiring& t = *m.parent;
  const int k = static_cast<int>(members.size());
  std::vector<int> index(m.size, -1);
  for (int i = 0; i < k; ++i) index[members[i]] = i;
  auto inside = [&](Elem parent_elem, const char* op) {
    if (index[parent_elem] < 0)
      throw InvalidInput(std::string("subset is not closed under ") + op);
    return static_cast<Elem>(index[parent_elem]);
  };
  std::vector<Elem> add(static_cast<size_t>(k) * k);
  std::vector<std::string> names(k);
  for (int i = 0; i < k; ++i) {
    names[i] = m.element_names[members[i]];
    for (int j = 0; j < k; ++j)
      add[static_cast<size_t>(i) * k + j] =
          inside(m.add(members[i], members[j]), "addition");
  }
  std::vector<Elem> action(static_cast<size_t>(t.gamma_count) * t.n * k * t.n);
  for (GammaIdx g = 0; g < t.gamma_count; ++g)
    for (Elem a = 0; a < t.n; ++a)
      for (int i = 0; i < k; ++i)
        for (Elem b = 0; b < t.n; ++b)
          action[((static_cast<size_t>(g) * t.n + a) * k + i) * t.n + b] =
              inside(m.act(g, a, members[i], b), "the action");
  Submodule out;
  out.module = build_module_from_tables(t, k, std::move(add),
                                        std::move(action), std::move(names),
                                        limits);
  out.members = std::move(members);
  return out;
}

enum class ModuleLaw {
  kAddAssociativity,
  kAddCommutativity,
  kAddZero,
  kZeroModuleAbsorbs,
  kZeroScalarAbsorbs,
  kScalarSlotSymmetry,
  kDistributesOverScalarSum,
  kDistributesOverModuleSum,
  kInterchange,
};

inline const char* module_law_name(ModuleLaw law) {
  switch (law) {
    case ModuleLaw::kAddAssociativity: return "additive associativity";
    case ModuleLaw::kAddCommutativity: return "additive commutativity";
    case ModuleLaw::kAddZero: return "additive zero";
    case ModuleLaw::kZeroModuleAbsorbs: return "zero module element absorbs";
    case ModuleLaw::kZeroScalarAbsorbs: return "zero scalar absorbs";
    case ModuleLaw::kScalarSlotSymmetry: return "scalar slot symmetry";
    case ModuleLaw::kDistributesOverScalarSum:
      return "distributivity over scalar sums";
    case ModuleLaw::kDistributesOverModuleSum:
      return "distributivity over module sums";
    case ModuleLaw::kInterchange: return "interchange of nested actions";
  }
  return "unknown";
}

struct ModuleViolation {
  ModuleLaw law;
  // Meaning depends on the law; unused slots stay 0.  For action laws the
  // tuple is (gamma, a, x, b) plus the secondary tuple (delta, c, y, d).
  GammaIdx gamma = 0, delta = 0;
  Elem a = 0, x = 0, b = 0, c = 0, y = 0, d = 0;
  Elem lhs = 0, rhs = 0;
};

struct ModuleAxiomReport {
  bool ok = true;
  std::vector<ModuleViolation> violations;
  bool truncated = false;
};

// Recomputes both sides of the violated law from the tables.
inline bool replay_module_violation(const GammaModule& m,
                                    const ModuleViolation& v) {
  Elem lhs = 0, rhs = 0;
  switch (v.law) {
    case ModuleLaw::kAddAssociativity:
      lhs = m.add(m.add(v.x, v.y), v.d);
      rhs = m.add(v.x, m.add(v.y, v.d));
      break;
    case ModuleLaw::kAddCommutativity:
      lhs = m.add(v.x, v.y);
      rhs = m.add(v.y, v.x);
      break;
    case ModuleLaw::kAddZero:
      lhs = m.add(0, v.x);
      rhs = v.x;
      break;
    case ModuleLaw::kZeroModuleAbsorbs:
      lhs = m.act(v.gamma, v.a, 0, v.b);
      rhs = 0;
      break;
    case ModuleLaw::kZeroScalarAbsorbs:
      lhs = v.a == 0 ? m.act(v.gamma, 0, v.x, v.b)
                     : m.act(v.gamma, v.a, v.x, 0);
      rhs = 0;
      break;
    case ModuleLaw::kScalarSlotSymmetry:
      lhs = m.act(v.gamma, v.a, v.x, v.b);
      rhs = m.act(v.gamma, v.b, v.x, v.a);
      break;
    case ModuleLaw::kDistributesOverScalarSum:
      lhs = m.act(v.gamma, m.parent->add(v.a, v.c), v.x, v.b);
      rhs = m.add(m.act(v.gamma, v.a, v.x, v.b), m.act(v.gamma, v.c, v.x, v.b));
      break;
    case ModuleLaw::kDistributesOverModuleSum:
      lhs = m.act(v.gamma, v.a, m.add(v.x, v.y), v.b);
      rhs = m.add(m.act(v.gamma, v.a, v.x, v.b), m.act(v.gamma, v.a, v.y, v.b));
      break;
    case ModuleLaw::kInterchange:
      lhs = m.act(v.gamma, v.a, m.act(v.delta, v.c, v.x, v.d), v.b);
      rhs = m.act(v.delta, v.c, m.act(v.gamma, v.a, v.x, v.b), v.d);
      break;
  }
  return lhs == v.lhs && rhs == v.rhs && lhs != rhs;
}

// Laws are scanned in ModuleLaw declaration order with lexicographic index
// order inside each law, so reports are deterministic.
inline ModuleAxiomReport verify_module_axioms(const GammaModule& m,
                                              int violation_limit = 100) {
  ModuleAxiomReport report;
  const TernarySemiring& t = *m.parent;
  auto record = [&report, violation_limit](const ModuleViolation& v) {
    report.ok = false;
    if (static_cast<int>(report.violations.size()) < violation_limit)
      report.violations.push_back(v);
    else
      report.truncated = true;
  };

  for (Elem x = 0; x < m.size; ++x)
    for (Elem y = 0; y < m.size; ++y)
      for (Elem z = 0; z < m.size; ++z) {
        const Elem lhs = m.add(m.add(x, y), z);
        const Elem rhs = m.add(x, m.add(y, z));
        if (lhs != rhs)
          record({ModuleLaw::kAddAssociativity, 0, 0, 0, x, 0, 0, y, z, lhs,
                  rhs});
      }
  for (Elem x = 0; x < m.size; ++x)
    for (Elem y = 0; y < m.size; ++y) {
      const Elem lhs = m.add(x, y);
      const Elem rhs = m.add(y, x);
      if (lhs != rhs)
        record({ModuleLaw::kAddCommutativity, 0, 0, 0, x, 0, 0, y, 0, lhs,
                rhs});
    }
  for (Elem x = 0; x < m.size; ++x) {
    const Elem lhs = m.add(0, x);
    if (lhs != x)
      record({ModuleLaw::kAddZero, 0, 0, 0, x, 0, 0, 0, 0, lhs, x});
  }
  for (GammaIdx g = 0; g < t.gamma_count; ++g)
    for (Elem a = 0; a < t.n; ++a)
      for (Elem b = 0; b < t.n; ++b) {
        const Elem lhs = m.act(g, a, 0, b);
        if (lhs != 0)
          record({ModuleLaw::kZeroModuleAbsorbs, g, 0, a, 0, b, 0, 0, 0, lhs,
                  0});
      }
  for (GammaIdx g = 0; g < t.gamma_count; ++g)
    for (Elem x = 0; x < m.size; ++x)
      for (Elem b = 0; b < t.n; ++b) {
        const Elem left = m.act(g, 0, x, b);
        if (left != 0)
          record({ModuleLaw::kZeroScalarAbsorbs, g, 0, 0, x, b, 0, 0, 0, left,
                  0});
        const Elem right = m.act(g, b, x, 0);
        if (right != 0)
          record({ModuleLaw::kZeroScalarAbsorbs, g, 0, b, x, 0, 0, 0, 0, right,
                  0});
      }
  for (GammaIdx g = 0; g < t.gamma_count; ++g)
    for (Elem a = 0; a < t.n; ++a)
      for (Elem x = 0; x < m.size; ++x)
        for (Elem b = a + 1; b < t.n; ++b) {
          const Elem lhs = m.act(g, a, x, b);
          const Elem rhs = m.act(g, b, x, a);
          if (lhs != rhs)
            record({ModuleLaw::kScalarSlotSymmetry, g, 0, a, x, b, 0, 0, 0,
                    lhs, rhs});
        }
  for (GammaIdx g = 0; g < t.gamma_count; ++g)
    for (Elem a = 0; a < t.n; ++a)
      for (Elem c = 0; c < t.n; ++c)
        for (Elem x = 0; x < m.size; ++x)
          for (Elem b = 0; b < t.n; ++b) {
            const Elem lhs = m.act(g, t.add(a, c), x, b);
            const Elem rhs =
                m.add(m.act(g, a, x, b), m.act(g, c, x, b));
            if (lhs != rhs)
              record({ModuleLaw::kDistributesOverScalarSum, g, 0, a, x, b, c,
                      0, 0, lhs, rhs});
          }
  for (GammaIdx g = 0; g < t.gamma_count; ++g)
    for (Elem a = 0; a < t.n; ++a)
      for (Elem x = 0; x < m.size; ++x)
        for (Elem y = 0; y < m.size; ++y)
          for (Elem b = 0; b < t.n; ++b) {
            const Elem lhs = m.act(g, a, m.add(x, y), b);
            const Elem rhs =
                m.add(m.act(g, a, x, b), m.act(g, a, y, b));
            if (lhs != rhs)
              record({ModuleLaw::kDistributesOverModuleSum, g, 0, a, x, b, 0,
                      y, 0, lhs, rhs});
          }
  for (GammaIdx g = 0; g < t.gamma_count; ++g)
    for (GammaIdx d = 0; d < t.gamma_count; ++d)
      for (Elem a = 0; a < t.n; ++a)
        for (Elem b = 0; b < t.n; ++b)
          for (Elem c = 0; c < t.n; ++c)
            for (Elem dd = 0; dd < t.n; ++dd)
              for (Elem x = 0; x < m.size; ++x) {
                const Elem lhs = m.act(g, a, m.act(d, c, x, dd), b);
                const Elem rhs = m.act(d, c, m.act(g, a, x, b), dd);
                if (lhs != rhs)
                  record({ModuleLaw::kInterchange, g, d, a, x, b, c, 0, dd,
                          lhs, rhs});
              }
  return report;
}

}  // namespace gammaspec
