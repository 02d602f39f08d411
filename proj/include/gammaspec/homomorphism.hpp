#pragma once

// Structure-preserving maps between ternary Gamma-semirings: a gamma
// reindexing together with an element map that respects zero, addition, and
// every bracket.  verify_homomorphism() decides the conditions exhaustively
// and reports replayable witnesses in the same style as verify_axioms().

#include <algorithm>
#include <vector>

#include "gammaspec/core.hpp"
#include "gammaspec/semiring.hpp"

namespace gammaspec {

struct TGHomomorphism {
  const TernarySemiring* source = nullptr;
  const TernarySemiring* target = nullptr;
  std::vector<GammaIdx> gamma_map;  // size source->gamma_count
  std::vector<Elem> element_map;    // size source->n
};

enum class HomLaw {
  kZero,     // args: (none)      f(0) must be 0
  kAdd,      // args: a, b        f(a+b) = f(a)+f(b)
  kTernary,  // args: g, a, b, c  f({a,b,c}_g) = {f(a),f(b),f(c)}_gmap(g)
};

inline const char* hom_law_name(HomLaw l) {
  switch (l) {
    case HomLaw::kZero: return "hom-zero";
    case HomLaw::kAdd: return "hom-add";
    case HomLaw::kTernary: return "hom-ternary";
  }
  return "?";
}

struct HomViolation {
  HomLaw law;
  std::vector<int> args;
  bool operator<(const HomViolation& o) const {
    if (law != o.law) return law < o.law;
    return args < o.args;
  }
};

struct HomReport {
  bool ok = true;
  std::vector<HomViolation> violations;
  bool truncated = false;
};

inline bool replay_hom_violation(const TGHomomorphism& f,
                                 const HomViolation& v) {
  const TernarySemiring& s = *f.source;
  const TernarySemiring& d = *f.target;
  const auto& fm = f.element_map;
  switch (v.law) {
    case HomLaw::kZero:
      return fm[0] != 0;
    case HomLaw::kAdd: {
      const Elem a = v.args[0], b = v.args[1];
      return fm[s.add(a, b)] != d.add(fm[a], fm[b]);
    }
    case HomLaw::kTernary: {
      const GammaIdx g = v.args[0];
      const Elem a = v.args[1], b = v.args[2], c = v.args[3];
      return fm[s.tern(g, a, b, c)] !=
             d.tern(f.gamma_map[g], fm[a], fm[b], fm[c]);
    }
  }
  return false;
}

inline HomReport verify_homomorphism(const TGHomomorphism& f,
                                     int violation_limit = 100) {
  if (f.source == nullptr || f.target == nullptr)
    throw InvalidInput("homomorphism is missing source or target");
  const TernarySemiring& s = *f.source;
  const TernarySemiring& d = *f.target;
  if (f.element_map.size() != static_cast<size_t>(s.n))
    throw InvalidInput("element map must cover the source carrier");
  if (f.gamma_map.size() != static_cast<size_t>(s.gamma_count))
    throw InvalidInput("gamma map must cover the source gamma set");
  for (Elem e : f.element_map)
    if (e < 0 || e >= d.n) throw InvalidInput("element map value out of range");
  for (GammaIdx g : f.gamma_map)
    if (g < 0 || g >= d.gamma_count)
      throw InvalidInput("gamma map value out of range");

  HomReport report;
  auto& out = report.violations;
  const auto& fm = f.element_map;
  if (fm[0] != 0) out.push_back({HomLaw::kZero, {}});
  for (Elem a = 0; a < s.n; ++a) {
    for (Elem b = a; b < s.n; ++b) {
      if (static_cast<int>(out.size()) >= violation_limit) break;
      if (fm[s.add(a, b)] != d.add(fm[a], fm[b]))
        out.push_back({HomLaw::kAdd, {a, b}});
    }
  }
  for (GammaIdx g = 0;
       g < s.gamma_count && static_cast<int>(out.size()) < violation_limit;
       ++g)
    for (Elem a = 0; a < s.n; ++a)
      for (Elem b = 0; b < s.n; ++b)
        for (Elem c = 0; c < s.n; ++c) {
          if (static_cast<int>(out.size()) >= violation_limit) goto done;
          if (fm[s.tern(g, a, b, c)] !=
              d.tern(f.gamma_map[g], fm[a], fm[b], fm[c]))
            out.push_back({HomLaw::kTernary, {g, a, b, c}});
        }
done:
  report.truncated = static_cast<int>(out.size()) >= violation_limit;
  report.ok = out.empty();
  return report;
}

inline TGHomomorphism identity_homomorphism(const TernarySemiring& t) {
  TGHomomorphism f;
  f.source = &t;
  f.target = &t;
  f.gamma_map.resize(t.gamma_count);
  for (GammaIdx g = 0; g < t.gamma_count; ++g) f.gamma_map[g] = g;
  f.element_map.resize(t.n);
  for (Elem a = 0; a < t.n; ++a) f.element_map[a] = a;
  return f;
}

// g after f; requires f.target and g.source to be the same object.
inline TGHomomorphism compose_homomorphisms(const TGHomomorphism& f,
                                            const TGHomomorphism& g) {
  if (f.target != g.source)
    throw InvalidInput("composition requires matching middle semiring");
  TGHomomorphism h;
  h.source = f.source;
  h.target = g.target;
  h.gamma_map.reserve(f.gamma_map.size());
  for (GammaIdx gi : f.gamma_map) h.gamma_map.push_back(g.gamma_map[gi]);
  h.element_map.reserve(f.element_map.size());
  for (Elem e : f.element_map) h.element_map.push_back(g.element_map[e]);
  return h;
}

}  // namespace gammaspec
