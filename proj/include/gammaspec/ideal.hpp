#pragma once

// Gamma-ideals of a finite ternary semiring: closure, enumeration, primality.
//
// An ideal is an additive submonoid I with {abc}_g landing in I whenever any
// one of the three arguments lies in I.  Members are tracked both as a sorted
// vector and as a 64-bit mask; construction caps guarantee n <= 64.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gammaspec/core.hpp"
#include "gammaspec/semiring.hpp"

namespace gammaspec {

struct GammaIdeal {
  uint64_t mask = 0;
  std::vector<Elem> members;  // ascending

  bool contains(Elem a) const { return (mask >> a) & 1u; }
  int size() const { return static_cast<int>(members.size()); }
  bool operator==(const GammaIdeal& other) const { return mask == other.mask; }
};

namespace detail {

inline GammaIdeal ideal_from_mask(uint64_t mask) {
  GammaIdeal ideal;
  ideal.mask = mask;
  for (Elem a = 0; a < 64; ++a)
    if ((mask >> a) & 1u) ideal.members.push_back(a);
  return ideal;
}

// Canonical ideal order: member count first, then the member sequence
// lexicographically.  Plain mask comparison would order {0,3} after {1,2}.
inline bool ideal_less(const GammaIdeal& x, const GammaIdeal& y) {
  if (x.members.size() != y.members.size())
    return x.members.size() < y.members.size();
  return x.members < y.members;
}

}  // namespace detail

// True when `members` (given as a mask) satisfies both ideal conditions.
inline bool is_gamma_ideal(const TernarySemiring& t, uint64_t mask) {
  if (!(mask & 1u)) return false;  // 0 must be a member
  const uint64_t carrier = t.n == 64 ? ~uint64_t{0} : (uint64_t{1} << t.n) - 1;
  if (mask & ~carrier) return false;
  for (Elem a = 0; a < t.n; ++a) {
    if (!((mask >> a) & 1u)) continue;
    for (Elem b = 0; b < t.n; ++b) {
      if (((mask >> b) & 1u) && !((mask >> t.add(a, b)) & 1u)) return false;
      for (Elem c = 0; c < t.n; ++c)
        for (GammaIdx g = 0; g < t.gamma_count; ++g) {
          if (!((mask >> t.tern(g, a, b, c)) & 1u)) return false;
          if (!((mask >> t.tern(g, b, a, c)) & 1u)) return false;
          if (!((mask >> t.tern(g, b, c, a)) & 1u)) return false;
        }
    }
  }
  return true;
}

// Smallest Gamma-ideal containing `seed`.  Fixed point of: insert 0, close
// under addition, close under ternary absorption in each of the three slots.
inline GammaIdeal ideal_closure(const TernarySemiring& t,
                                const std::vector<Elem>& seed) {
  uint64_t mask = 1u;  // the additive zero
  std::vector<Elem> work = {0};
  auto push = [&mask, &work](Elem x) {
    if (!((mask >> x) & 1u)) {
      mask |= uint64_t{1} << x;
      work.push_back(x);
    }
  };
  for (Elem a : seed) {
    if (a < 0 || a >= t.n)
      throw InvalidInput("ideal seed element " + std::to_string(a) +
                         " outside carrier");
    push(a);
  }
  // Each member is processed once; sums with later arrivals are covered when
  // those arrivals are processed themselves.
  while (!work.empty()) {
    const Elem a = work.back();
    work.pop_back();
    for (Elem b = 0; b < t.n; ++b) {
      if ((mask >> b) & 1u) {
        push(t.add(a, b));
        push(t.add(b, a));
      }
      for (Elem c = 0; c < t.n; ++c)
        for (GammaIdx g = 0; g < t.gamma_count; ++g) {
          push(t.tern(g, a, b, c));
          push(t.tern(g, b, a, c));
          push(t.tern(g, b, c, a));
        }
    }
  }
  return detail::ideal_from_mask(mask);
}

// A minimal-by-search generating list: the first singleton whose closure is
// the ideal, else the first pair, else the full member list.  Used for
// display labels; members themselves stay authoritative.
inline std::vector<Elem> ideal_generators(const TernarySemiring& t,
                                          const GammaIdeal& ideal) {
  if (ideal.mask == 1u) return {};
  for (Elem a : ideal.members)
    if (ideal_closure(t, {a}).mask == ideal.mask) return {a};
  for (size_t i = 0; i < ideal.members.size(); ++i)
    for (size_t j = i + 1; j < ideal.members.size(); ++j)
      if (ideal_closure(t, {ideal.members[i], ideal.members[j]}).mask ==
          ideal.mask)
        return {ideal.members[i], ideal.members[j]};
  return ideal.members;
}

inline std::string ideal_label(const TernarySemiring& t,
                               const GammaIdeal& ideal) {
  if (ideal.mask == 1u) return "{0}";
  const auto gens = ideal_generators(t, ideal);
  if (gens.size() <= 2) {
    std::string label = "(";
    for (size_t i = 0; i < gens.size(); ++i) {
      if (i) label += ",";
      label += t.element_names[gens[i]];
    }
    return label + ")";
  }
  std::string label = "{";
  for (size_t i = 0; i < ideal.members.size(); ++i) {
    if (i) label += ",";
    label += t.element_names[ideal.members[i]];
  }
  return label + "}";
}

// All Gamma-ideals of t (including t itself), canonically ordered.  Seeds are
// all singletons and pairs; the lattice is then closed under binary joins
// I + J := closure(I union J).  Complete because every ideal is the join of
// the principal closures of its members.
inline std::vector<GammaIdeal> enumerate_ideals(const TernarySemiring& t,
                                                const Limits& limits = {}) {
  if (t.n > limits.max_enum_carrier)
    throw CapExceeded("ideal enumeration needs carrier size " +
                      std::to_string(t.n) + " <= cap " +
                      std::to_string(limits.max_enum_carrier));
  std::set<uint64_t> masks;
  masks.insert(ideal_closure(t, {}).mask);
  for (Elem a = 0; a < t.n; ++a) {
    masks.insert(ideal_closure(t, {a}).mask);
    for (Elem b = a + 1; b < t.n; ++b)
      masks.insert(ideal_closure(t, {a, b}).mask);
  }
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<uint64_t> snapshot(masks.begin(), masks.end());
    for (size_t i = 0; i < snapshot.size(); ++i)
      for (size_t j = i + 1; j < snapshot.size(); ++j) {
        const uint64_t joined = snapshot[i] | snapshot[j];
        if (masks.count(joined)) continue;
        std::vector<Elem> seed;
        for (Elem a = 0; a < t.n; ++a)
          if ((joined >> a) & 1u) seed.push_back(a);
        if (masks.insert(ideal_closure(t, seed).mask).second) grew = true;
      }
    if (masks.size() > static_cast<size_t>(limits.max_ideals))
      throw CapExceeded("ideal lattice exceeded cap of " +
                        std::to_string(limits.max_ideals) + " ideals");
  }
  std::vector<GammaIdeal> ideals;
  ideals.reserve(masks.size());
  for (uint64_t mask : masks) ideals.push_back(detail::ideal_from_mask(mask));
  std::sort(ideals.begin(), ideals.end(), detail::ideal_less);
  return ideals;
}

// The ideal sum I + J, realized as the closure of the union.
inline GammaIdeal ideal_sum(const TernarySemiring& t, const GammaIdeal& lhs,
                            const GammaIdeal& rhs) {
  std::vector<Elem> seed;
  for (Elem a = 0; a < t.n; ++a)
    if (((lhs.mask | rhs.mask) >> a) & 1u) seed.push_back(a);
  return ideal_closure(t, seed);
}

inline GammaIdeal ideal_intersection(const GammaIdeal& lhs,
                                     const GammaIdeal& rhs) {
  return detail::ideal_from_mask(lhs.mask & rhs.mask);
}

// Witness that an ideal is not prime: {abc}_g lies in the ideal while none
// of a, b, c does.  Fields mirror the scan order used to find it.
struct PrimeWitness {
  Elem a = 0;
  Elem b = 0;
  Elem c = 0;
  GammaIdx gamma = 0;
};

// Recomputes the membership facts a witness asserts.
inline bool replay_prime_witness(const TernarySemiring& t,
                                 const GammaIdeal& ideal,
                                 const PrimeWitness& w) {
  return ideal.contains(t.tern(w.gamma, w.a, w.b, w.c)) &&
         !ideal.contains(w.a) && !ideal.contains(w.b) && !ideal.contains(w.c);
}

// Primality of a proper ideal.  On failure returns the lexicographically
// least witness under the scan order (a, b, c, gamma).  The full semiring is
// never prime (properness is part of the definition).
inline std::optional<PrimeWitness> prime_violation(const TernarySemiring& t,
                                                   const GammaIdeal& ideal) {
  for (Elem a = 0; a < t.n; ++a) {
    if (ideal.contains(a)) continue;
    for (Elem b = 0; b < t.n; ++b) {
      if (ideal.contains(b)) continue;
      for (Elem c = 0; c < t.n; ++c) {
        if (ideal.contains(c)) continue;
        for (GammaIdx g = 0; g < t.gamma_count; ++g)
          if (ideal.contains(t.tern(g, a, b, c))) return PrimeWitness{a, b, c, g};
      }
    }
  }
  return std::nullopt;
}

inline bool is_prime(const TernarySemiring& t, const GammaIdeal& ideal) {
  const uint64_t carrier =
      t.n == 64 ? ~uint64_t{0} : (uint64_t{1} << t.n) - 1;
  if (ideal.mask == carrier) return false;
  return !prime_violation(t, ideal).has_value();
}

}  // namespace gammaspec
