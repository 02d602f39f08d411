#pragma once

// The prime spectrum with its Zariski topology, plus the continuous map a
// semiring homomorphism induces between spectra.
//
// Closed sets are materialized outright: the spaces here are tiny (one point
// per prime ideal), so the full lattice {V(I)} closed under finite union and
// arbitrary intersection is stored as explicit index sets.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gammaspec/homomorphism.hpp"
#include "gammaspec/ideal.hpp"
#include "gammaspec/semiring.hpp"

namespace gammaspec {

namespace detail {

// Prime-index-set order: smaller sets first, ties broken lexicographically.
inline bool index_set_less(const std::vector<int>& x,
                           const std::vector<int>& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  return x < y;
}

}  // namespace detail

struct SpectrumSpace {
  const TernarySemiring* parent = nullptr;
  std::vector<GammaIdeal> ideals;  // every ideal, canonical order, T included
  std::vector<GammaIdeal> primes;  // canonical order
  std::vector<std::vector<int>> closed_sets;  // sorted prime-index sets

  bool is_closed(const std::vector<int>& prime_indices) const {
    return std::binary_search(closed_sets.begin(), closed_sets.end(),
                              prime_indices, detail::index_set_less);
  }
};

// Indices of the primes containing I.
inline std::vector<int> vanishing_set(const SpectrumSpace& space,
                                      const GammaIdeal& ideal) {
  std::vector<int> out;
  for (size_t i = 0; i < space.primes.size(); ++i)
    if ((ideal.mask & ~space.primes[i].mask) == 0)
      out.push_back(static_cast<int>(i));
  return out;
}

// Indices of the primes not containing the element a.
inline std::vector<int> basic_open(const SpectrumSpace& space, Elem a) {
  if (a < 0 || a >= space.parent->n)
    throw InvalidInput("basic_open element outside carrier");
  std::vector<int> out;
  for (size_t i = 0; i < space.primes.size(); ++i)
    if (!space.primes[i].contains(a)) out.push_back(static_cast<int>(i));
  return out;
}

inline SpectrumSpace spectrum(const TernarySemiring& t,
                              const Limits& limits = {}) {
  SpectrumSpace space;
  space.parent = &t;
  space.ideals = enumerate_ideals(t, limits);
  for (const auto& ideal : space.ideals)
    if (is_prime(t, ideal)) space.primes.push_back(ideal);
  // Seed with every V(I), then close under pairwise union and intersection.
  // Arbitrary unions reduce to pairwise ones on a finite point set.
  std::set<std::vector<int>> sets;
  for (const auto& ideal : space.ideals)
    sets.insert(vanishing_set(space, ideal));
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<std::vector<int>> snapshot(sets.begin(), sets.end());
    for (size_t i = 0; i < snapshot.size(); ++i)
      for (size_t j = i + 1; j < snapshot.size(); ++j) {
        std::vector<int> u, v;
        std::set_union(snapshot[i].begin(), snapshot[i].end(),
                       snapshot[j].begin(), snapshot[j].end(),
                       std::back_inserter(u));
        std::set_intersection(snapshot[i].begin(), snapshot[i].end(),
                              snapshot[j].begin(), snapshot[j].end(),
                              std::back_inserter(v));
        if (sets.insert(u).second) grew = true;
        if (sets.insert(v).second) grew = true;
      }
  }
  space.closed_sets.assign(sets.begin(), sets.end());
  std::sort(space.closed_sets.begin(), space.closed_sets.end(),
            detail::index_set_less);
  return space;
}

// Every singleton closed makes a finite T0 space discrete.
inline bool is_discrete(const SpectrumSpace& space) {
  for (size_t i = 0; i < space.primes.size(); ++i)
    if (!space.is_closed({static_cast<int>(i)})) return false;
  return true;
}

inline bool is_t0(const SpectrumSpace& space) {
  for (size_t i = 0; i < space.primes.size(); ++i)
    for (size_t j = i + 1; j < space.primes.size(); ++j)
      if (space.primes[i].mask == space.primes[j].mask) return false;
  // Distinct primes differ in some element a; D(a) then separates them.
  return true;
}

struct ZariskiReport {
  bool ok = true;
  bool t0 = false;
  bool discrete = false;
  int64_t families_checked = 0;
  bool families_exhaustive = false;
  std::vector<std::string> failures;
};

// Checks the four topology identities and the separation property:
//   V({0}) is everything, V(T) is empty,
//   V(I cap J) = V(I) union V(J) over all ideal pairs,
//   V(sum I_k) = intersection of V(I_k) over ideal families.
// Families are every subset of the ideal list when there are at most
// `exhaustive_family_cap` ideals, otherwise `sampled_families` random
// subsets drawn from the given seed.
inline ZariskiReport verify_zariski_axioms(const SpectrumSpace& space,
                                           uint64_t seed = 0,
                                           int exhaustive_family_cap = 12,
                                           int sampled_families = 1000) {
  const TernarySemiring& t = *space.parent;
  ZariskiReport report;
  report.t0 = is_t0(space);
  report.discrete = is_discrete(space);
  std::vector<int> everything(space.primes.size());
  for (size_t i = 0; i < everything.size(); ++i)
    everything[i] = static_cast<int>(i);
  if (vanishing_set(space, ideal_closure(t, {})) != everything) {
    report.ok = false;
    report.failures.push_back("V({0}) is not the whole spectrum");
  }
  const uint64_t carrier = t.n == 64 ? ~uint64_t{0} : (uint64_t{1} << t.n) - 1;
  if (!vanishing_set(space, detail::ideal_from_mask(carrier)).empty()) {
    report.ok = false;
    report.failures.push_back("V(T) is not empty");
  }
  for (size_t i = 0; i < space.ideals.size(); ++i)
    for (size_t j = 0; j < space.ideals.size(); ++j) {
      const auto lhs =
          vanishing_set(space, ideal_intersection(space.ideals[i],
                                                  space.ideals[j]));
      std::vector<int> rhs;
      const auto vi = vanishing_set(space, space.ideals[i]);
      const auto vj = vanishing_set(space, space.ideals[j]);
      std::set_union(vi.begin(), vi.end(), vj.begin(), vj.end(),
                     std::back_inserter(rhs));
      if (lhs != rhs) {
        report.ok = false;
        report.failures.push_back(
            "V(I cap J) != V(I) union V(J) for ideal pair (" +
            std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  auto check_family = [&](const std::vector<int>& family) {
    GammaIdeal total = ideal_closure(t, {});
    std::vector<int> meet = everything;
    for (int idx : family) {
      total = ideal_sum(t, total, space.ideals[idx]);
      const auto vs = vanishing_set(space, space.ideals[idx]);
      std::vector<int> next;
      std::set_intersection(meet.begin(), meet.end(), vs.begin(), vs.end(),
                            std::back_inserter(next));
      meet = next;
    }
    ++report.families_checked;
    if (vanishing_set(space, total) != meet) {
      report.ok = false;
      std::string desc = "V(sum) != intersection of V for family {";
      for (size_t k = 0; k < family.size(); ++k) {
        if (k) desc += ",";
        desc += std::to_string(family[k]);
      }
      report.failures.push_back(desc + "}");
    }
  };
  const int ic = static_cast<int>(space.ideals.size());
  if (ic <= exhaustive_family_cap) {
    report.families_exhaustive = true;
    for (uint64_t bits = 0; bits < (uint64_t{1} << ic); ++bits) {
      std::vector<int> family;
      for (int k = 0; k < ic; ++k)
        if ((bits >> k) & 1u) family.push_back(k);
      check_family(family);
    }
  } else {
    std::mt19937_64 rng(seed);
    for (int s = 0; s < sampled_families; ++s) {
      std::vector<int> family;
      for (int k = 0; k < ic; ++k)
        if (rng() & 1u) family.push_back(k);
      check_family(family);
    }
  }
  if (!report.t0) {
    report.ok = false;
    report.failures.push_back("spectrum is not T0");
  }
  return report;
}

struct SpectrumMap {
  // For P'_k the k-th prime over the map's target semiring, prime_map[k] is
  // the index of f^{-1}(P'_k) among the primes over the source semiring.
  std::vector<int> prime_map;
  bool continuous = false;
  std::vector<std::string> failures;
};

// The map Spec(T') -> Spec(T) induced by f : T -> T', sending a prime to its
// preimage.  Continuity is certified by checking that the preimage of every
// closed set is closed.
inline SpectrumMap induced_spectrum_map(const TGHomomorphism& f,
                                        const SpectrumSpace& source_spectrum,
                                        const SpectrumSpace& target_spectrum) {
  if (source_spectrum.parent != f.source ||
      target_spectrum.parent != f.target)
    throw InvalidInput("spectrum map needs the spectra of the map's source "
                       "and target");
  SpectrumMap out;
  for (size_t k = 0; k < target_spectrum.primes.size(); ++k) {
    uint64_t preimage = 0;
    for (Elem a = 0; a < f.source->n; ++a)
      if (target_spectrum.primes[k].contains(f.element_map[a]))
        preimage |= uint64_t{1} << a;
    int found = -1;
    for (size_t i = 0; i < source_spectrum.primes.size(); ++i)
      if (source_spectrum.primes[i].mask == preimage)
        found = static_cast<int>(i);
    if (found < 0)
      throw InternalError("preimage of a prime is not in the computed "
                          "spectrum; lattice enumeration is inconsistent");
    out.prime_map.push_back(found);
  }
  out.continuous = true;
  for (const auto& closed : source_spectrum.closed_sets) {
    std::vector<int> preimage;
    for (size_t k = 0; k < out.prime_map.size(); ++k)
      if (std::binary_search(closed.begin(), closed.end(), out.prime_map[k]))
        preimage.push_back(static_cast<int>(k));
    if (!target_spectrum.is_closed(preimage)) {
      out.continuous = false;
      std::string desc = "preimage of closed set {";
      for (size_t k = 0; k < closed.size(); ++k) {
        if (k) desc += ",";
        desc += std::to_string(closed[k]);
      }
      out.failures.push_back(desc + "} is not closed");
    }
  }
  return out;
}

}  // namespace gammaspec
