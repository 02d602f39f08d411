#pragma once

// Sections of the structure sheaf and of associated module sheaves over
// opens of the prime spectrum.  Opens are extensional prime-index sets; a
// section over U is a family of stalk classes certified by local fractions:
// every prime gets a basic neighborhood inside U and one fraction whose
// class the family reproduces across that whole neighborhood.
//
// Enumeration is exhaustive: all certifiable patches (basic open, fraction)
// are materialized first, then every family in the candidate product space
// is kept iff each of its primes is covered by an agreeing patch.  The walk
// is ordered, so results come out sorted by value vectors.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gammaspec/core.hpp"
#include "gammaspec/gamma_module.hpp"
#include "gammaspec/localization.hpp"
#include "gammaspec/module_localization.hpp"
#include "gammaspec/mult_system.hpp"
#include "gammaspec/semiring.hpp"
#include "gammaspec/spectrum.hpp"

namespace gammaspec {

struct OpenSet {
  const SpectrumSpace* space = nullptr;
  std::vector<int> primes;  // ascending prime indices
  // Elements a with the D(a) covering this set, chosen greedily in
  // ascending element order; empty for the empty set.
  std::vector<Elem> basis_decomposition;

  bool contains(int prime_index) const {
    return std::binary_search(primes.begin(), primes.end(), prime_index);
  }
};

inline OpenSet make_open(const SpectrumSpace& space, std::vector<int> primes) {
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  if (!primes.empty() &&
      (primes.front() < 0 ||
       primes.back() >= static_cast<int>(space.primes.size())))
    throw InvalidInput("prime index outside the spectrum");
  OpenSet u;
  u.space = &space;
  u.primes = std::move(primes);
  // A set is open iff basic opens inside it cover it; the greedy scan both
  // validates openness and produces the decomposition.
  std::vector<int> remaining = u.primes;
  for (Elem a = 0; a < space.parent->n && !remaining.empty(); ++a) {
    const auto d = basic_open(space, a);
    if (d.empty() ||
        !std::includes(u.primes.begin(), u.primes.end(), d.begin(), d.end()))
      continue;
    std::vector<int> rest;
    std::set_difference(remaining.begin(), remaining.end(), d.begin(),
                        d.end(), std::back_inserter(rest));
    if (rest.size() < remaining.size()) {
      u.basis_decomposition.push_back(a);
      remaining = std::move(rest);
    }
  }
  if (!remaining.empty())
    throw InvalidInput("prime set is not open: no basic open inside it "
                       "contains prime " +
                       std::to_string(remaining.front()));
  return u;
}

inline OpenSet basic_open_set(const SpectrumSpace& space, Elem a) {
  return make_open(space, basic_open(space, a));
}

inline OpenSet whole_space(const SpectrumSpace& space) {
  std::vector<int> all(space.primes.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return make_open(space, std::move(all));
}

inline bool open_subset(const OpenSet& v, const OpenSet& u) {
  return v.space == u.space &&
         std::includes(u.primes.begin(), u.primes.end(), v.primes.begin(),
                       v.primes.end());
}

inline OpenSet open_intersection(const OpenSet& u, const OpenSet& v) {
  if (u.space != v.space)
    throw InvalidInput("opens live on different spectra");
  std::vector<int> both;
  std::set_intersection(u.primes.begin(), u.primes.end(), v.primes.begin(),
                        v.primes.end(), std::back_inserter(both));
  return make_open(*u.space, std::move(both));
}

// One local representation: the fraction numerator/denominator on the basic
// open of `basic`.  For module sheaves the numerator indexes the module.
struct SectionCertificate {
  Elem basic = 0;
  Elem numerator = 0;
  Elem denominator = 0;
};

struct SectionFamily {
  OpenSet open_set;
  std::vector<Elem> values;  // stalk class per prime, parallel to primes
  std::vector<SectionCertificate> certificates;  // parallel to primes
};

struct StructureSheaf {
  const SpectrumSpace* space = nullptr;
  std::vector<LocalizedSemiring> stalks;  // per prime index
};

inline StructureSheaf structure_sheaf(const SpectrumSpace& space,
                                      const Limits& limits = {}) {
  StructureSheaf sheaf;
  sheaf.space = &space;
  for (const auto& prime : space.primes)
    sheaf.stalks.push_back(localize_at_prime(*space.parent, prime, limits));
  return sheaf;
}

inline const LocalizedSemiring& stalk(const StructureSheaf& sheaf,
                                      int prime_index) {
  return sheaf.stalks.at(prime_index);
}

struct ModuleSheaf {
  const SpectrumSpace* space = nullptr;
  const GammaModule* module = nullptr;
  std::vector<LocalizedModule> stalks;  // per prime index
};

inline ModuleSheaf module_sheaf(const SpectrumSpace& space,
                                const GammaModule& m,
                                const Limits& limits = {}) {
  if (m.parent != space.parent)
    throw InvalidInput("module belongs to a different semiring");
  ModuleSheaf sheaf;
  sheaf.space = &space;
  sheaf.module = &m;
  for (const auto& prime : space.primes)
    sheaf.stalks.push_back(localize_module_at_prime(m, prime, limits));
  return sheaf;
}

inline const LocalizedModule& stalk(const ModuleSheaf& sheaf,
                                    int prime_index) {
  return sheaf.stalks.at(prime_index);
}

namespace detail {

// Uniform view of a sheaf for enumeration: how many numerators fractions
// draw from and what class a fraction has in the stalk at a prime.
struct SectionProvider {
  const SpectrumSpace* space;
  int numerators;
  std::function<int(int)> stalk_size;
  std::function<int(int, Elem, Elem)> stalk_class;  // (prime, num, den)
};

inline SectionProvider provider_for(const StructureSheaf& sheaf) {
  return {sheaf.space, sheaf.space->parent->n,
          [&sheaf](int p) { return sheaf.stalks[p].num_classes(); },
          [&sheaf](int p, Elem num, Elem den) {
            return sheaf.stalks[p].class_of(num, den);
          }};
}

inline SectionProvider provider_for(const ModuleSheaf& sheaf) {
  return {sheaf.space, sheaf.module->size,
          [&sheaf](int p) { return sheaf.stalks[p].num_classes(); },
          [&sheaf](int p, Elem num, Elem den) {
            return sheaf.stalks[p].class_of(num, den);
          }};
}

struct Patch {
  std::vector<int> primes;  // ascending, nonempty, inside the open
  std::vector<Elem> germ;   // stalk class per patch prime
  Elem basic, numerator, denominator;
};

// All certifiable patches inside U, first certificate per distinct
// (primes, germ) in scan order: basic ascending, then numerator, then
// denominator.
inline std::vector<Patch> enumerate_patches(const SectionProvider& prov,
                                            const OpenSet& u) {
  const SpectrumSpace& space = *prov.space;
  const TernarySemiring& t = *space.parent;
  std::vector<Patch> patches;
  std::vector<std::pair<std::vector<int>, std::vector<Elem>>> seen;
  for (Elem c = 0; c < t.n; ++c) {
    const auto d = basic_open(space, c);
    if (d.empty() ||
        !std::includes(u.primes.begin(), u.primes.end(), d.begin(), d.end()))
      continue;
    for (Elem num = 0; num < prov.numerators; ++num)
      for (Elem den = 0; den < t.n; ++den) {
        bool den_ok = true;
        for (int p : d)
          if (space.primes[p].contains(den)) {
            den_ok = false;
            break;
          }
        if (!den_ok) continue;
        std::vector<Elem> germ;
        for (int p : d) germ.push_back(prov.stalk_class(p, num, den));
        auto key = std::make_pair(d, germ);
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(key);
        patches.push_back({d, std::move(germ), c, num, den});
      }
  }
  return patches;
}

// Position of prime p inside the open's prime list.
inline int open_pos(const OpenSet& u, int p) {
  return static_cast<int>(
      std::lower_bound(u.primes.begin(), u.primes.end(), p) -
      u.primes.begin());
}

inline bool patch_agrees(const Patch& patch, const OpenSet& u,
                         const std::vector<Elem>& values) {
  for (size_t i = 0; i < patch.primes.size(); ++i)
    if (values[open_pos(u, patch.primes[i])] != patch.germ[i]) return false;
  return true;
}

inline std::vector<SectionFamily> enumerate_sections(
    const SectionProvider& prov, const OpenSet& u, const Limits& limits) {
  if (u.space != prov.space)
    throw InvalidInput("open set belongs to a different spectrum");
  const auto patches = enumerate_patches(prov, u);
  const size_t np = u.primes.size();

  // Candidate values per prime: classes some patch certifies there.
  std::vector<std::vector<Elem>> candidates(np);
  for (const auto& patch : patches)
    for (size_t i = 0; i < patch.primes.size(); ++i)
      candidates[open_pos(u, patch.primes[i])].push_back(patch.germ[i]);
  int64_t space_size = 1;
  for (auto& cand : candidates) {
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    space_size *= std::max<int64_t>(1, cand.size());
    if (space_size > limits.max_section_space)
      throw CapExceeded("section enumeration walks more than " +
                        std::to_string(limits.max_section_space) +
                        " candidate families");
    if (cand.empty()) space_size = 0;
  }

  std::vector<SectionFamily> out;
  if (space_size == 0 && np > 0) return out;
  std::vector<Elem> values(np, 0);
  std::function<void(size_t)> walk = [&](size_t depth) {
    if (depth == np) {
      SectionFamily family;
      family.open_set = u;
      family.values = values;
      for (size_t i = 0; i < np; ++i) {
        const int p = u.primes[i];
        const Patch* found = nullptr;
        for (const auto& patch : patches)
          if (std::binary_search(patch.primes.begin(), patch.primes.end(),
                                 p) &&
              patch_agrees(patch, u, values)) {
            found = &patch;
            break;
          }
        if (!found) return;
        family.certificates.push_back(
            {found->basic, found->numerator, found->denominator});
      }
      out.push_back(std::move(family));
      return;
    }
    for (Elem v : candidates[depth]) {
      values[depth] = v;
      walk(depth + 1);
    }
  };
  walk(0);
  return out;
}

inline SectionFamily restrict_impl(const SectionProvider& prov,
                                   const SectionFamily& s, const OpenSet& v) {
  if (!open_subset(v, s.open_set))
    throw InvalidInput("restriction target is not an open subset");
  SectionFamily out;
  out.open_set = v;
  for (int p : v.primes)
    out.values.push_back(s.values[open_pos(s.open_set, p)]);
  const auto patches = enumerate_patches(prov, v);
  for (int p : v.primes) {
    const Patch* found = nullptr;
    for (const auto& patch : patches)
      if (std::binary_search(patch.primes.begin(), patch.primes.end(), p) &&
          patch_agrees(patch, v, out.values)) {
        found = &patch;
        break;
      }
    if (!found)
      throw InternalError("restricted family lost its certificate at prime " +
                          std::to_string(p));
    out.certificates.push_back(
        {found->basic, found->numerator, found->denominator});
  }
  return out;
}

struct SectionCheck {
  bool ok = true;
  std::string reason;
};

inline SectionCheck verify_family_impl(const SectionProvider& prov,
                                       const SectionFamily& s) {
  const SpectrumSpace& space = *prov.space;
  const OpenSet& u = s.open_set;
  if (u.space != prov.space) return {false, "foreign spectrum"};
  if (s.values.size() != u.primes.size() ||
      s.certificates.size() != u.primes.size())
    return {false, "values/certificates not parallel to the open's primes"};
  for (size_t i = 0; i < u.primes.size(); ++i) {
    const auto& cert = s.certificates[i];
    const auto d = basic_open(space, cert.basic);
    if (d.empty() ||
        !std::includes(u.primes.begin(), u.primes.end(), d.begin(), d.end()))
      return {false, "certificate neighborhood escapes the open"};
    if (!std::binary_search(d.begin(), d.end(), u.primes[i]))
      return {false, "certificate neighborhood misses its prime"};
    for (int q : d) {
      if (space.primes[q].contains(cert.denominator))
        return {false, "denominator vanishes at prime " + std::to_string(q)};
      if (prov.stalk_class(q, cert.numerator, cert.denominator) !=
          s.values[open_pos(u, q)])
        return {false, "certificate fraction disagrees with the value at "
                       "prime " +
                           std::to_string(q)};
    }
  }
  return {};
}

}  // namespace detail

inline std::vector<SectionFamily> sections(const StructureSheaf& sheaf,
                                           const OpenSet& u,
                                           const Limits& limits = {}) {
  return detail::enumerate_sections(detail::provider_for(sheaf), u, limits);
}

inline std::vector<SectionFamily> sections(const ModuleSheaf& sheaf,
                                           const OpenSet& u,
                                           const Limits& limits = {}) {
  return detail::enumerate_sections(detail::provider_for(sheaf), u, limits);
}

inline SectionFamily restrict_section(const StructureSheaf& sheaf,
                                      const SectionFamily& s,
                                      const OpenSet& v) {
  return detail::restrict_impl(detail::provider_for(sheaf), s, v);
}

inline SectionFamily restrict_section(const ModuleSheaf& sheaf,
                                      const SectionFamily& s,
                                      const OpenSet& v) {
  return detail::restrict_impl(detail::provider_for(sheaf), s, v);
}

// Replays every certificate of the family against the stalks.
inline detail::SectionCheck verify_section_family(const StructureSheaf& sheaf,
                                                  const SectionFamily& s) {
  return detail::verify_family_impl(detail::provider_for(sheaf), s);
}

inline detail::SectionCheck verify_section_family(const ModuleSheaf& sheaf,
                                                  const SectionFamily& s) {
  return detail::verify_family_impl(detail::provider_for(sheaf), s);
}

struct SheafAxiomReport {
  bool covering_ok = false;
  bool locality_ok = false;
  bool gluing_ok = false;
  int64_t compatible_families = 0;
  std::vector<std::string> failures;

  bool ok() const { return covering_ok && locality_ok && gluing_ok; }
};

namespace detail {

template <class Sheaf>
SheafAxiomReport verify_sheaf_axioms_impl(const Sheaf& sheaf, const OpenSet& u,
                                          const std::vector<OpenSet>& cover,
                                          const Limits& limits) {
  SheafAxiomReport report;
  std::vector<int> covered;
  for (const auto& v : cover) {
    if (!open_subset(v, u))
      throw InvalidInput("cover member is not an open subset of the target");
    std::vector<int> next;
    std::set_union(covered.begin(), covered.end(), v.primes.begin(),
                   v.primes.end(), std::back_inserter(next));
    covered = std::move(next);
  }
  report.covering_ok = covered == u.primes;
  if (!report.covering_ok)
    report.failures.push_back("cover misses part of the open set");

  const auto on_u = sections(sheaf, u, limits);
  std::vector<std::vector<std::vector<Elem>>> member_sections;
  for (const auto& v : cover) {
    member_sections.emplace_back();
    for (const auto& s : sections(sheaf, v, limits))
      member_sections.back().push_back(s.values);
  }
  auto restrict_values = [&](const std::vector<Elem>& values,
                             const OpenSet& v) {
    std::vector<Elem> out;
    for (int p : v.primes) out.push_back(values[open_pos(u, p)]);
    return out;
  };

  // Locality: the joint restriction to all cover members separates sections.
  report.locality_ok = true;
  for (size_t i = 0; i < on_u.size() && report.locality_ok; ++i)
    for (size_t j = i + 1; j < on_u.size(); ++j) {
      bool same_everywhere = true;
      for (const auto& v : cover)
        if (restrict_values(on_u[i].values, v) !=
            restrict_values(on_u[j].values, v)) {
          same_everywhere = false;
          break;
        }
      if (same_everywhere && on_u[i].values != on_u[j].values) {
        report.locality_ok = false;
        report.failures.push_back(
            "two distinct sections of the open set agree on every cover "
            "member");
        break;
      }
    }
  if (!report.covering_ok) report.locality_ok = false;

  // Gluing: walk every compatible family of member sections and count the
  // sections of U restricting to it; exactly one is required.
  report.gluing_ok = report.covering_ok;
  int64_t product = 1;
  for (const auto& ms : member_sections) {
    product *= std::max<int64_t>(1, ms.size());
    if (product > limits.max_section_space)
      throw CapExceeded("gluing check walks more than " +
                        std::to_string(limits.max_section_space) +
                        " families");
  }
  std::vector<size_t> pick(cover.size(), 0);
  std::function<void(size_t)> walk = [&](size_t depth) {
    if (!report.gluing_ok) return;
    if (depth == cover.size()) {
      ++report.compatible_families;
      int64_t matches = 0;
      for (const auto& s : on_u) {
        bool all = true;
        for (size_t i = 0; i < cover.size(); ++i)
          if (restrict_values(s.values, cover[i]) !=
              member_sections[i][pick[i]]) {
            all = false;
            break;
          }
        if (all) ++matches;
      }
      if (matches != 1) {
        report.gluing_ok = false;
        report.failures.push_back(
            "a compatible family glues to " + std::to_string(matches) +
            " sections instead of exactly one");
      }
      return;
    }
    for (size_t k = 0; k < member_sections[depth].size(); ++k) {
      // Compatibility with the picks made so far, on pairwise overlaps.
      bool compatible = true;
      for (size_t j = 0; j < depth && compatible; ++j) {
        const auto overlap = open_intersection(cover[j], cover[depth]);
        for (int p : overlap.primes) {
          const Elem a =
              member_sections[j][pick[j]][open_pos(cover[j], p)];
          const Elem b = member_sections[depth][k][open_pos(cover[depth], p)];
          if (a != b) {
            compatible = false;
            break;
          }
        }
      }
      if (!compatible) continue;
      pick[depth] = k;
      walk(depth + 1);
    }
  };
  if (report.gluing_ok && !cover.empty()) walk(0);
  if (cover.empty() && !u.primes.empty()) {
    report.gluing_ok = false;
    report.failures.push_back("empty cover of a nonempty open set");
  }
  return report;
}

}  // namespace detail

inline SheafAxiomReport verify_sheaf_axioms(const StructureSheaf& sheaf,
                                            const OpenSet& u,
                                            const std::vector<OpenSet>& cover,
                                            const Limits& limits = {}) {
  return detail::verify_sheaf_axioms_impl(sheaf, u, cover, limits);
}

inline SheafAxiomReport verify_sheaf_axioms(const ModuleSheaf& sheaf,
                                            const OpenSet& u,
                                            const std::vector<OpenSet>& cover,
                                            const Limits& limits = {}) {
  return detail::verify_sheaf_axioms_impl(sheaf, u, cover, limits);
}

struct BasicSectionsReport {
  Elem element = 0;
  bool degenerate = false;
  std::string note;
  int localization_classes = 0;
  int num_sections = 0;
  bool injective = false;
  bool surjective = false;

  bool bijective() const { return !degenerate && injective && surjective; }
};

// Compares the localization at the system generated by `a` against the
// sections over the basic open of `a`, through fraction -> value family.
inline BasicSectionsReport compare_basic_sections(const StructureSheaf& sheaf,
                                                  Elem a,
                                                  const Limits& limits = {}) {
  const SpectrumSpace& space = *sheaf.space;
  const TernarySemiring& t = *space.parent;
  BasicSectionsReport report;
  report.element = a;
  const auto u = basic_open_set(space, a);
  const auto secs = sections(sheaf, u, limits);
  report.num_sections = static_cast<int>(secs.size());
  std::optional<LocalizedSemiring> loc;
  try {
    loc = localize(t, generated_mult_system(t, {a}), limits);
  } catch (const DegenerateSystem& e) {
    report.degenerate = true;
    report.note = std::string("localization undefined: ") + e.what();
    return report;
  }
  report.localization_classes = loc->num_classes();

  // Each class maps to its value family via any representative fraction;
  // representatives agree on basic opens because denominators from the
  // generated system avoid every prime of D(a).
  std::vector<std::vector<Elem>> images;
  for (int c = 0; c < loc->num_classes(); ++c) {
    const auto [num, den] = loc->pairs[loc->classes[c].front()];
    std::vector<Elem> values;
    for (int p : u.primes)
      values.push_back(sheaf.stalks[p].class_of(num, den));
    images.push_back(std::move(values));
  }
  report.injective = true;
  for (size_t i = 0; i < images.size() && report.injective; ++i)
    for (size_t j = i + 1; j < images.size(); ++j)
      if (images[i] == images[j]) {
        report.injective = false;
        break;
      }
  report.surjective = true;
  for (const auto& s : secs) {
    if (std::find(images.begin(), images.end(), s.values) == images.end()) {
      report.surjective = false;
      break;
    }
  }
  // The map must land inside the section set; a miss would mean a fraction
  // family without a certificate and is reported as non-injective evidence.
  for (const auto& img : images) {
    bool found = false;
    for (const auto& s : secs)
      if (s.values == img) {
        found = true;
        break;
      }
    if (!found) {
      report.note = "a localization class maps outside the section set";
      report.injective = false;
      break;
    }
  }
  return report;
}

}  // namespace gammaspec
