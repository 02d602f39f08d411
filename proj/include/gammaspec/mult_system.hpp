#pragma once

// Multiplicative systems: 0-avoiding subsets closed under every triadic
// product.  These are the denominator sets for localization.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "gammaspec/core.hpp"
#include "gammaspec/ideal.hpp"
#include "gammaspec/semiring.hpp"

namespace gammaspec {

struct MultiplicativeSystem {
  const TernarySemiring* parent = nullptr;
  std::vector<Elem> members;  // ascending, never containing 0
  uint64_t mask = 0;

  bool contains(Elem s) const { return (mask >> s) & 1u; }
  int size() const { return static_cast<int>(members.size()); }
};

struct MultSystemCheck {
  bool ok = true;
  bool zero_member = false;
  // Least escaping product under the (s1, s2, s3, gamma) scan; meaningful
  // only when ok is false and zero_member is false.
  Elem s1 = 0, s2 = 0, s3 = 0;
  GammaIdx gamma = 0;
  Elem product = 0;
};

inline MultSystemCheck check_multiplicative_system(
    const TernarySemiring& t, const std::vector<Elem>& members) {
  MultSystemCheck result;
  uint64_t mask = 0;
  for (Elem s : members) {
    if (s < 0 || s >= t.n)
      throw InvalidInput("system member " + std::to_string(s) +
                         " outside carrier");
    mask |= uint64_t{1} << s;
  }
  if (mask & 1u) {
    result.ok = false;
    result.zero_member = true;
    return result;
  }
  for (Elem s1 : members)
    for (Elem s2 : members)
      for (Elem s3 : members)
        for (GammaIdx g = 0; g < t.gamma_count; ++g) {
          const Elem p = t.tern(g, s1, s2, s3);
          if (!((mask >> p) & 1u)) {
            result.ok = false;
            result.s1 = s1;
            result.s2 = s2;
            result.s3 = s3;
            result.gamma = g;
            result.product = p;
            return result;
          }
        }
  return result;
}

inline bool is_multiplicative_system(const TernarySemiring& t,
                                     const std::vector<Elem>& members) {
  return check_multiplicative_system(t, members).ok;
}

inline MultiplicativeSystem make_mult_system(const TernarySemiring& t,
                                             const std::vector<Elem>& members) {
  if (members.empty())
    throw InvalidInput("a multiplicative system cannot be empty");
  const auto check = check_multiplicative_system(t, members);
  if (check.zero_member)
    throw InvalidInput("multiplicative system contains 0");
  if (!check.ok)
    throw InvalidInput(
        "set is not closed under triadic products: {" +
        std::to_string(check.s1) + "," + std::to_string(check.s2) + "," +
        std::to_string(check.s3) + "}_" + t.gamma_names[check.gamma] + " = " +
        std::to_string(check.product) + " escapes");
  MultiplicativeSystem s;
  s.parent = &t;
  s.members = members;
  std::sort(s.members.begin(), s.members.end());
  s.members.erase(std::unique(s.members.begin(), s.members.end()),
                  s.members.end());
  for (Elem m : s.members) s.mask |= uint64_t{1} << m;
  return s;
}

// Least superset of `seed` closed under all triadic products.  Reaching the
// additive zero makes every fraction meaningless, so that case is an error
// naming the degenerating product.
inline MultiplicativeSystem generated_mult_system(const TernarySemiring& t,
                                                  const std::vector<Elem>& seed) {
  if (seed.empty()) throw InvalidInput("empty seed for multiplicative system");
  uint64_t mask = 0;
  for (Elem s : seed) {
    if (s < 0 || s >= t.n)
      throw InvalidInput("seed element " + std::to_string(s) +
                         " outside carrier");
    if (s == 0) throw DegenerateSystem("system degenerates: 0 seeded");
    mask |= uint64_t{1} << s;
  }
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Elem> current;
    for (Elem a = 0; a < t.n; ++a)
      if ((mask >> a) & 1u) current.push_back(a);
    for (Elem s1 : current)
      for (Elem s2 : current)
        for (Elem s3 : current)
          for (GammaIdx g = 0; g < t.gamma_count; ++g) {
            const Elem p = t.tern(g, s1, s2, s3);
            if (p == 0)
              throw DegenerateSystem(
                  "system degenerates: {" + std::to_string(s1) + "," +
                  std::to_string(s2) + "," + std::to_string(s3) + "}_" +
                  t.gamma_names[g] + " = 0");
            if (!((mask >> p) & 1u)) {
              mask |= uint64_t{1} << p;
              grew = true;
            }
          }
  }
  std::vector<Elem> members;
  for (Elem a = 0; a < t.n; ++a)
    if ((mask >> a) & 1u) members.push_back(a);
  return make_mult_system(t, members);
}

// Complement of a prime ideal; multiplicative exactly by primeness, which is
// re-certified here.
inline MultiplicativeSystem prime_complement(const TernarySemiring& t,
                                             const GammaIdeal& prime) {
  if (const auto witness = prime_violation(t, prime)) {
    throw InvalidInput(
        "ideal is not prime: {" + std::to_string(witness->a) + "," +
        std::to_string(witness->b) + "," + std::to_string(witness->c) + "}_" +
        t.gamma_names[witness->gamma] + " lands inside with all arguments "
        "outside");
  }
  const uint64_t carrier = t.n == 64 ? ~uint64_t{0} : (uint64_t{1} << t.n) - 1;
  if (prime.mask == carrier) throw InvalidInput("the whole semiring is not prime");
  std::vector<Elem> members;
  for (Elem a = 0; a < t.n; ++a)
    if (!prime.contains(a)) members.push_back(a);
  return make_mult_system(t, members);
}

}  // namespace gammaspec
