#pragma once

// Finite commutative ternary Gamma-semiring carriers.
//
// A structure (T, +, {.,.,.}_g) on elements {0, ..., n-1}: "+" is a
// commutative monoid with identity 0, and for every gamma index g the
// bracket {a,b,c}_g is a ternary product that is distributive in each slot,
// symmetric in its three arguments, satisfies the mixed associativity
// {a,b,{c,d,e}_g}_d = {{a,b,c}_g,d,e}_d and absorbs zero.  Everything is
// table-driven; construction validates shape only, verify_axioms() decides
// the laws.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gammaspec/core.hpp"

namespace gammaspec {

struct TernarySemiring {
  int n = 0;            // carrier size; element 0 is the additive zero
  int gamma_count = 0;  // at least 1
  std::vector<std::string> element_names;  // size n
  std::vector<std::string> gamma_names;    // size gamma_count
  std::vector<Elem> add_table;             // n*n, row-major [a][b]
  std::vector<Elem> ternary_tables;        // gamma_count * n^3, [g][a][b][c]

  Elem add(Elem a, Elem b) const { return add_table[a * n + b]; }

  Elem tern(GammaIdx g, Elem a, Elem b, Elem c) const {
    return ternary_tables[((static_cast<size_t>(g) * n + a) * n + b) * n + c];
  }

  bool same_tables(const TernarySemiring& other) const {
    return n == other.n && gamma_count == other.gamma_count &&
           add_table == other.add_table &&
           ternary_tables == other.ternary_tables;
  }
};

namespace detail {

inline void check_limits(int n, int gamma_count, const Limits& limits) {
  if (n < 1) throw InvalidInput("carrier size must be at least 1");
  if (gamma_count < 1) throw InvalidInput("at least one gamma is required");
  if (n > limits.max_carrier)
    throw CapExceeded("carrier size " + std::to_string(n) +
                      " exceeds the carrier cap " +
                      std::to_string(limits.max_carrier));
  if (n > 64)
    throw CapExceeded("carrier size " + std::to_string(n) +
                      " exceeds the hard cap 64");
  if (gamma_count > limits.max_gamma)
    throw CapExceeded("gamma count " + std::to_string(gamma_count) +
                      " exceeds the gamma cap " +
                      std::to_string(limits.max_gamma));
}

}  // namespace detail

// Modular model: carrier Z/n with ordinary addition, and
// {a,b,c}_g = gamma_g * a * b * c (mod n) for a list of residues gamma_g.
inline TernarySemiring build_modular(int n, const std::vector<int>& gammas,
                                     const Limits& limits = {}) {
  detail::check_limits(n, static_cast<int>(gammas.size()), limits);
  TernarySemiring t;
  t.n = n;
  t.gamma_count = static_cast<int>(gammas.size());
  t.element_names.reserve(n);
  for (int a = 0; a < n; ++a) t.element_names.push_back(std::to_string(a));
  for (int g : gammas) {
    if (g < 0 || g >= n)
      throw InvalidInput("gamma residue " + std::to_string(g) +
                         " is outside [0, " + std::to_string(n) + ")");
    t.gamma_names.push_back(std::to_string(g));
  }
  t.add_table.resize(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t.add_table[a * n + b] = (a + b) % n;
  t.ternary_tables.resize(static_cast<size_t>(t.gamma_count) * n * n * n);
  for (int gi = 0; gi < t.gamma_count; ++gi) {
    const int64_t g = gammas[gi];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          t.ternary_tables[((static_cast<size_t>(gi) * n + a) * n + b) * n +
                           c] = static_cast<Elem>(g * a % n * b % n * c % n);
  }
  return t;
}

// Table-driven construction.  Validates dimensions and entry ranges; the
// algebraic laws are checked separately by verify_axioms().
inline TernarySemiring build_from_tables(
    int n, std::vector<std::string> gamma_names, std::vector<Elem> add_table,
    std::vector<Elem> ternary_tables,
    std::optional<std::vector<std::string>> element_names = std::nullopt,
    const Limits& limits = {}) {
  detail::check_limits(n, static_cast<int>(gamma_names.size()), limits);
  const int gc = static_cast<int>(gamma_names.size());
  if (add_table.size() != static_cast<size_t>(n) * n)
    throw InvalidInput("add table must have n*n entries");
  if (ternary_tables.size() != static_cast<size_t>(gc) * n * n * n)
    throw InvalidInput("ternary tables must have gamma_count*n^3 entries");
  for (Elem e : add_table)
    if (e < 0 || e >= n) throw InvalidInput("add table entry out of range");
  for (Elem e : ternary_tables)
    if (e < 0 || e >= n)
      throw InvalidInput("ternary table entry out of range");
  TernarySemiring t;
  t.n = n;
  t.gamma_count = gc;
  t.gamma_names = std::move(gamma_names);
  if (element_names) {
    if (element_names->size() != static_cast<size_t>(n))
      throw InvalidInput("element_names must have n entries");
    t.element_names = std::move(*element_names);
  } else {
    for (int a = 0; a < n; ++a) t.element_names.push_back(std::to_string(a));
  }
  t.add_table = std::move(add_table);
  t.ternary_tables = std::move(ternary_tables);
  return t;
}

inline Elem ternary_product(const TernarySemiring& t, GammaIdx g, Elem a,
                            Elem b, Elem c) {
  if (g < 0 || g >= t.gamma_count)
    throw InvalidInput("gamma index out of range");
  if (a < 0 || a >= t.n || b < 0 || b >= t.n || c < 0 || c >= t.n)
    throw InvalidInput("element index out of range");
  return t.tern(g, a, b, c);
}

// Weak inverse search: the first (s_bar, g), ascending s_bar then ascending
// g, with {s, s_bar, x}_g = x for every x.  The gamma may depend on s.
inline std::optional<std::pair<Elem, GammaIdx>> find_gamma_inverse(
    const TernarySemiring& t, Elem s) {
  for (Elem sb = 0; sb < t.n; ++sb) {
    for (GammaIdx g = 0; g < t.gamma_count; ++g) {
      bool ok = true;
      for (Elem x = 0; x < t.n && ok; ++x) ok = t.tern(g, s, sb, x) == x;
      if (ok) return std::make_pair(sb, g);
    }
  }
  return std::nullopt;
}

// Strict invertibility: one witness s_bar must work for every gamma at once.
inline std::optional<Elem> strict_gamma_inverse(const TernarySemiring& t,
                                                Elem s) {
  for (Elem sb = 0; sb < t.n; ++sb) {
    bool ok = true;
    for (GammaIdx g = 0; g < t.gamma_count && ok; ++g)
      for (Elem x = 0; x < t.n && ok; ++x) ok = t.tern(g, s, sb, x) == x;
    if (ok) return sb;
  }
  return std::nullopt;
}

inline bool is_strictly_gamma_invertible(const TernarySemiring& t, Elem s) {
  return strict_gamma_inverse(t, s).has_value();
}

}  // namespace gammaspec
