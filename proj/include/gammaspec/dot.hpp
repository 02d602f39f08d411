#pragma once

// Graphviz export of the proper-ideal inclusion lattice.  Primes are drawn
// as bold ellipses, other ideals as boxes; edges are the covering relations
// of inclusion, so the rendering is a Hasse diagram with the zero ideal at
// the bottom.

#include <string>
#include <vector>

#include "gammaspec/ideal.hpp"
#include "gammaspec/spectrum.hpp"

namespace gammaspec {

inline std::string ideal_lattice_dot(const SpectrumSpace& space) {
  const TernarySemiring& t = *space.parent;
  const uint64_t carrier = t.n == 64 ? ~uint64_t{0} : (uint64_t{1} << t.n) - 1;
  std::vector<const GammaIdeal*> proper;
  for (const auto& ideal : space.ideals)
    if (ideal.mask != carrier) proper.push_back(&ideal);
  auto is_prime_node = [&space](const GammaIdeal& ideal) {
    for (const auto& p : space.primes)
      if (p.mask == ideal.mask) return true;
    return false;
  };
  std::string dot = "graph ideal_lattice {\n  rankdir=BT;\n";
  for (size_t i = 0; i < proper.size(); ++i) {
    dot += "  i" + std::to_string(i) + " [label=\"" +
           ideal_label(t, *proper[i]) + "\"";
    if (is_prime_node(*proper[i]))
      dot += ", shape=ellipse, style=bold";
    else
      dot += ", shape=box";
    dot += "];\n";
  }
  // J -- I is an edge when I covers J: J < I with nothing properly between.
  for (size_t j = 0; j < proper.size(); ++j)
    for (size_t i = 0; i < proper.size(); ++i) {
      if (i == j) continue;
      const uint64_t lo = proper[j]->mask, hi = proper[i]->mask;
      if (lo == hi || (lo & ~hi) != 0) continue;
      bool covered = true;
      for (size_t k = 0; k < proper.size() && covered; ++k) {
        if (k == i || k == j) continue;
        const uint64_t mid = proper[k]->mask;
        if (mid != lo && mid != hi && (lo & ~mid) == 0 && (mid & ~hi) == 0)
          covered = false;
      }
      if (covered)
        dot += "  i" + std::to_string(j) + " -- i" + std::to_string(i) +
               ";\n";
    }
  dot += "}\n";
  return dot;
}

}  // namespace gammaspec
