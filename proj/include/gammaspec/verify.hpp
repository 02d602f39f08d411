#pragma once

// Exhaustive axiom verification for ternary Gamma-semirings.
//
// verify_axioms() decides every defining law by full enumeration and reports
// violations as replayable witness tuples: replay_violation() reconstructs
// both sides of the failed equation from the witness alone, so a report can
// be audited without rerunning the scan.  The scan is complete: an empty
// violation list means no assignment of elements and gammas violates any
// checked law.

#include <algorithm>
#include <string>
#include <vector>

#include "gammaspec/core.hpp"
#include "gammaspec/semiring.hpp"

namespace gammaspec {

// Declaration order doubles as the canonical report order.
enum class Axiom {
  kAddCommutative,     // args: a, b  (a < b)
  kAddAssociative,     // args: a, b, c
  kAddZeroIdentity,    // args: a           (checks a+0 and 0+a)
  kDistributive,       // args: g, slot, a, a2, b, c
  kTernaryAssociative, // args: g, d, a, b, c, dd, e
  kZeroAbsorption,     // args: g, a, b     ({a,0,b}_g must be 0)
  kTernaryCommutative, // args: g, a, b, c, perm
};

inline const char* axiom_name(Axiom a) {
  switch (a) {
    case Axiom::kAddCommutative: return "add-commutative";
    case Axiom::kAddAssociative: return "add-associative";
    case Axiom::kAddZeroIdentity: return "add-zero-identity";
    case Axiom::kDistributive: return "distributive";
    case Axiom::kTernaryAssociative: return "ternary-associative";
    case Axiom::kZeroAbsorption: return "zero-absorption";
    case Axiom::kTernaryCommutative: return "ternary-commutative";
  }
  return "?";
}

// The five non-identity permutations checked against {a,b,c}_g.  The first
// two transpositions generate the symmetric group, so they are the essential
// laws; the remaining three are their consequences and are scanned anyway so
// that broken tables yield the most direct witness.
inline const int kTernaryPerms[5][3] = {
    {1, 0, 2}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

struct Violation {
  Axiom axiom;
  std::vector<int> args;

  bool operator<(const Violation& o) const {
    if (axiom != o.axiom) return axiom < o.axiom;
    return args < o.args;
  }
  bool operator==(const Violation& o) const {
    return axiom == o.axiom && args == o.args;
  }
};

struct AxiomReport {
  bool ok = true;
  // At most `violation_limit` entries: the first violations in canonical
  // (axiom, argument-tuple) order.
  std::vector<Violation> violations;
  // True when more violations exist than the limit allowed to record.
  bool truncated = false;
};

// Recomputes the two sides of the equation a witness claims to violate.
// Returns true when the witness is genuine (the sides differ).
inline bool replay_violation(const TernarySemiring& t, const Violation& v) {
  const auto& a = v.args;
  switch (v.axiom) {
    case Axiom::kAddCommutative:
      return t.add(a[0], a[1]) != t.add(a[1], a[0]);
    case Axiom::kAddAssociative:
      return t.add(t.add(a[0], a[1]), a[2]) != t.add(a[0], t.add(a[1], a[2]));
    case Axiom::kAddZeroIdentity:
      return t.add(a[0], 0) != a[0] || t.add(0, a[0]) != a[0];
    case Axiom::kDistributive: {
      const GammaIdx g = a[0];
      const int slot = a[1];
      const Elem x = a[2], x2 = a[3], b = a[4], c = a[5];
      const Elem sum = t.add(x, x2);
      Elem lhs, rhs;
      if (slot == 0) {
        lhs = t.tern(g, sum, b, c);
        rhs = t.add(t.tern(g, x, b, c), t.tern(g, x2, b, c));
      } else if (slot == 1) {
        lhs = t.tern(g, b, sum, c);
        rhs = t.add(t.tern(g, b, x, c), t.tern(g, b, x2, c));
      } else {
        lhs = t.tern(g, b, c, sum);
        rhs = t.add(t.tern(g, b, c, x), t.tern(g, b, c, x2));
      }
      return lhs != rhs;
    }
    case Axiom::kTernaryAssociative: {
      const GammaIdx g = a[0], d = a[1];
      const Elem x = a[2], y = a[3], c = a[4], dd = a[5], e = a[6];
      return t.tern(d, x, y, t.tern(g, c, dd, e)) !=
             t.tern(d, t.tern(g, x, y, c), dd, e);
    }
    case Axiom::kZeroAbsorption:
      return t.tern(a[0], a[1], 0, a[2]) != 0;
    case Axiom::kTernaryCommutative: {
      const GammaIdx g = a[0];
      const int* p = kTernaryPerms[a[4]];
      const Elem e[3] = {static_cast<Elem>(a[1]), static_cast<Elem>(a[2]),
                         static_cast<Elem>(a[3])};
      return t.tern(g, e[0], e[1], e[2]) !=
             t.tern(g, e[p[0]], e[p[1]], e[p[2]]);
    }
  }
  return false;
}

namespace detail {

// Runs one axiom family over a linear index space and appends violations in
// scan order.  Families enumerate argument tuples lexicographically, and
// per-chunk outputs are concatenated in chunk order, so the appended list is
// the canonical order for the family regardless of the thread count.
template <typename Fn>
void scan_family(int64_t total, int limit_hint, std::vector<Violation>& sink,
                 Fn&& emit) {
  if (limit_hint <= 0) return;
  const int chunks_needed = thread_count();
  if (chunks_needed <= 1 || total < 4096) {
    for (int64_t i = 0; i < total; ++i) {
      emit(i, sink);
      if (static_cast<int>(sink.size()) >= limit_hint) break;
    }
    return;
  }
  std::vector<std::vector<Violation>> parts(chunks_needed);
  parallel_chunks(total, [&](int chunk, int64_t begin, int64_t end) {
    auto& out = parts[chunk];
    for (int64_t i = begin; i < end; ++i) {
      emit(i, out);
      if (static_cast<int>(out.size()) >= limit_hint) break;
    }
  });
  for (auto& part : parts) {
    for (auto& v : part) {
      sink.push_back(std::move(v));
      if (static_cast<int>(sink.size()) >= limit_hint) return;
    }
  }
}

}  // namespace detail

// Full decision procedure for the semiring laws.  Reports every violation up
// to `violation_limit`, ordered by (axiom, argument tuple); the families are
// scanned in exactly that order so a truncated report is a prefix of the
// full canonical list.
inline AxiomReport verify_axioms(const TernarySemiring& t,
                                 int violation_limit = 100) {
  AxiomReport report;
  auto& out = report.violations;
  const int64_t n = t.n;
  const int64_t gc = t.gamma_count;

  auto budget = [&] { return violation_limit - static_cast<int>(out.size()); };

  detail::scan_family(n * n, budget(), out,
                      [&](int64_t i, std::vector<Violation>& sink) {
    const Elem a = static_cast<Elem>(i / n);
    const Elem b = static_cast<Elem>(i % n);
    if (a < b && t.add(a, b) != t.add(b, a))
      sink.push_back({Axiom::kAddCommutative, {a, b}});
  });

  detail::scan_family(n * n * n, budget(), out,
                      [&](int64_t i, std::vector<Violation>& sink) {
    const Elem a = static_cast<Elem>(i / (n * n));
    const Elem b = static_cast<Elem>(i / n % n);
    const Elem c = static_cast<Elem>(i % n);
    if (t.add(t.add(a, b), c) != t.add(a, t.add(b, c)))
      sink.push_back({Axiom::kAddAssociative, {a, b, c}});
  });

  detail::scan_family(n, budget(), out,
                      [&](int64_t i, std::vector<Violation>& sink) {
    const Elem a = static_cast<Elem>(i);
    if (t.add(a, 0) != a || t.add(0, a) != a)
      sink.push_back({Axiom::kAddZeroIdentity, {a}});
  });

  detail::scan_family(gc * 3 * n * n * n * n, budget(), out,
                      [&](int64_t i, std::vector<Violation>& sink) {
    int64_t r = i;
    const Elem c = static_cast<Elem>(r % n); r /= n;
    const Elem b = static_cast<Elem>(r % n); r /= n;
    const Elem x2 = static_cast<Elem>(r % n); r /= n;
    const Elem x = static_cast<Elem>(r % n); r /= n;
    const int slot = static_cast<int>(r % 3); r /= 3;
    const GammaIdx g = static_cast<GammaIdx>(r);
    const Elem sum = t.add(x, x2);
    Elem lhs, rhs;
    if (slot == 0) {
      lhs = t.tern(g, sum, b, c);
      rhs = t.add(t.tern(g, x, b, c), t.tern(g, x2, b, c));
    } else if (slot == 1) {
      lhs = t.tern(g, b, sum, c);
      rhs = t.add(t.tern(g, b, x, c), t.tern(g, b, x2, c));
    } else {
      lhs = t.tern(g, b, c, sum);
      rhs = t.add(t.tern(g, b, c, x), t.tern(g, b, c, x2));
    }
    if (lhs != rhs)
      sink.push_back({Axiom::kDistributive, {g, slot, x, x2, b, c}});
  });

  // Mixed associativity across two gamma parameters: the heaviest scan,
  // gamma_count^2 * n^5 bracket evaluations.
  detail::scan_family(gc * gc * n * n * n * n * n, budget(), out,
                      [&](int64_t i, std::vector<Violation>& sink) {
    int64_t r = i;
    const Elem e = static_cast<Elem>(r % n); r /= n;
    const Elem dd = static_cast<Elem>(r % n); r /= n;
    const Elem c = static_cast<Elem>(r % n); r /= n;
    const Elem b = static_cast<Elem>(r % n); r /= n;
    const Elem a = static_cast<Elem>(r % n); r /= n;
    const GammaIdx d = static_cast<GammaIdx>(r % gc); r /= gc;
    const GammaIdx g = static_cast<GammaIdx>(r);
    if (t.tern(d, a, b, t.tern(g, c, dd, e)) !=
        t.tern(d, t.tern(g, a, b, c), dd, e))
      sink.push_back({Axiom::kTernaryAssociative, {g, d, a, b, c, dd, e}});
  });

  detail::scan_family(gc * n * n, budget(), out,
                      [&](int64_t i, std::vector<Violation>& sink) {
    const GammaIdx g = static_cast<GammaIdx>(i / (n * n));
    const Elem a = static_cast<Elem>(i / n % n);
    const Elem b = static_cast<Elem>(i % n);
    if (t.tern(g, a, 0, b) != 0)
      sink.push_back({Axiom::kZeroAbsorption, {g, a, b}});
  });

  detail::scan_family(gc * n * n * n, budget(), out,
                      [&](int64_t i, std::vector<Violation>& sink) {
    const GammaIdx g = static_cast<GammaIdx>(i / (n * n * n));
    const Elem a = static_cast<Elem>(i / (n * n) % n);
    const Elem b = static_cast<Elem>(i / n % n);
    const Elem c = static_cast<Elem>(i % n);
    const Elem base = t.tern(g, a, b, c);
    const Elem e[3] = {a, b, c};
    for (int p = 0; p < 5; ++p) {
      const int* perm = kTernaryPerms[p];
      if (base != t.tern(g, e[perm[0]], e[perm[1]], e[perm[2]]))
        sink.push_back({Axiom::kTernaryCommutative, {g, a, b, c, p}});
    }
  });

  std::sort(out.begin(), out.end());
  report.truncated = static_cast<int>(out.size()) >= violation_limit;
  if (static_cast<int>(out.size()) > violation_limit)
    out.resize(violation_limit);
  report.ok = out.empty();
  return report;
}

}  // namespace gammaspec
