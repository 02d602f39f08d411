// Sections over opens of the spectrum: open-set validation with greedy basic
// decompositions, exhaustive patch-certified enumeration, restriction,
// sheaf-axiom checks, and the fraction-to-section comparison on basic opens.
// A three-element chain semiring (add = max, product = min) supplies a
// non-discrete spectrum where the naive stalk-product count overshoots the
// certified section count; values frozen after hand-checking its patches.

#include <gtest/gtest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "gammaspec/sheaf.hpp"
#include "gammaspec/verify.hpp"
#include "support/oracles.hpp"

namespace {

using namespace gammaspec;

TernarySemiring z12_single() { return build_modular(12, {1}); }
TernarySemiring z12_pair() { return build_modular(12, {1, 5}); }

TernarySemiring chain3() {
  const int n = 3;
  std::vector<Elem> add(n * n), tern(n * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) add[a * n + b] = std::max(a, b);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        tern[(a * n + b) * n + c] = std::min(a, std::min(b, c));
  return build_from_tables(n, {"g"}, add, tern);
}

std::vector<std::vector<Elem>> value_lists(
    const std::vector<SectionFamily>& secs) {
  std::vector<std::vector<Elem>> out;
  for (const auto& s : secs) out.push_back(s.values);
  return out;
}

// Brute isomorphism search between two module views over one semiring:
// bijection fixing 0, preserving add and the scalar action.
bool modules_isomorphic(const GammaModule& a, const GammaModule& b) {
  if (a.size != b.size || a.parent != b.parent) return false;
  if (a.size == 1) return true;
  const TernarySemiring& t = *a.parent;
  std::vector<Elem> perm(a.size - 1);
  for (int i = 1; i < a.size; ++i) perm[i - 1] = i;
  do {
    std::vector<Elem> f(a.size);
    f[0] = 0;
    for (int i = 1; i < a.size; ++i) f[i] = perm[i - 1];
    bool ok = true;
    for (Elem x = 0; x < a.size && ok; ++x)
      for (Elem y = 0; y < a.size; ++y)
        if (f[a.add(x, y)] != b.add(f[x], f[y])) {
          ok = false;
          break;
        }
    for (GammaIdx g = 0; g < t.gamma_count && ok; ++g)
      for (Elem s = 0; s < t.n && ok; ++s)
        for (Elem x = 0; x < a.size && ok; ++x)
          for (Elem r = 0; r < t.n; ++r)
            if (f[a.act(g, s, x, r)] != b.act(g, s, f[x], r)) {
              ok = false;
              break;
            }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

TEST(OpenSets, ValidationAndBasisDecomposition) {
  const auto t = z12_pair();
  const auto space = spectrum(t);
  ASSERT_EQ(space.primes.size(), 2u);

  const auto whole = whole_space(space);
  EXPECT_EQ(whole.primes, (std::vector<int>{0, 1}));
  EXPECT_EQ(whole.basis_decomposition, (std::vector<Elem>{1}));

  // Prime 0 is the ideal through 3; its singleton is cut out by D(2).
  const auto at3 = make_open(space, {0});
  EXPECT_EQ(at3.basis_decomposition, (std::vector<Elem>{2}));
  const auto at2 = make_open(space, {1});
  EXPECT_EQ(at2.basis_decomposition, (std::vector<Elem>{3}));

  const auto dup = make_open(space, {1, 0, 1});
  EXPECT_EQ(dup.primes, (std::vector<int>{0, 1}));
  EXPECT_THROW(make_open(space, {2}), InvalidInput);

  EXPECT_TRUE(open_subset(at3, whole));
  EXPECT_FALSE(open_subset(whole, at3));
  EXPECT_TRUE(open_intersection(at3, at2).primes.empty());
  EXPECT_EQ(open_intersection(whole, at2).primes, at2.primes);
}

TEST(OpenSets, ChainSpectrumHasNonOpenPointAndHonestSectionCount) {
  const auto t = chain3();
  ASSERT_TRUE(verify_axioms(t).ok);
  const auto space = spectrum(t);
  ASSERT_EQ(space.primes.size(), 2u);
  EXPECT_EQ(space.primes[0].members, (std::vector<Elem>{0}));
  EXPECT_EQ(space.primes[1].members, (std::vector<Elem>{0, 1}));
  EXPECT_TRUE(is_t0(space));
  EXPECT_FALSE(is_discrete(space));

  // The generic point's singleton is open, the closed point's is not.
  EXPECT_EQ(make_open(space, {0}).basis_decomposition,
            (std::vector<Elem>{1}));
  try {
    make_open(space, {1});
    FAIL() << "non-open prime set accepted";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("not open"), std::string::npos);
  }

  const auto sheaf = structure_sheaf(space);
  EXPECT_EQ(sheaf.stalks[0].num_classes(), 2);
  EXPECT_EQ(sheaf.stalks[1].num_classes(), 3);

  // Every whole-space section needs one fraction valid at both primes, so
  // only the three fractions over the unit cut it: the stalk product 6
  // overcounts the certified families.
  const auto secs = sections(sheaf, whole_space(space));
  EXPECT_EQ(value_lists(secs),
            (std::vector<std::vector<Elem>>{{0, 0}, {1, 1}, {1, 2}}));
  for (const auto& s : secs)
    EXPECT_TRUE(verify_section_family(sheaf, s).ok);

  const auto report = verify_sheaf_axioms(
      sheaf, whole_space(space),
      {basic_open_set(space, 1), basic_open_set(space, 2)});
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.compatible_families, 3);

  const auto top = compare_basic_sections(sheaf, 2);
  EXPECT_TRUE(top.bijective());
  EXPECT_EQ(top.localization_classes, 3);
  const auto generic = compare_basic_sections(sheaf, 1);
  EXPECT_TRUE(generic.bijective());
  EXPECT_EQ(generic.localization_classes, 2);
}

TEST(Sections, TwelveElementEnumerations) {
  const auto t = z12_pair();
  const auto space = spectrum(t);
  const auto sheaf = structure_sheaf(space);
  EXPECT_EQ(sheaf.stalks[0].num_classes(), 2);
  EXPECT_EQ(sheaf.stalks[1].num_classes(), 4);

  const auto none = sections(sheaf, make_open(space, {}));
  ASSERT_EQ(none.size(), 1u);
  EXPECT_TRUE(none.front().values.empty());

  // Singletons are in bijection with their stalks.
  EXPECT_EQ(value_lists(sections(sheaf, make_open(space, {0}))),
            (std::vector<std::vector<Elem>>{{0}, {1}}));
  EXPECT_EQ(value_lists(sections(sheaf, make_open(space, {1}))),
            (std::vector<std::vector<Elem>>{{0}, {1}, {2}, {3}}));

  // The discrete two-point space takes every pair of stalk classes.
  const auto whole = sections(sheaf, whole_space(space));
  ASSERT_EQ(whole.size(), 8u);
  for (int c0 = 0; c0 < 2; ++c0)
    for (int c1 = 0; c1 < 4; ++c1)
      EXPECT_EQ(whole[c0 * 4 + c1].values,
                (std::vector<Elem>{static_cast<Elem>(c0),
                                   static_cast<Elem>(c1)}));
  for (const auto& s : whole) {
    const auto check = verify_section_family(sheaf, s);
    EXPECT_TRUE(check.ok) << check.reason;
  }

  Limits tiny;
  tiny.max_section_space = 1;
  EXPECT_THROW(sections(sheaf, whole_space(space), tiny), CapExceeded);
}

TEST(Sections, RestrictionDropsValuesAndRecertifies) {
  const auto t = z12_pair();
  const auto space = spectrum(t);
  const auto sheaf = structure_sheaf(space);
  const auto whole = whole_space(space);
  const auto at3 = make_open(space, {0});
  const auto at2 = make_open(space, {1});

  const auto secs = sections(sheaf, whole);
  const auto& s = secs[6];  // values {1, 2}
  ASSERT_EQ(s.values, (std::vector<Elem>{1, 2}));

  const auto to_self = restrict_section(sheaf, s, whole);
  EXPECT_EQ(to_self.values, s.values);

  const auto left = restrict_section(sheaf, s, at3);
  EXPECT_EQ(left.values, (std::vector<Elem>{1}));
  EXPECT_TRUE(verify_section_family(sheaf, left).ok);
  const auto right = restrict_section(sheaf, s, at2);
  EXPECT_EQ(right.values, (std::vector<Elem>{2}));

  // Functoriality through the chain whole -> whole -> singleton.
  const auto twice = restrict_section(sheaf, to_self, at2);
  EXPECT_EQ(twice.values, right.values);

  const auto empty = restrict_section(sheaf, s, make_open(space, {}));
  EXPECT_TRUE(empty.values.empty());

  EXPECT_THROW(restrict_section(sheaf, left, whole), InvalidInput);
}

TEST(Sections, TamperedFamiliesFailReplay) {
  const auto t = z12_pair();
  const auto space = spectrum(t);
  const auto sheaf = structure_sheaf(space);
  auto secs = sections(sheaf, whole_space(space));
  auto s = secs[5];
  s.values[1] = (s.values[1] + 1) % 4;
  const auto check = verify_section_family(sheaf, s);
  EXPECT_FALSE(check.ok);
  EXPECT_FALSE(check.reason.empty());

  auto bad_cert = secs[5];
  bad_cert.certificates[0].denominator = 6;  // inside every prime
  EXPECT_FALSE(verify_section_family(sheaf, bad_cert).ok);
}

TEST(SheafAxioms, TwelveElementCovers) {
  const auto t = z12_pair();
  const auto space = spectrum(t);
  const auto sheaf = structure_sheaf(space);
  const auto whole = whole_space(space);
  const auto d3 = basic_open_set(space, 3);
  const auto d2 = basic_open_set(space, 2);

  // Disjoint basic cover: gluing is free pairing of member sections.
  const auto split = verify_sheaf_axioms(sheaf, whole, {d3, d2});
  EXPECT_TRUE(split.ok()) << (split.failures.empty()
                                  ? ""
                                  : split.failures.front());
  EXPECT_EQ(split.compatible_families, 8);

  const auto trivial = verify_sheaf_axioms(sheaf, whole, {whole});
  EXPECT_TRUE(trivial.ok());
  EXPECT_EQ(trivial.compatible_families, 8);

  const auto redundant = verify_sheaf_axioms(sheaf, whole, {whole, d2});
  EXPECT_TRUE(redundant.ok());
  EXPECT_EQ(redundant.compatible_families, 8);

  const auto partial = verify_sheaf_axioms(sheaf, whole, {d2});
  EXPECT_FALSE(partial.ok());
  EXPECT_FALSE(partial.covering_ok);

  const auto none = verify_sheaf_axioms(sheaf, whole, {});
  EXPECT_FALSE(none.ok());

  EXPECT_THROW(verify_sheaf_axioms(sheaf, d3, {whole}), InvalidInput);
}

TEST(BasicSections, FractionFamiliesMatchOnTwelve) {
  const auto t = z12_pair();
  const auto space = spectrum(t);
  const auto sheaf = structure_sheaf(space);

  const auto at0 = compare_basic_sections(sheaf, 0);
  EXPECT_TRUE(at0.degenerate);
  EXPECT_NE(at0.note.find("0 seeded"), std::string::npos);
  EXPECT_EQ(at0.num_sections, 1);  // the empty open keeps its one section

  const auto at6 = compare_basic_sections(sheaf, 6);
  EXPECT_TRUE(at6.degenerate);
  EXPECT_NE(at6.note.find("{6,6,6}"), std::string::npos);

  const auto at2 = compare_basic_sections(sheaf, 2);
  EXPECT_TRUE(at2.bijective());
  EXPECT_EQ(at2.localization_classes, 2);
  EXPECT_EQ(at2.num_sections, 2);

  const auto at3 = compare_basic_sections(sheaf, 3);
  EXPECT_TRUE(at3.bijective());
  EXPECT_EQ(at3.localization_classes, 4);

  // 5 generates {1,5}, the whole space opens up, and the localization
  // matches global sections class for class.
  const auto at5 = compare_basic_sections(sheaf, 5);
  EXPECT_TRUE(at5.bijective());
  EXPECT_EQ(at5.localization_classes, 8);
  EXPECT_EQ(at5.num_sections, 8);

  const auto single = z12_single();
  const auto sspace = spectrum(single);
  const auto ssheaf = structure_sheaf(sspace);
  EXPECT_EQ(ssheaf.stalks[0].num_classes(), 3);
  EXPECT_EQ(ssheaf.stalks[1].num_classes(), 4);
  const auto s2 = compare_basic_sections(ssheaf, 2);
  EXPECT_TRUE(s2.bijective());
  EXPECT_EQ(s2.localization_classes, 3);
  const auto s5 = compare_basic_sections(ssheaf, 5);
  EXPECT_TRUE(s5.bijective());
  EXPECT_EQ(s5.localization_classes, 12);
  EXPECT_EQ(s5.num_sections, 12);
}

TEST(ModuleSheaves, QuotientSheafOverTwelve) {
  const auto t = z12_single();
  const auto space = spectrum(t);
  const auto m = build_modular_module(t, 6);
  const auto sheaf = module_sheaf(space, m);
  EXPECT_EQ(sheaf.stalks[0].num_classes(), 3);
  EXPECT_EQ(sheaf.stalks[1].num_classes(), 2);
  EXPECT_TRUE(sheaf.stalks[0].addition_supported);
  EXPECT_TRUE(sheaf.stalks[1].addition_supported);

  const auto whole = whole_space(space);
  const auto secs = sections(sheaf, whole);
  EXPECT_EQ(secs.size(), 6u);
  for (const auto& s : secs)
    EXPECT_TRUE(verify_section_family(sheaf, s).ok);

  const auto report = verify_sheaf_axioms(
      sheaf, whole, {basic_open_set(space, 3), basic_open_set(space, 2)});
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.compatible_families, 6);

  const auto other = z12_pair();
  const auto foreign = build_modular_module(other, 6);
  EXPECT_THROW(module_sheaf(space, foreign), InvalidInput);
}

TEST(ModuleSheaves, BasicSectionsAndDegeneracy) {
  const auto t = z12_single();
  const auto self = module_from_semiring(t);

  // For M = T the associated sheaf's basic sections are the fraction
  // semiring itself, class for class.
  const auto ma = associated_sheaf_sections(self, 2);
  const auto sa = localize(t, generated_mult_system(t, {2}));
  EXPECT_EQ(ma.num_classes(), sa.num_classes());
  EXPECT_EQ(ma.pair_class, sa.pair_class);

  EXPECT_THROW(associated_sheaf_sections(self, 6), DegenerateSystem);
  EXPECT_THROW(associated_sheaf_sections(self, 0), DegenerateSystem);

  const auto zero = build_modular_module(t, 1);
  EXPECT_EQ(associated_sheaf_sections(zero, 2).num_classes(), 1);
}

TEST(ModuleSheaves, StalkIdentificationOnSmallCases) {
  // Localizing the basic-open sections once more at a prime inside the open
  // reproduces the direct stalk, up to module isomorphism.
  const auto t = z12_single();
  const auto space = spectrum(t);

  const auto m = build_modular_module(t, 6);
  const auto m2 = associated_sheaf_sections(m, 2);
  ASSERT_TRUE(m2.view.has_value());
  const auto further =
      localize_module(*m2.view, prime_complement(t, space.primes[0]));
  const auto direct = localize_module_at_prime(m, space.primes[0]);
  ASSERT_TRUE(further.view.has_value());
  ASSERT_TRUE(direct.view.has_value());
  EXPECT_EQ(further.num_classes(), 3);
  EXPECT_TRUE(modules_isomorphic(*further.view, *direct.view));

  const auto self = module_from_semiring(t);
  const auto m3 = associated_sheaf_sections(self, 3);
  ASSERT_TRUE(m3.view.has_value());
  const auto further2 =
      localize_module(*m3.view, prime_complement(t, space.primes[1]));
  const auto direct2 = localize_module_at_prime(self, space.primes[1]);
  ASSERT_TRUE(further2.view.has_value());
  ASSERT_TRUE(direct2.view.has_value());
  EXPECT_EQ(further2.num_classes(), 4);
  EXPECT_TRUE(modules_isomorphic(*further2.view, *direct2.view));
}

TEST(SheafAxioms, ThirtyElementThreePrimeSpace) {
  const auto t = build_modular(30, {1});
  Limits wide;
  wide.max_enum_carrier = 30;
  const auto space = spectrum(t, wide);
  ASSERT_EQ(space.primes.size(), 3u);
  const auto sheaf = structure_sheaf(space, wide);

  std::vector<int> sizes;
  std::vector<bool> addable;
  for (const auto& st : sheaf.stalks) {
    sizes.push_back(st.num_classes());
    addable.push_back(st.addition_supported);
  }
  EXPECT_EQ(sizes, (std::vector<int>{5, 3, 2}));
  EXPECT_EQ(addable, (std::vector<bool>{false, true, true}));

  const auto whole = whole_space(space);
  const auto secs = sections(sheaf, whole, wide);
  EXPECT_EQ(secs.size(), 30u);

  const auto report = verify_sheaf_axioms(
      sheaf, whole,
      {basic_open_set(space, 2), basic_open_set(space, 3),
       basic_open_set(space, 5)},
      wide);
  EXPECT_TRUE(report.ok()) << (report.failures.empty()
                                   ? ""
                                   : report.failures.front());
  EXPECT_EQ(report.compatible_families, 30);
}

}  // namespace
