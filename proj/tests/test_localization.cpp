// Fraction semirings over multiplicative systems: class structure, verified
// class operations, canonical embedding, local units, and the factorization
// property.  Expected values were frozen from the brute-force construction
// in support/oracles.hpp plus modular arithmetic done by hand; the oracle
// cross-check below keeps both computations honest.

#include <gtest/gtest.h>

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "gammaspec/localization.hpp"
#include "gammaspec/spectrum.hpp"
#include "support/oracles.hpp"

namespace {

using namespace gammaspec;

TernarySemiring z12_single() { return build_modular(12, {1}); }
TernarySemiring z12_pair() { return build_modular(12, {1, 5}); }

std::vector<std::pair<Elem, Elem>> class_pairs(const LocalizedSemiring& loc,
                                               int c) {
  std::vector<std::pair<Elem, Elem>> out;
  for (int p : loc.classes[c]) out.push_back(loc.pairs[p]);
  return out;
}

TEST(MultSystem, ClosureAndValidation) {
  const auto t = z12_single();
  EXPECT_TRUE(is_multiplicative_system(t, {1, 5}));
  EXPECT_FALSE(is_multiplicative_system(t, {2}));

  const auto sys = make_mult_system(t, {5, 1});
  EXPECT_EQ(sys.members, (std::vector<Elem>{1, 5}));
  EXPECT_TRUE(sys.contains(5));
  EXPECT_FALSE(sys.contains(7));

  try {
    make_mult_system(t, {2});
    FAIL() << "closure violation not detected";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("{2,2,2}"), std::string::npos);
  }
  EXPECT_THROW(make_mult_system(t, {}), InvalidInput);
  EXPECT_THROW(make_mult_system(t, {0, 1}), InvalidInput);
  EXPECT_THROW(make_mult_system(t, {1, 12}), InvalidInput);
}

TEST(MultSystem, GeneratedClosure) {
  // Ternary words have odd length, so the closure of {2} in Z/12 never
  // reaches the binary square 4: it is {2, 8}, not {2, 4, 8}.
  const auto t = z12_single();
  EXPECT_EQ(generated_mult_system(t, {2}).members, (std::vector<Elem>{2, 8}));
  EXPECT_EQ(generated_mult_system(t, {3}).members, (std::vector<Elem>{3}));
  EXPECT_EQ(generated_mult_system(t, {1}).members, (std::vector<Elem>{1}));

  // With gamma residue 5 available the closure of {2} does pick up 4,
  // via {2,2,2}_5 = 40 = 4 (mod 12).
  const auto tp = z12_pair();
  EXPECT_EQ(generated_mult_system(tp, {2}).members,
            (std::vector<Elem>{2, 4, 8}));

  // 6*6*6 = 0 (mod 12): the closure of {6} degenerates.
  EXPECT_THROW(generated_mult_system(t, {6}), DegenerateSystem);
  EXPECT_THROW(generated_mult_system(t, {0}), DegenerateSystem);

  const auto t30 = build_modular(30, {1});
  EXPECT_EQ(generated_mult_system(t30, {2}).members, (std::vector<Elem>{2, 8}));
  EXPECT_EQ(generated_mult_system(t30, {6}).members, (std::vector<Elem>{6}));
}

TEST(MultSystem, PrimeComplement) {
  const auto t = z12_single();
  const auto space = spectrum(t);
  ASSERT_EQ(space.primes.size(), 2u);
  // primes[0] = (3), primes[1] = (2) in canonical order.
  const auto at3 = prime_complement(t, space.primes[0]);
  EXPECT_EQ(at3.members, (std::vector<Elem>{1, 2, 4, 5, 7, 8, 10, 11}));
  const auto at2 = prime_complement(t, space.primes[1]);
  EXPECT_EQ(at2.members, (std::vector<Elem>{1, 3, 5, 7, 9, 11}));

  // (4) is not prime; the rejection must carry the defining witness.
  const auto four = ideal_closure(t, {4});
  try {
    prime_complement(t, four);
    FAIL() << "non-prime accepted";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("not prime"), std::string::npos);
  }
  GammaIdeal whole = ideal_closure(t, {1});
  EXPECT_THROW(prime_complement(t, whole), InvalidInput);
}

// The twelve-element study with denominators {1, 5}: every class is a pair
// {(a, 1), (5a mod 12, 5)}, so there are twelve classes and the canonical
// map is a bijection.
TEST(Localization, TwelveElementStudyClasses) {
  const auto t = z12_single();
  const auto loc = localize(t, make_mult_system(t, {1, 5}));

  ASSERT_EQ(loc.num_classes(), 12);
  EXPECT_TRUE(loc.raw_relation_transitive);
  EXPECT_TRUE(loc.addition_supported);
  EXPECT_TRUE(loc.all_local_units);

  using P = std::vector<std::pair<Elem, Elem>>;
  EXPECT_EQ(class_pairs(loc, 0), (P{{0, 1}, {0, 5}}));
  EXPECT_EQ(class_pairs(loc, 1), (P{{1, 1}, {5, 5}}));
  EXPECT_EQ(class_pairs(loc, 2), (P{{1, 5}, {5, 1}}));
  EXPECT_EQ(class_pairs(loc, 3), (P{{2, 1}, {10, 5}}));
  EXPECT_EQ(class_pairs(loc, 4), (P{{2, 5}, {10, 1}}));
  EXPECT_EQ(class_pairs(loc, 5), (P{{3, 1}, {3, 5}}));
  EXPECT_EQ(class_pairs(loc, 11), (P{{9, 1}, {9, 5}}));

  EXPECT_EQ(loc.canonical_class,
            (std::vector<int>{0, 1, 3, 5, 6, 2, 8, 9, 7, 11, 4, 10}));
  EXPECT_EQ(loc.class_label(0), "0/1");
  EXPECT_EQ(loc.class_label(2), "1/5");
  EXPECT_EQ(loc.class_label(4), "2/5");

  // 1/5 times itself twice lands on 1/5 (5^3 = 5 and 1^3 = 1 mod 12).
  EXPECT_EQ(loc.tern_class(0, 2, 2, 2), 2);
  // s/s is neutral: {1/1, 1/1, x}_1 = x.
  for (int x = 0; x < 12; ++x) EXPECT_EQ(loc.tern_class(0, 1, 1, x), x);

  ASSERT_TRUE(loc.view.has_value());
  EXPECT_TRUE(verify_axioms(*loc.view).ok);
  EXPECT_EQ(loc.view->element_names[2], "1/5");

  const auto report = verify_canonical_map(loc);
  EXPECT_TRUE(report.ok());
  EXPECT_TRUE(report.additive_checked);
}

TEST(Localization, AgreesWithBruteForceOracle) {
  struct Case {
    int n;
    std::vector<int> gammas;
    std::vector<int> system;
  };
  const std::vector<Case> cases = {
      {12, {1}, {1, 5}},
      {12, {1, 5}, {2, 4, 8}},
      {12, {1}, {1, 3, 5, 7, 9, 11}},
      {12, {1, 5}, {1, 2, 4, 5, 7, 8, 10, 11}},
      {9, {1}, {1, 2, 4, 5, 7, 8}},
      {7, {1}, {1, 2, 3, 4, 5, 6}},
      {6, {1}, {1, 3, 5}},
      {6, {1}, {1, 2, 4, 5}},
      {8, {1, 3}, {1, 3, 5, 7}},
      {10, {1}, {1, 3, 7, 9, 5}},
      {30, {1}, {6}},
      {30, {1, 7}, {2, 8, 14, 26}},
  };
  for (const auto& c : cases) {
    const auto t = build_modular(c.n, c.gammas);
    auto members = c.system;
    std::sort(members.begin(), members.end());
    const auto loc = localize(t, make_mult_system(t, members));
    const auto brute = oracle::localize_brute(t, members);
    SCOPED_TRACE("n=" + std::to_string(c.n) +
                 " |S|=" + std::to_string(members.size()));
    ASSERT_EQ(loc.num_classes(), brute.num_classes);
    for (size_t p = 0; p < loc.pairs.size(); ++p)
      EXPECT_EQ(loc.pair_class[p], brute.pair_class[p]) << "pair " << p;
    EXPECT_EQ(loc.raw_relation_transitive, brute.raw_transitive);
    EXPECT_EQ(loc.addition_supported, brute.addition_supported);
    const int k = loc.num_classes();
    for (int g = 0; g < t.gamma_count; ++g)
      for (int c1 = 0; c1 < k; ++c1)
        for (int c2 = 0; c2 < k; ++c2)
          for (int c3 = 0; c3 < k; ++c3)
            ASSERT_EQ(loc.tern_class(g, c1, c2, c3),
                      brute.tern[((static_cast<size_t>(g) * k + c1) * k + c2) *
                                     k +
                                 c3]);
    if (loc.addition_supported) {
      for (int c1 = 0; c1 < k; ++c1)
        for (int c2 = 0; c2 < k; ++c2)
          ASSERT_EQ(loc.add_class(c1, c2),
                    brute.add[static_cast<size_t>(c1) * k + c2]);
    }
    for (int a = 0; a < t.n; ++a)
      EXPECT_EQ(loc.canonical_class[a], brute.canonical[a]);
    for (size_t i = 0; i < members.size(); ++i)
      EXPECT_EQ(loc.local_unit_gamma[i], brute.local_unit[i]);
  }
}

// Stalks of the twelve-element study.  At (2) the fractions collapse to a
// four-element semiring; at (3) the outcome depends on the gamma set.
TEST(Localization, StalkAtTwo) {
  const auto t = z12_single();
  const auto space = spectrum(t);
  const auto loc = localize_at_prime(t, space.primes[1]);

  ASSERT_EQ(loc.num_classes(), 4);
  EXPECT_TRUE(loc.addition_supported);
  EXPECT_TRUE(loc.all_local_units);
  EXPECT_EQ(loc.canonical_class,
            (std::vector<int>{0, 1, 3, 2, 0, 1, 3, 2, 0, 1, 3, 2}));
  for (int c = 0; c < 4; ++c) EXPECT_EQ(loc.classes[c].size(), 18u);

  // Addition on classes matches a four-element cyclic group under the
  // relabeling 0,1,3,2 (class 3 holds 2/1, the doubled generator).
  EXPECT_EQ(loc.add_class(1, 1), 3);
  EXPECT_EQ(loc.add_class(1, 3), 2);
  EXPECT_EQ(loc.add_class(1, 2), 0);
  EXPECT_EQ(loc.add_class(3, 3), 0);
  ASSERT_TRUE(loc.view.has_value());
  EXPECT_TRUE(verify_axioms(*loc.view).ok);

  EXPECT_TRUE(verify_canonical_map(loc).ok());
}

TEST(Localization, StalkAtThreeDependsOnGammaSet) {
  const auto t1 = z12_single();
  const auto space1 = spectrum(t1);
  const auto loc1 = localize_at_prime(t1, space1.primes[0]);
  ASSERT_EQ(loc1.num_classes(), 3);
  EXPECT_TRUE(loc1.addition_supported);
  EXPECT_EQ(loc1.canonical_class,
            (std::vector<int>{0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2}));

  // With gamma residue 5 available, 1/1 ~ 2/1 (u=1, gamma=5 rescales the
  // cube): the two nonzero classes merge and addition stops being
  // representative-independent.
  const auto t2 = z12_pair();
  const auto space2 = spectrum(t2);
  const auto loc2 = localize_at_prime(t2, space2.primes[0]);
  ASSERT_EQ(loc2.num_classes(), 2);
  EXPECT_FALSE(loc2.addition_supported);
  EXPECT_NE(loc2.addition_note.find("depends on representatives"),
            std::string::npos);
  EXPECT_TRUE(loc2.all_local_units);
  EXPECT_TRUE(verify_canonical_map(loc2).ok());
  EXPECT_FALSE(verify_canonical_map(loc2).additive_checked);
  EXPECT_FALSE(loc2.view.has_value());
}

// Localizing at the set of all odd residues of Z/9 exposes two honest
// limitations: the candidate addition formula is representative-dependent,
// and s/s fails to act as a local unit exactly when s^4 != 1 (mod 9).
TEST(Localization, NineElementStalkLacksUniversalLocalUnits) {
  const auto t = build_modular(9, {1});
  const auto space = spectrum(t);
  ASSERT_EQ(space.primes.size(), 1u);
  const auto loc = localize_at_prime(t, space.primes[0]);

  ASSERT_EQ(loc.num_classes(), 9);
  EXPECT_TRUE(loc.raw_relation_transitive);
  EXPECT_FALSE(loc.addition_supported);
  EXPECT_FALSE(loc.all_local_units);

  // System members ascend: 1,2,4,5,7,8.  Only 1 and 8 satisfy s^4 = 1.
  ASSERT_EQ(loc.local_unit_gamma.size(), 6u);
  EXPECT_EQ(loc.local_unit_gamma[0], std::optional<GammaIdx>(0));
  EXPECT_EQ(loc.local_unit_gamma[5], std::optional<GammaIdx>(0));
  for (int i : {1, 2, 3, 4})
    EXPECT_FALSE(loc.local_unit_gamma[i].has_value()) << "s index " << i;

  // The multiplicative structure still verifies, and the canonical map
  // remains a bijection transporting every ternary product.
  const auto report = verify_canonical_map(loc);
  EXPECT_TRUE(report.ok());
  EXPECT_FALSE(report.additive_checked);
}

TEST(Localization, SevenElementFieldLikeStalk) {
  const auto t = build_modular(7, {1});
  const auto space = spectrum(t);
  const auto loc = localize_at_prime(t, space.primes[0]);
  ASSERT_EQ(loc.num_classes(), 7);
  EXPECT_FALSE(loc.addition_supported);
  // Units of order dividing 4 in C6: only 1 and 6.
  EXPECT_TRUE(loc.local_unit_gamma[0].has_value());
  EXPECT_TRUE(loc.local_unit_gamma[5].has_value());
  for (int i : {1, 2, 3, 4}) EXPECT_FALSE(loc.local_unit_gamma[i].has_value());
}

TEST(Localization, ThirtyElementBasicOpenSections) {
  // embeds_as_hom records whether the canonical embedding transports the
  // ternary law.  With denominator seed s it holds iff s^14 = 1 modulo the
  // surviving factor of 30; seeds 2 and 3 violate it (2^14 = 4 mod 15,
  // 3^14 = 9 mod 10), an honest limitation of the cube-style embedding.
  const auto t = build_modular(30, {1});
  const struct {
    int seed;
    int classes;
    bool embeds_as_hom;
  } rows[] = {{1, 30, true}, {2, 15, false}, {3, 10, false}, {5, 6, true},
              {6, 5, true},  {10, 3, true},  {15, 2, true}};
  for (const auto& row : rows) {
    const auto loc = localize(t, generated_mult_system(t, {row.seed}));
    SCOPED_TRACE("seed " + std::to_string(row.seed));
    EXPECT_EQ(loc.num_classes(), row.classes);
    EXPECT_TRUE(loc.addition_supported);
    EXPECT_TRUE(loc.raw_relation_transitive);
    ASSERT_TRUE(loc.view.has_value());
    EXPECT_TRUE(verify_axioms(*loc.view).ok);
    const auto embedding = verify_canonical_map(loc);
    EXPECT_TRUE(embedding.zero_ok);
    EXPECT_TRUE(embedding.additive_ok);
    EXPECT_EQ(embedding.ternary_ok, row.embeds_as_hom);
    EXPECT_EQ(embedding.ok(), row.embeds_as_hom);
  }

  // Wider gamma sets merge classes and break the addition formula on the
  // denominator-2 sections, while the 10- and 15-denominator sections keep
  // a representative-independent sum.
  const auto t2 = build_modular(30, {1, 7});
  EXPECT_EQ(localize(t2, generated_mult_system(t2, {2})).num_classes(), 6);
  EXPECT_FALSE(localize(t2, generated_mult_system(t2, {2})).addition_supported);
  EXPECT_FALSE(localize(t2, generated_mult_system(t2, {6})).addition_supported);
  EXPECT_TRUE(localize(t2, generated_mult_system(t2, {10})).addition_supported);
  EXPECT_TRUE(localize(t2, generated_mult_system(t2, {15})).addition_supported);
}

TEST(Localization, FactorsIdentityUniquely) {
  const auto t = z12_single();
  const auto loc = localize(t, make_mult_system(t, {1, 5}));
  const auto f = identity_homomorphism(t);
  const auto report = check_universal_property(loc, f);

  EXPECT_TRUE(report.precondition_ok);
  EXPECT_EQ(report.factorization_count, 1);
  EXPECT_TRUE(report.unique);
  // The factor inverts the canonical bijection.
  EXPECT_EQ(report.factor_element_map,
            (std::vector<Elem>{0, 1, 5, 2, 10, 3, 4, 8, 6, 7, 11, 9}));
  EXPECT_EQ(report.factor_gamma_map, f.gamma_map);
}

TEST(Localization, FactorsParityMapUniquely) {
  const auto t = z12_single();
  const auto loc = localize(t, make_mult_system(t, {1, 5}));
  const auto r = build_modular(2, {1});
  TGHomomorphism f;
  f.source = &t;
  f.target = &r;
  f.gamma_map = {0};
  for (Elem a = 0; a < 12; ++a) f.element_map.push_back(a % 2);
  ASSERT_TRUE(verify_homomorphism(f).ok);

  const auto report = check_universal_property(loc, f);
  EXPECT_TRUE(report.precondition_ok);
  EXPECT_EQ(report.factorization_count, 1);
  EXPECT_TRUE(report.unique);
  EXPECT_EQ(report.factor_element_map,
            (std::vector<Elem>{0, 1, 1, 0, 0, 1, 0, 0, 0, 1, 1, 1}));
}

TEST(Localization, FactorsResidueMapThroughStalk) {
  const auto t = z12_single();
  const auto space = spectrum(t);
  const auto loc = localize_at_prime(t, space.primes[0]);
  const auto r = build_modular(3, {1});
  TGHomomorphism f;
  f.source = &t;
  f.target = &r;
  f.gamma_map = {0};
  for (Elem a = 0; a < 12; ++a) f.element_map.push_back(a % 3);
  ASSERT_TRUE(verify_homomorphism(f).ok);

  const auto report = check_universal_property(loc, f);
  EXPECT_TRUE(report.precondition_ok);
  EXPECT_EQ(report.factorization_count, 1);
  EXPECT_TRUE(report.unique);
}

TEST(Localization, UniversalPropertyPreconditionFailure) {
  const auto t = z12_single();
  const auto loc = localize(t, generated_mult_system(t, {2}));
  const auto f = identity_homomorphism(t);
  const auto report = check_universal_property(loc, f);
  EXPECT_FALSE(report.precondition_ok);
  EXPECT_EQ(report.non_invertible_images, (std::vector<Elem>{2, 8}));
  EXPECT_EQ(report.factorization_count, 0);
}

TEST(Localization, UniversalPropertyInputValidation) {
  const auto t = z12_single();
  const auto other = build_modular(6, {1});
  const auto loc = localize(t, make_mult_system(t, {1, 5}));
  EXPECT_THROW(check_universal_property(loc, identity_homomorphism(other)),
               InvalidInput);

  TGHomomorphism broken = identity_homomorphism(t);
  broken.element_map[3] = 4;
  EXPECT_THROW(check_universal_property(loc, broken), InvalidInput);
}

// A deliberately lawless ternary table: t(1,1,1) = t(1,2,1) = 1 with every
// other product 0.  Pairs (1,1) and (2,1) become related, yet the products
// from the two representatives land in different classes, which the
// exhaustive well-definedness scan must refuse.
TEST(Localization, RepresentativeDependentProductIsRejected) {
  const int n = 3;
  std::vector<Elem> add(n * n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) add[a * n + b] = std::max(a, b) % n;
  std::vector<Elem> tern(n * n * n, 0);
  tern[(1 * n + 1) * n + 1] = 1;
  tern[(1 * n + 2) * n + 1] = 1;
  const auto t = build_from_tables(n, {"g"}, add, tern);

  const auto sys = make_mult_system(t, {1});
  try {
    localize(t, sys);
    FAIL() << "representative-dependent product accepted";
  } catch (const Error& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("depends on representatives"), std::string::npos);
    EXPECT_NE(what.find("2/1"), std::string::npos);
  }
}

TEST(Localization, CapsAndOwnershipChecks) {
  const auto t = z12_single();
  const auto sys = make_mult_system(t, {1, 5});
  Limits tight;
  tight.max_stalk_classes = 10;
  EXPECT_THROW(localize(t, sys, tight), CapExceeded);

  const auto other = z12_pair();
  const auto foreign = make_mult_system(other, {1, 5});
  EXPECT_THROW(localize(t, foreign), InvalidInput);
}

TEST(Localization, ThreadCountDoesNotChangeClasses) {
  const auto t = z12_pair();
  const auto space = spectrum(t);
  const auto base = localize_at_prime(t, space.primes[1]);
  set_thread_count(8);
  const auto threaded = localize_at_prime(t, space.primes[1]);
  set_thread_count(1);
  EXPECT_EQ(base.pair_class, threaded.pair_class);
  EXPECT_EQ(base.class_tern, threaded.class_tern);
  EXPECT_EQ(base.class_add, threaded.class_add);
  EXPECT_EQ(base.canonical_class, threaded.canonical_class);
}

}  // namespace
