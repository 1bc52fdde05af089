#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace galois;
using namespace galois::testing;

namespace {

struct Expected {
  const char* file;
  Verdict verdict;
};

class CorpusVerdict : public ::testing::TestWithParam<Expected> {};

}  // namespace

TEST_P(CorpusVerdict, Certify) {
  auto le = load(GetParam().file);
  auto c = certify(*le.ext, le.witness);
  EXPECT_EQ(c.verdict, GetParam().verdict) << to_string(c.verdict);
}

INSTANTIATE_TEST_SUITE_P(Corpus, CorpusVerdict,
                         ::testing::Values(Expected{"z12i.ext", Verdict::Valid}, Expected{"zi.ext", Verdict::Invalid},
                                           Expected{"trivial_qxq.ext", Verdict::Valid},
                                           Expected{"f25.ext", Verdict::Valid}, Expected{"z9_sqrt2.ext", Verdict::Valid},
                                           Expected{"z9_sqrt3.ext", Verdict::Invalid},
                                           Expected{"cyclo9.ext", Verdict::Valid},
                                           Expected{"z12_sqrt2.ext", Verdict::Valid},
                                           Expected{"z12_isqrt2.ext", Verdict::Valid},
                                           Expected{"zeta8.ext", Verdict::Valid},
                                           Expected{"ko_sqrt_y.ext", Verdict::Valid},
                                           Expected{"ko_sqrt_2y.ext", Verdict::Valid},
                                           Expected{"kummer_c3.ext", Verdict::Valid},
                                           Expected{"bad_action.ext", Verdict::Invalid}),
                         [](const auto& info) {
                           std::string s = info.param.file;
                           return s.substr(0, s.find('.'));
                         });

TEST(Certify, DeclaredWitnessChecks) {
  auto le = load("z12i.ext");
  ASSERT_TRUE(le.witness);
  EXPECT_TRUE(check_separability_witness(*le.ext, *le.witness));
  SeparabilityWitness bad = *le.witness;
  bad.u[0] = bad.u[0] + Element::one(le.ext->ring());
  EXPECT_FALSE(check_separability_witness(*le.ext, bad));
}

TEST(Certify, FoundWitnessIsGenuine) {
  for (const char* f : {"z12i.ext", "f25.ext", "z12_sqrt2.ext", "kummer_c3.ext"}) {
    auto le = load(f);
    auto w = find_separability_witness(*le.ext);
    ASSERT_TRUE(w) << f;
    EXPECT_TRUE(check_separability_witness(*le.ext, *w)) << f;
  }
}

TEST(Certify, NoWitnessForZi) {
  auto le = load("zi.ext");
  EXPECT_FALSE(find_separability_witness(*le.ext, 3));
}

TEST(Certify, ThetaDeterminantForZi) {
  auto le = load("zi.ext");
  auto c = certify(*le.ext);
  ASSERT_TRUE(c.g2.det);
  EXPECT_EQ(*c.g2.det, parse_element(le.ext->ring(), "-2*i"));
  EXPECT_NE(c.g2.diagnosis.find("ramification at the prime 2"), std::string::npos);
}

TEST(Certify, BadActionIsRejectedByVerifier) {
  auto le = load("bad_action.ext");
  auto a = verify_action(*le.ext);
  EXPECT_FALSE(a.valid);
  EXPECT_EQ(a.code, ErrorCode::NotAutomorphism);
}

TEST(Certify, RankMismatchIsInvalid) {
  RingPtr r = parse_ring("Q");
  RingPtr s = parse_ring("Q[x]/(x^3-2)");
  Element x = parse_element(s, "x");
  Extension e(r, s, cyclic_group(2), {GeneratorImages{{"x", x}}}, {});
  EXPECT_EQ(certify(e).verdict, Verdict::Invalid);
}

TEST(Certify, EnumerationOracleOverGF3) {
  for (const auto& ext : quadratic_extensions("GF(3)")) {
    bool brute = theta_bijective_by_enumeration(ext);
    EXPECT_EQ(certify(ext).verdict == Verdict::Valid, brute) << ext.ring()->key();
  }
}

TEST(Certify, EnumerationOracleSeesBothOutcomes) {
  int valid = 0, invalid = 0;
  for (const auto& ext : quadratic_extensions("Z/9")) (theta_bijective_by_enumeration(ext) ? valid : invalid)++;
  EXPECT_GT(valid, 0);
  EXPECT_GT(invalid, 0);
}

TEST(Trace, ValuesOnZ12i) {
  auto le = load("z12i.ext");
  const auto& ext = *le.ext;
  EXPECT_EQ(trace(ext, parse_element(ext.ring(), "3+5*i")), parse_element(ext.base(), "6"));
  EXPECT_TRUE(trace(ext, parse_element(ext.ring(), "i")).is_zero());
  auto t = trace_surjectivity(ext);
  EXPECT_EQ(t.status, Check::Pass);
  ASSERT_TRUE(t.witness);
  EXPECT_TRUE(trace(ext, *t.witness).is_one());
}

TEST(Trace, NormIsMultiplicative) {
  auto le = load("z12i.ext");
  const auto& ext = *le.ext;
  Element a = parse_element(ext.ring(), "1+2*i"), b = parse_element(ext.ring(), "3-i");
  EXPECT_EQ(norm(ext, a * b), norm(ext, a) * norm(ext, b));
  EXPECT_EQ(norm(ext, a), parse_element(ext.base(), "5"));
}

TEST(Morphism, TrivialExtensionSwap) {
  RingPtr r = parse_ring("Q x Q");
  Extension triv = trivial_extension(r, cyclic_group(2));
  EXPECT_EQ(certify(triv).verdict, Verdict::Valid);
  auto m = check_morphism_iso(triv, triv, componentwise_translation(triv, {1, 0}), true);
  EXPECT_EQ(m.status, MorphismStatus::Iso) << m.diagnosis;
}

TEST(Morphism, ZeroMapIsNotIso) {
  RingPtr r = parse_ring("Q");
  Extension triv = trivial_extension(r, cyclic_group(3));
  auto m = check_morphism_iso(triv, triv, zero_matrix(r, 3, 3), true);
  EXPECT_NE(m.status, MorphismStatus::Iso);
}

TEST(BaseChange, KeepsGaloisProperty) {
  auto le = load("z12_sqrt2.ext");
  auto t = base_change(*le.ext, parse_ring("Z[1/2][i]/(i^2+1)"));
  EXPECT_EQ(certify(t).verdict, Verdict::Valid);
}

TEST(Kummer, GroupOfZHalf) {
  RingPtr r = parse_ring("Z[1/2]");
  auto kg = kummer_group(r, 2, standard_units(r));
  EXPECT_EQ(kg->describe(), "C2 x C2");
  EXPECT_EQ(all_classes(kg).size(), 4u);
}

TEST(Kummer, ClassArithmetic) {
  RingPtr r = parse_ring("Z[1/2]");
  auto kg = kummer_group(r, 2, standard_units(r));
  auto a = kummer_class(kg, parse_element(r, "2"));
  EXPECT_TRUE(class_product(a, a).is_trivial());
  EXPECT_TRUE(class_power(a, 2).is_trivial());
  EXPECT_EQ(kummer_class(kg, parse_element(r, "8")), a);
  EXPECT_TRUE(kummer_class(kg, parse_element(r, "4")).is_trivial());
}

TEST(Kummer, ModelsAreGalois) {
  RingPtr r = parse_ring("Z[1/2]");
  auto kg = kummer_group(r, 2, standard_units(r));
  for (const auto& c : all_classes(kg)) {
    auto k = build_kummer(c);
    EXPECT_EQ(certify(k.ext).verdict, Verdict::Valid) << c.str();
  }
}

TEST(Kummer, ClassifyCyclicRecoversClass) {
  RingPtr r = parse_ring("Z[1/2]");
  auto kg = kummer_group(r, 2, standard_units(r));
  auto le = load("z12_sqrt2.ext");
  EXPECT_EQ(classify_cyclic(*le.ext, kg), kummer_class(kg, parse_element(r, "2")));
  auto le2 = load("z12i.ext");
  EXPECT_EQ(classify_cyclic(*le2.ext, kg), kummer_class(kg, parse_element(r, "-1")));
}

TEST(Kummer, CubicOverEisenstein) {
  auto le = load("kummer_c3.ext");
  RingPtr r = le.ext->base();
  auto units = le.base_units;
  ASSERT_TRUE(units);
  auto zeta = find_root_of_unity(*units, 3);
  ASSERT_TRUE(zeta);
  auto k = build_kummer(r, 3, parse_element(r, "w"), *zeta);
  EXPECT_EQ(certify(k.ext).verdict, Verdict::Valid);
}

TEST(Kummer, EigenspacesReassemble) {
  auto le = load("z12i.ext");
  auto dec = eigenspaces(*le.ext, Element::integer(le.ext->base(), -1));
  EXPECT_EQ(dec.pieces.size(), 2u);
  EXPECT_EQ(dec.reassembly, Check::Pass);
  EXPECT_EQ(check_eigenspace_pairings(dec), Check::Pass);
}

TEST(Kummer, GradedShifts) {
  RingPtr r = parse_ring("Z[1/2][y,y^-1;deg=4]");
  auto units = standard_units(r);
  ASSERT_TRUE(units);
  auto v = classify_shift(shift_module(r, 2), 2, *units);
  EXPECT_EQ(v.period, 4);
  EXPECT_TRUE(v.in_pic_n);
  EXPECT_TRUE(v.in_image);
  auto w = classify_shift(shift_module(r, 1), 2, *units);
  EXPECT_FALSE(w.in_pic_n);
}

TEST(Harrison, CyclicOrder) {
  RingPtr r = parse_ring("Z[1/2]");
  auto h = harrison_cyclic(r, 2, standard_units(r));
  EXPECT_EQ(h.order(), 4);
}

TEST(Harrison, ProductLawOnAllPairs) {
  RingPtr r = parse_ring("Z[1/2]");
  auto h = harrison_cyclic(r, 2, standard_units(r));
  auto cs = all_classes(h.kummer[0]);
  for (const auto& a : cs)
    for (const auto& b : cs) {
      auto m = check_product_law(h, {a}, {b});
      EXPECT_EQ(m.status, MorphismStatus::Iso) << a.str() << " * " << b.str() << ": " << m.diagnosis;
    }
}

TEST(Harrison, KleinFourOverZHalf) {
  RingPtr r = parse_ring("Z[1/2]");
  auto h = harrison_abelian(r, parse_group("product(cyclic(2),cyclic(2))"), standard_units(r));
  EXPECT_EQ(h.order(), 16);
  EXPECT_TRUE(h.exact);
}

TEST(UnitCohomology, FixedPointsMatchOnCorpus) {
  for (const char* f : {"z12i.ext", "z12_sqrt2.ext", "f25.ext", "z9_sqrt2.ext", "cyclo9.ext"}) {
    auto le = load(f);
    if (!le.ring_units || !le.base_units) continue;
    auto fp = unit_fixed_points(*le.ext, *le.ring_units, *le.base_units);
    EXPECT_EQ(fp.status, FixedPointStatus::Match) << f << ": " << fp.diagnosis;
  }
}

TEST(UnitCohomology, Hilbert90ForZ12i) {
  auto le = load("z12i.ext");
  auto h = h1_units(unit_gmodule(*le.ext, *le.ring_units));
  EXPECT_TRUE(h.group.is_zero());
  EXPECT_FALSE(h.contradiction);
}
