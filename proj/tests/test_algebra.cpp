#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace galois;
using namespace galois::testing;

// ---- rings ----

TEST(Ring, LocalizedArithmetic) {
  RingPtr r = parse_ring("Z[1/6]");
  Element a = parse_element(r, "1/2"), b = parse_element(r, "1/3");
  EXPECT_EQ(a + b, parse_element(r, "5/6"));
  EXPECT_TRUE(is_unit(parse_element(r, "12")).is_unit());
  EXPECT_FALSE(is_unit(parse_element(r, "5")).is_unit());
  EXPECT_THROW(parse_element(r, "1/5"), Error);
}

TEST(Ring, QuotientUnitsAndInverse) {
  RingPtr s = parse_ring("Z[1/2][i]/(i^2+1)");
  Element i = parse_element(s, "i");
  EXPECT_EQ(i * i, Element::integer(s, -1));
  auto u = is_unit(parse_element(s, "1+i"));
  ASSERT_TRUE(u.is_unit());
  EXPECT_TRUE((*u.inverse * parse_element(s, "1+i")).is_one());
  EXPECT_FALSE(is_unit(parse_element(s, "1+2*i")).is_unit());
}

TEST(Ring, ZiHasNoInverseOfOnePlusI) {
  RingPtr s = parse_ring("Z[i]/(i^2+1)");
  EXPECT_FALSE(is_unit(parse_element(s, "1+i")).is_unit());
  EXPECT_TRUE(is_unit(parse_element(s, "i")).is_unit());
}

TEST(Ring, FiniteRingsEnumerate) {
  EXPECT_EQ(parse_ring("GF(5)")->enumerate()->size(), 5u);
  EXPECT_EQ(parse_ring("Z/9")->enumerate()->size(), 9u);
  EXPECT_EQ(parse_ring("GF(5)[x]/(x^2-2)")->enumerate()->size(), 25u);
  EXPECT_FALSE(parse_ring("Z")->enumerate());
}

TEST(Ring, ResidueRingUnits) {
  RingPtr r = parse_ring("Z/9");
  for (long k = 0; k < 9; ++k) EXPECT_EQ(is_unit(Element::integer(r, k)).is_unit(), k % 3 != 0) << k;
}

TEST(Ring, LaurentDegrees) {
  RingPtr r = parse_ring("Z[1/2][y,y^-1;deg=4]");
  Element y = parse_element(r, "y");
  EXPECT_TRUE(is_unit(y).is_unit());
  EXPECT_EQ(homogeneous_degree(y), 4);
  EXPECT_EQ(homogeneous_degree(y.pow(-2)), -8);
  EXPECT_FALSE(homogeneous_degree(parse_element(r, "1+y")));
  EXPECT_FALSE(is_unit(parse_element(r, "1+y")).is_unit());
}

TEST(Ring, ProductIdempotents) {
  RingPtr r = parse_ring("Q x Q");
  auto pr = std::dynamic_pointer_cast<const ProductRing>(r);
  ASSERT_TRUE(pr);
  Element e0(r, pr->idempotent(0)), e1(r, pr->idempotent(1));
  EXPECT_TRUE((e0 + e1).is_one());
  EXPECT_TRUE((e0 * e1).is_zero());
  EXPECT_EQ(e0 * e0, e0);
  EXPECT_TRUE(complete_orthogonal_idempotents({e0, e1}));
}

TEST(Ring, NonMonicRejected) {
  try {
    parse_ring("Z[x]/(2*x^2-1)");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownRingConstructor);
  }
}

TEST(Ring, CoerceIntoExtension) {
  RingPtr r = parse_ring("Z[1/2]");
  RingPtr s = parse_ring("Z[1/2][i]/(i^2+1)");
  Element h = coerce(parse_element(r, "3/2"), s);
  EXPECT_EQ(h, parse_element(s, "3/2"));
}

// ---- integer linear algebra ----

TEST(Smith, DiagonalDivisibility) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> d(-9, 9);
  for (int t = 0; t < 30; ++t) {
    Matrix<Integer> a(3, 4, 0);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j) a(i, j) = d(rng);
    auto s = smith_normal_form(a);
    auto uav = multiply(multiply(s.U, a, Integer(0)), s.V, Integer(0));
    EXPECT_TRUE(uav == s.D);
    for (std::size_t i = 0; i + 1 < 3; ++i)
      if (s.D(i + 1, i + 1) != 0) EXPECT_EQ(Integer(s.D(i + 1, i + 1) % s.D(i, i)), 0);
  }
}

TEST(Smith, CokernelInvariants) {
  Matrix<Integer> a(2, 2, 0);
  a(0, 0) = 2;
  a(1, 1) = 3;
  EXPECT_EQ(cokernel_invariants(a), (std::vector<Integer>{6}));
  Matrix<Integer> b(2, 1, 0);
  b(0, 0) = 4;
  EXPECT_EQ(cokernel_invariants(b), (std::vector<Integer>{4, 0}));
}

TEST(Smith, HermiteModMatchesPlainHermite) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<long> d(-20, 20);
  for (int t = 0; t < 20; ++t) {
    Matrix<Integer> g(3, 3, 0);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) g(i, j) = d(rng);
    Matrix<Integer> with_e = hstack(g, Matrix<Integer>::identity(3, 0, 12), Integer(0));
    auto plain = hermite_basis(with_e);
    auto mod = hermite_basis_mod(g, 12);
    for (std::size_t c = 0; c < mod.basis.cols(); ++c) EXPECT_TRUE(plain.contains(mod.basis.column(c)));
    for (std::size_t c = 0; c < plain.basis.cols(); ++c) EXPECT_TRUE(mod.contains(plain.basis.column(c)));
  }
}

TEST(Berkowitz, DeterminantAgreesWithSmith) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> d(-5, 5);
  for (int t = 0; t < 20; ++t) {
    Matrix<Integer> a(4, 4, 0);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) a(i, j) = d(rng);
    Integer det = determinant(a, Integer(0), Integer(1));
    Integer prod = 1;
    auto s = smith_normal_form(a, {.left = false, .right = false});
    for (std::size_t i = 0; i < 4; ++i) prod *= s.D(i, i);
    EXPECT_EQ(Integer(abs(det)), Integer(abs(prod)));
  }
}

TEST(LinAlg, InverseOverLocalization) {
  RingPtr r = parse_ring("Z[1/2]");
  ElemMatrix a = zero_matrix(r, 2, 2);
  a(0, 0) = Element::integer(r, 2);
  a(1, 1) = Element::integer(r, 1);
  auto inv = inverse(a, r);
  ASSERT_TRUE(inv);
  EXPECT_EQ(mat_mul(a, *inv, r), identity_matrix(r, 2));
  a(0, 0) = Element::integer(r, 3);
  EXPECT_FALSE(inverse(a, r));
}

// ---- groups ----

TEST(Group, Descriptors) {
  EXPECT_EQ(parse_group("cyclic(6)")->order(), 6u);
  auto k = parse_group("product(cyclic(2),cyclic(2))");
  EXPECT_EQ(k->order(), 4u);
  EXPECT_EQ(invariant_factors(*k), (std::vector<long>{2, 2}));
  auto u9 = parse_group("units(9)");
  EXPECT_EQ(u9->order(), 6u);
  EXPECT_TRUE(u9->cyclic_generator());
  EXPECT_EQ(invariant_factors(*parse_group("units(8)")), (std::vector<long>{2, 2}));
  EXPECT_THROW(parse_group("dihedral(3)"), Error);
}

TEST(Group, AxiomsOfTables) {
  for (const char* d : {"cyclic(5)", "units(12)", "product(cyclic(3),cyclic(2))"}) {
    auto g = parse_group(d);
    for (std::size_t a = 0; a < g->order(); ++a) {
      EXPECT_EQ(g->mul(a, g->inv(a)), g->identity());
      EXPECT_EQ(g->mul(a, g->identity()), a);
    }
  }
}

TEST(Group, CharactersAndIdempotents) {
  RingPtr r = parse_ring("Z[1/3][w]/(w^2+w+1)");
  Element w = parse_element(r, "w");
  auto g = cyclic_group(3);
  auto chars = all_characters(g, w);
  ASSERT_EQ(chars.size(), 3u);
  for (const auto& c : chars) EXPECT_TRUE(is_multiplicative(c));
  std::vector<GroupRingElement> es;
  for (const auto& c : chars) es.push_back(character_idempotent(c, r));
  EXPECT_TRUE(complete_orthogonal_idempotents(es));
}

TEST(Group, UpsilonRoundTrip) {
  RingPtr r = parse_ring("Z");
  auto g = cyclic_group(4);
  std::vector<Element> t;
  for (long k = 0; k < 4; ++k) t.push_back(Element::integer(r, k * k - 2));
  EXPECT_EQ(upsilon(upsilon_inverse(g, r, t)), t);
}

// ---- modules ----

TEST(Modules, DualityOfFreeAndIdempotent) {
  std::mt19937_64 rng(4);
  RingPtr r = parse_ring("Z[1/2]");
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t k = 0; k <= n; ++k) {
      auto q = FGModule::idempotent_image(r, random_idempotent(rng, r, n, k));
      EXPECT_TRUE(check_strong_duality(canonical_duality(q)).strongly_dualizable());
    }
}

TEST(Modules, TorsionNotDualizable) {
  RingPtr z = parse_ring("Z");
  ElemMatrix rel = zero_matrix(z, 1, 1);
  rel(0, 0) = Element::integer(z, 3);
  auto v = check_strong_duality(canonical_duality(FGModule::presented(z, rel)));
  EXPECT_FALSE(v.strongly_dualizable());
}

TEST(Modules, NonIdempotentRejected) {
  RingPtr z = parse_ring("Z");
  ElemMatrix e = identity_matrix(z, 2);
  e(0, 0) = Element::integer(z, 2);
  EXPECT_THROW(FGModule::idempotent_image(z, e), Error);
}

// ---- cohomology ----

TEST(Cohomology, TrivialModuleOverC2) {
  // H^s(C2; Z) = Z, 0, Z/2, 0, Z/2
  GModule m;
  m.group = cyclic_group(2);
  m.free_rank = 1;
  m.action = {Matrix<Integer>::identity(1, 0, 1)};
  auto c = cohomology(m, 4);
  EXPECT_EQ(c.degrees[0].group.describe(), "Z");
  EXPECT_TRUE(c.degrees[1].group.is_zero());
  EXPECT_EQ(c.degrees[2].group.order(), 2);
  EXPECT_TRUE(c.degrees[3].group.is_zero());
  EXPECT_EQ(c.degrees[4].group.order(), 2);
}

TEST(Cohomology, SignModuleOverC2) {
  // Z with g = -1: H^0 = 0, H^1 = Z/2, H^2 = 0
  GModule m;
  m.group = cyclic_group(2);
  m.free_rank = 1;
  Matrix<Integer> a(1, 1, 0);
  a(0, 0) = -1;
  m.action = {a};
  auto c = cohomology(m, 3);
  EXPECT_TRUE(c.degrees[0].group.is_zero());
  EXPECT_EQ(c.degrees[1].group.order(), 2);
  EXPECT_TRUE(c.degrees[2].group.is_zero());
  EXPECT_EQ(c.degrees[3].group.order(), 2);
}

TEST(Cohomology, TrivialProductGroup) {
  // H^1(C2 x C2; Z) = 0, H^2 = Hom(G, Q/Z) = (Z/2)^2
  GModule m;
  m.group = parse_group("product(cyclic(2),cyclic(2))");
  m.free_rank = 1;
  m.action = {Matrix<Integer>::identity(1, 0, 1), Matrix<Integer>::identity(1, 0, 1)};
  auto c = cohomology(m, 2);
  EXPECT_TRUE(c.degrees[1].group.is_zero());
  EXPECT_EQ(c.degrees[2].group.torsion, (std::vector<Integer>{2, 2}));
}

TEST(Cohomology, BarMatchesPeriodicOnRandomModules) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 6; ++k) {
    GModule m = random_cyclic_module(rng, 2 + k % 2, 2, 6);
    auto bar = cohomology(m, 3);
    auto per = cyclic_oracle(m, 3);
    for (int s = 0; s <= 3; ++s) EXPECT_EQ(bar.degrees[s].group, per.degrees[s].group) << k << " " << s;
  }
}

TEST(Cohomology, InducedModuleIsAcyclic) {
  auto le = load("z12i.ext");
  auto c = cohomology(additive_gmodule(*le.ext), 3);
  EXPECT_EQ(c.degrees[0].group.describe(), "Z[1/2]");
  for (int s = 1; s <= 3; ++s) EXPECT_TRUE(c.degrees[s].group.is_zero());
}

TEST(Cohomology, UnitsOfFiniteField) {
  // GF(25)^x is cyclic of order 24; Frobenius fixed points are GF(5)^x.
  auto le = load("f25.ext");
  auto fp = unit_fixed_points(*le.ext, *le.ring_units, *le.base_units);
  EXPECT_EQ(fp.status, FixedPointStatus::Match) << fp.diagnosis;
  auto m = unit_gmodule(*le.ext, *le.ring_units);
  Integer order = 1;
  for (const auto& t : m.torsion) order *= t;
  EXPECT_EQ(m.free_rank, 0u);
  EXPECT_EQ(order, 24);
  // Hilbert 90 for finite fields
  EXPECT_TRUE(h1_units(m).group.is_zero());
}

TEST(Cohomology, H1OfUnitsZi) {
  // Z[i]^x = <i>, C2 acts by inversion: H^1 = Z/2
  auto le = load("zi.ext");
  auto h = h1_units(unit_gmodule(*le.ext, *le.ring_units));
  EXPECT_EQ(h.group.order(), 2);
  EXPECT_TRUE(h.contradiction);
}
