#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "gbdef/deformation.hpp"
#include "gbdef/error.hpp"

using namespace gbdef;

namespace {

TensorPower power(const GradedBialgebra& b, int k) { return TensorPower(b.space_ptr(), k); }

void expect_agreement(const Deformation& d, const std::string& context) {
  VerificationReport a = verify_deformation(d), o = truncated_ring_oracle(d);
  ASSERT_EQ(a.passed(), o.passed()) << context;
  EXPECT_EQ(a.first_failing_order(), o.first_failing_order()) << context;
  EXPECT_EQ(a.failing_names_at_first_order(), o.failing_names_at_first_order()) << context;
}

}  // namespace

TEST(Deformation, LevelsFollowTopDegree) {
  Field q = Field::rational();
  EXPECT_EQ(full_level(trivial_bialgebra(q)), 0);
  EXPECT_EQ(full_level(taft(q, 2, q.from_int(-1))), 2);
  Field f7 = Field::prime(7);
  EXPECT_EQ(full_level(taft(f7, 3, f7.from_int(2))), 4);
  EXPECT_EQ(closure_level(taft(f7, 3, f7.from_int(2))), 6);
}

TEST(Deformation, TrivialVerifiesEverywhere) {
  for (const auto& ex : fixture::acceptance_examples()) {
    for (int level = 0; level <= full_level(ex.b); ++level) {
      auto d = Deformation::trivial(ex.b, level);
      EXPECT_TRUE(verify_deformation(d).passed()) << ex.name;
      EXPECT_TRUE(truncated_ring_oracle(d).passed()) << ex.name;
    }
  }
}

TEST(Deformation, ShapeIsChecked) {
  Field q = Field::rational();
  auto b = taft(q, 2, q.from_int(-1));
  auto wrong = GradedMap::zero(power(b, 2), power(b, 1), -2, q);
  EXPECT_THROW(Deformation(b, 1, {wrong}, {GradedMap::zero(power(b, 1), power(b, 2), -1, q)}), MalformedDeformation);
  EXPECT_THROW(Deformation(b, 2, {}, {}), MalformedDeformation);
}

TEST(Deformation, RestrictAndPad) {
  std::mt19937 rng(1);
  Field q = Field::rational();
  HatComplex cx(taft(q, 2, q.from_int(-1)));
  auto d = fixture::random_conjugate(rng, cx, 2);
  EXPECT_EQ(restrict(d, 2), d);
  EXPECT_TRUE(restrict(d, 0).is_trivial());
  auto r1 = restrict(d, 1);
  EXPECT_EQ(r1.level(), 1);
  EXPECT_TRUE(verify_deformation(r1).passed());
  EXPECT_EQ(restrict(pad(r1, 3), 1), r1);
  EXPECT_THROW(restrict(d, 3), InvalidArgument);
}

TEST(Deformation, OracleAgreesOnRandomCandidates) {
  std::mt19937 rng(17);
  for (const auto& ex : fixture::acceptance_examples()) {
    HatComplex cx(ex.b);
    int top = std::max(1, std::min(full_level(ex.b), 2));
    for (int k = 0; k < 12; ++k) {
      int level = 1 + k % top;
      auto d = fixture::random_conjugate(rng, cx, level);
      expect_agreement(d, ex.name + " valid");
      EXPECT_TRUE(verify_deformation(d).passed()) << ex.name;
      expect_agreement(fixture::corrupt(rng, d), ex.name + " corrupted");
    }
  }
}

TEST(Deformation, CorruptionIsNamed) {
  Field q = Field::rational();
  auto b = taft(q, 2, q.from_int(-1));
  // m_1(1, x) = x breaks the unit axiom at order 1 only.
  auto m1 = GradedMap::from_entries(power(b, 2), power(b, 1), -1, q,
                                    {{*b.space().find("g"), b.unit() * b.dim() + *b.space().find("x"), q.one()}});
  Deformation d(b, 1, {m1}, {GradedMap::zero(power(b, 1), power(b, 2), -1, q)});
  auto r = verify_deformation(d);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.first_failing_order(), 1);
  EXPECT_FALSE(r.find("unit", 1)->passed);
  expect_agreement(d, "unit slot");
}

TEST(Deformation, OracleFlagsInhomogeneousTables) {
  Field q = Field::rational();
  auto b = taft(q, 2, q.from_int(-1));
  const auto& sp = b.space();
  // x * x -> g lowers the degree by 2, not 1.
  CorrectionTables t{1, {{{*sp.find("x"), *sp.find("x"), *sp.find("g"), q.one()}}}, {{}}};
  auto r = truncated_ring_oracle(b, t);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.find("homogeneity", 1)->passed);
  EXPECT_FALSE(r.find("associativity"));
  EXPECT_THROW(deformation_from_tables(b, t), MalformedDeformation);
}

TEST(Deformation, ConjugationIsAnAction) {
  std::mt19937 rng(23);
  Field f7 = Field::prime(7);
  HatComplex cx(taft(f7, 3, f7.from_int(2)));
  for (int k = 0; k < 3; ++k) {
    auto d = fixture::random_conjugate(rng, cx, 2);
    auto phi = fixture::random_morphism(rng, cx, 2), psi = fixture::random_morphism(rng, cx, 2);
    auto d1 = conjugate(d, phi);
    EXPECT_TRUE(verify_deformation(d1).passed());
    EXPECT_TRUE(verify_isomorphism(d, d1, phi).passed());
    EXPECT_EQ(conjugate(d1, psi), conjugate(d, compose(psi, phi)));
    EXPECT_EQ(conjugate(d1, phi.inverse()), d);
    EXPECT_EQ(compose(phi, phi.inverse()), DeformationMorphism::identity(cx.bialgebra(), 2));
  }
}

TEST(Deformation, IsomorphismFailuresAreReported) {
  std::mt19937 rng(29);
  Field q = Field::rational();
  HatComplex cx(taft(q, 2, q.from_int(-1)));
  auto d = Deformation::trivial(cx.bialgebra(), 2);
  EXPECT_TRUE(verify_isomorphism(d, d, DeformationMorphism::identity(cx.bialgebra(), 2)).passed());
  DeformationMorphism phi;
  do {
    phi = fixture::random_morphism(rng, cx, 2);
  } while (phi.parts[0].is_zero());
  auto r = verify_isomorphism(d, d, phi);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.first_failing_order(), 1);
  EXPECT_THROW(verify_isomorphism(d, restrict(d, 1), phi), InvalidArgument);
}

TEST(Deformation, FirstOrderRoundTrip) {
  HatComplex cx(restricted_poly(2));
  auto h = cx.cohomology(2, -1);
  ASSERT_EQ(h.dimension, 1u);
  for (const auto& z : h.representatives) {
    auto d = deformation_from_cocycle(cx, z);
    EXPECT_TRUE(verify_deformation(d).passed());
    EXPECT_TRUE(truncated_ring_oracle(d).passed());
    auto c = first_order_class(cx, d);
    EXPECT_EQ(cx.to_vector(c.canonical), cx.to_vector(cx.canonical_representative(z)));
  }
  auto zero = deformation_from_cocycle(cx, cx.zero_total(2, -1));
  EXPECT_TRUE(zero.is_trivial());
  EXPECT_TRUE(first_order_class(cx, zero).canonical.is_zero());
}

TEST(Deformation, CoboundaryShiftKeepsTheClass) {
  std::mt19937 rng(31);
  HatComplex cx(restricted_poly(2));
  auto z = cx.cohomology(2, -1).representatives.front();
  for (int k = 0; k < 5; ++k) {
    auto theta = fixture::random_total(rng, cx, 1, -1);
    TotalCochain shifted = cx.from_vector(2, -1, cx.to_vector(z) + cx.to_vector(cx.total_differential(theta)));
    auto d1 = deformation_from_cocycle(cx, z), d2 = deformation_from_cocycle(cx, shifted);
    EXPECT_EQ(cx.to_vector(first_order_class(cx, d1).canonical), cx.to_vector(first_order_class(cx, d2).canonical));
  }
}

TEST(Deformation, NonCocycleIsRejectedWithRelation) {
  std::mt19937 rng(61);
  Field q = Field::rational();
  HatComplex cx(taft(q, 2, q.from_int(-1)));
  TotalCochain z = fixture::random_total(rng, cx, 2, -1);
  while (cx.is_cocycle(z)) z = fixture::random_total(rng, cx, 2, -1);
  auto dz = cx.total_differential(z);
  std::string expected = !dz.part_q(3).map.is_zero()   ? "associativity"
                         : !dz.part_q(2).map.is_zero() ? "compatibility"
                                                       : "coassociativity";
  try {
    deformation_from_cocycle(cx, z);
    FAIL() << "expected NotACocycle";
  } catch (const NotACocycle& e) {
    EXPECT_EQ(e.relation(), expected);
  }
  // The named relation is the axiom that fails at order 1.
  Deformation d(cx.bialgebra(), 1, {cx.embed(z.part_q(2))}, {cx.embed(z.part_q(1))});
  auto r = verify_deformation(d);
  EXPECT_FALSE(r.find(expected, 1)->passed);
}

TEST(Deformation, ObstructionSignConventionIsTheOnlyCocycle) {
  // Among the sign choices (F, +-H, +-G) only (-G, H, F) is a cocycle. H4 has G = 0
  // at level 1, so taft(3) is used.
  std::mt19937 rng(37);
  Field q = Field::prime(7);
  HatComplex cx(taft(q, 3, q.from_int(2)));
  bool seen_h = false, seen_g = false;
  for (int k = 0; k < 20 && !(seen_h && seen_g); ++k) {
    auto d = fixture::random_conjugate(rng, cx, 1);
    auto ob = obstruction(cx, d);
    EXPECT_TRUE(cx.is_cocycle(ob.triple));
    for (int flip_h : {0, 1}) {
      for (int flip_g : {0, 1}) {
        if (!flip_h && !flip_g) continue;
        TotalCochain t = ob.triple;
        if (flip_g) t.parts[0].map = t.parts[0].map.scaled(-q.one());
        if (flip_h) t.parts[1].map = t.parts[1].map.scaled(-q.one());
        if (!cx.is_cocycle(t)) {
          (flip_h ? seen_h : seen_g) = true;
        }
      }
    }
  }
  EXPECT_TRUE(seen_h);
  EXPECT_TRUE(seen_g);
}

TEST(Deformation, TrivialObstructionAndExtension) {
  for (const auto& ex : fixture::acceptance_examples()) {
    HatComplex cx(ex.b);
    auto d = Deformation::trivial(ex.b, 1);
    auto ob = obstruction(cx, d);
    EXPECT_TRUE(ob.triple.is_zero());
    ASSERT_TRUE(ob.vanishes());
    EXPECT_TRUE(ob.solution->is_zero());
    auto e = extend(cx, d);
    ASSERT_TRUE(e.extended);
    EXPECT_TRUE(e.extended->is_trivial());
    EXPECT_EQ(e.extended->level(), 2);
  }
}

TEST(Deformation, ExtensionVerifiesAndRestricts) {
  std::mt19937 rng(41);
  Field f7 = Field::prime(7);
  HatComplex cx(taft(f7, 3, f7.from_int(2)));
  for (int k = 0; k < 3; ++k) {
    auto d = restrict(fixture::random_conjugate(rng, cx, 2), 1);
    auto e = extend(cx, d, true);
    ASSERT_TRUE(e.extended);
    EXPECT_TRUE(verify_deformation(*e.extended).passed());
    EXPECT_TRUE(truncated_ring_oracle(*e.extended).passed());
    EXPECT_EQ(restrict(*e.extended, 1), d);
    for (const auto& z : e.family) EXPECT_TRUE(cx.is_cocycle(z));
  }
}

TEST(Deformation, TrivializeConjugates) {
  std::mt19937 rng(43);
  for (const auto& ex : fixture::acceptance_examples()) {
    HatComplex cx(ex.b);
    int L = full_level(ex.b);
    auto d = fixture::random_conjugate(rng, cx, L);
    auto t = trivialize(cx, d);
    ASSERT_TRUE(t.morphism) << ex.name;
    EXPECT_TRUE(verify_isomorphism(d, Deformation::trivial(ex.b, L), *t.morphism).passed()) << ex.name;
  }
}

TEST(Deformation, TrivializeStopsAtTheFirstClass) {
  HatComplex rp2(restricted_poly(2));
  auto z = rp2.cohomology(2, -1).representatives.front();
  auto t = trivialize(rp2, pad(deformation_from_cocycle(rp2, z), 2));
  EXPECT_FALSE(t.morphism);
  EXPECT_EQ(t.order, 1);
  ASSERT_TRUE(t.obstruction_class);
  EXPECT_EQ(rp2.to_vector(*t.obstruction_class), rp2.to_vector(rp2.canonical_representative(z)));

  // restricted_poly(3): the only class sits in degree -2.
  HatComplex rp3(restricted_poly(3));
  auto z2 = rp3.cohomology(2, -2).representatives.front();
  const auto& b = rp3.bialgebra();
  Deformation d(b, 2,
                {GradedMap::zero(power(b, 2), power(b, 1), -1, b.field()), rp3.embed(z2.part_q(2))},
                {GradedMap::zero(power(b, 1), power(b, 2), -1, b.field()), rp3.embed(z2.part_q(1))});
  ASSERT_TRUE(verify_deformation(d).passed());
  auto t2 = trivialize(rp3, d);
  EXPECT_FALSE(t2.morphism);
  EXPECT_EQ(t2.order, 2);
}

TEST(Deformation, Rigidity) {
  Field q = Field::rational();
  auto z2 = rigidity_check(HatComplex(group_algebra_cyclic(q, 2)));
  EXPECT_TRUE(z2.rigid);
  EXPECT_TRUE(z2.dimensions.empty());
  auto rp2 = rigidity_check(HatComplex(restricted_poly(2)));
  EXPECT_FALSE(rp2.rigid);
  ASSERT_EQ(rp2.dimensions.size(), 2u);
  EXPECT_EQ(rp2.dimensions[0], (std::pair<int, std::size_t>{1, 1}));
  EXPECT_TRUE(rigidity_check(HatComplex(trivial_bialgebra(q))).rigid);
}

TEST(Deformation, LiftingRoundTrip) {
  std::mt19937 rng(47);
  for (const auto& ex : fixture::acceptance_examples()) {
    HatComplex cx(ex.b);
    EXPECT_TRUE(lifting_decompose(ex.b, ex.b).is_trivial());
    auto d = fixture::random_conjugate(rng, cx, full_level(ex.b));
    auto u = lifting_tables(d);
    EXPECT_EQ(lifting_decompose(ex.b, u), d) << ex.name;
  }
}

TEST(Deformation, LiftingAxiomsMatchPaddedVerification) {
  // x * x = x + ... on restricted_poly(2) is the restricted lifting x^2 = x.
  auto b = restricted_poly(2);
  std::string base = emit_bialgebra(b);
  auto good = parse_bialgebra(base + "mul x x x 1\n", {false});
  auto d = lifting_decompose(b, good);
  bool axioms = true;
  for (const auto& c : verify_bialgebra(good).checks) {
    if (c.name != "grading") axioms = axioms && c.passed;
  }
  EXPECT_EQ(verify_deformation(pad(d, closure_level(b))).passed(), axioms);
  EXPECT_TRUE(axioms);

  // x * x = 1 breaks Delta(x x) = Delta(x) Delta(x).
  auto bad = parse_bialgebra(base + "mul x x 1 1\n", {false});
  auto d2 = lifting_decompose(b, bad);
  bool axioms2 = true;
  for (const auto& c : verify_bialgebra(bad).checks) {
    if (c.name != "grading") axioms2 = axioms2 && c.passed;
  }
  EXPECT_EQ(verify_deformation(pad(d2, closure_level(b))).passed(), axioms2);
  EXPECT_FALSE(axioms2);
}

TEST(Deformation, LiftingErrors) {
  auto b = restricted_poly(3);
  std::string base = emit_bialgebra(b);
  EXPECT_THROW(lifting_decompose(b, parse_bialgebra(base + "mul 1 x x2 1\n", {false})), NotALifting);
  EXPECT_THROW(lifting_decompose(b, parse_bialgebra(base + "mul x x x2 1\n", {false})), LiftingMismatch);
}

TEST(DeformationFile, RoundTrip) {
  std::mt19937 rng(53);
  Field f7 = Field::prime(7);
  HatComplex cx(taft(f7, 3, f7.from_int(2)));
  auto d = fixture::random_conjugate(rng, cx, 3);
  std::string text = emit_deformation(d, "taft3.bia");
  EXPECT_EQ(text.rfind("deformation level 3 over taft3.bia\n", 0), 0u);
  EXPECT_EQ(parse_deformation(text, cx.bialgebra()), d);
  EXPECT_EQ(parse_deformation_tables(text, cx.bialgebra()).over, "taft3.bia");
}

TEST(DeformationFile, Errors) {
  Field q = Field::rational();
  auto b = taft(q, 2, q.from_int(-1));
  auto kind = [&](const std::string& text) {
    try {
      parse_deformation(text, b);
    } catch (const ParseError& e) {
      return std::make_pair(e.kind(), e.line());
    }
    return std::make_pair(ParseErrorKind::missing, std::size_t(999));
  };
  EXPECT_EQ(kind(""), std::make_pair(ParseErrorKind::missing, std::size_t(0)));
  EXPECT_EQ(kind("deformation level 1\n"), std::make_pair(ParseErrorKind::syntax, std::size_t(1)));
  EXPECT_EQ(kind("deformation level 1 over h\nmul-correction order 2\n"),
            std::make_pair(ParseErrorKind::syntax, std::size_t(2)));
  EXPECT_EQ(kind("deformation level 1 over h\nx <- x,x : 1\n"), std::make_pair(ParseErrorKind::syntax, std::size_t(2)));
  EXPECT_EQ(kind("deformation level 1 over h\nmul-correction order 1\ny <- x,x : 1\n"),
            std::make_pair(ParseErrorKind::unknown_label, std::size_t(3)));
  EXPECT_EQ(kind("deformation level 1 over h\nmul-correction order 1\ng <- x,x : 1\n"),
            std::make_pair(ParseErrorKind::grading, std::size_t(3)));
  EXPECT_EQ(kind("deformation level 1 over h\nmul-correction order 1\ng <- x,x : 1/0\n"),
            std::make_pair(ParseErrorKind::bad_scalar, std::size_t(3)));
  // the raw parser keeps inhomogeneous entries for the oracle
  auto raw = parse_deformation_tables("deformation level 1 over h\nmul-correction order 1\ng <- x,x : 1\n", b);
  EXPECT_FALSE(truncated_ring_oracle(b, raw.tables).find("homogeneity", 1)->passed);
}

TEST(CochainFile, RoundTrip) {
  std::mt19937 rng(59);
  Field q = Field::rational();
  HatComplex cx(taft(q, 2, q.from_int(-1)));
  auto c = fixture::random_cochain(rng, cx, 2, 1, -1);
  auto back = parse_cochain(emit_cochain(c), cx);
  EXPECT_EQ(back.map, c.map);
  EXPECT_EQ(back.p, 2);
  EXPECT_THROW(parse_cochain("cochain 1 1 -1\nx <- g : 1\n", cx), ParseError);
}
