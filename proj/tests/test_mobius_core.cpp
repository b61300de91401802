#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "support.hpp"

using namespace monodromy;
using testing_support::Rng;

namespace {

const Complex I{0.0, 1.0};

Mat2 translation(Complex w) { return {1.0, w, 0.0, 1.0}; }

}  // namespace

TEST(Compose, IdentityAndInverse) {
  Rng rng(1);
  const SL2Matrix m = rng.sl2();
  EXPECT_EQ(compose(SL2Matrix{}, m).mat(), m.mat());
  EXPECT_LT((compose(m, m.inverse()).mat() - Mat2::identity()).frobenius(), 1e-14);
}

TEST(Compose, HandProduct) {
  const SL2Matrix x(1.0, 1.0, 0.0, 1.0), y(1.0, 0.0, 1.0, 1.0);
  const Mat2 expected{2.0, 1.0, 1.0, 1.0};
  EXPECT_EQ(compose(x, y).mat(), expected);
}

TEST(Compose, DeterminantMultiplies) {
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const SL2Matrix x = rng.sl2(2.0), y = rng.sl2(2.0);
    EXPECT_NEAR(std::abs(compose(x, y).det() - 1.0), 0.0, 1e-12);
  }
}

TEST(Compose, RejectsNonFinite) {
  const SL2Matrix bad = SL2Matrix::unchecked({NAN, 0.0, 0.0, 1.0});
  EXPECT_THROW(compose(bad, SL2Matrix{}), InvalidInput);
}

TEST(SL2Matrix, ChecksDeterminant) {
  EXPECT_THROW(SL2Matrix(2.0, 0.0, 0.0, 1.0), InvalidInput);
  const SL2Matrix n = SL2Matrix::normalize({2.0, 0.0, 0.0, 2.0});
  EXPECT_NEAR(std::abs(n.det() - 1.0), 0.0, 1e-15);
  EXPECT_THROW(SL2Matrix::normalize({1.0, 1.0, 1.0, 1.0}), InvalidInput);
}

TEST(Apply, SphereConventions) {
  const MobiusMap id = MobiusMap::identity();
  EXPECT_EQ(id(Complex(3.0, 4.0)), Complex(3.0, 4.0));

  const MobiusMap inv = MobiusMap::from_coefficients(0.0, 1.0, 1.0, 0.0);
  const SpherePoint at_inf = inv(SpherePoint::at_infinity());
  EXPECT_FALSE(at_inf.infinite);
  EXPECT_EQ(at_inf.value, Complex{});
  EXPECT_TRUE(inv(SpherePoint{0.0, false}).infinite);

  const MobiusMap m(SL2Matrix(2.0, 1.0, 1.0, 1.0));
  EXPECT_NEAR(std::abs(m(Complex(1.0)) - 1.5), 0.0, 1e-15);
  EXPECT_TRUE(apply(m, SpherePoint{-1.0, false}).infinite);
  EXPECT_NEAR(std::abs(apply(m, SpherePoint::at_infinity()).value - 2.0), 0.0, 1e-15);
}

TEST(Apply, CompositionIsAction) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const MobiusMap x = rng.mobius(), y = rng.mobius();
    const Complex z = rng.complex(2.0);
    const SpherePoint lhs = (x * y)(SpherePoint{z, false});
    const SpherePoint rhs = x(y(SpherePoint{z, false}));
    ASSERT_EQ(lhs.infinite, rhs.infinite);
    if (!lhs.infinite) {
      EXPECT_LE(std::abs(lhs.value - rhs.value), 1e-12 * std::max(1.0, std::abs(lhs.value)));
    }
  }
}

TEST(Canonical, IdempotentAndSignInvariant) {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const SL2Matrix m = rng.sl2();
    const SL2Matrix c = MobiusMap::canonical(m);
    EXPECT_EQ(MobiusMap::canonical(c).mat(), c.mat());
    EXPECT_EQ(MobiusMap::canonical(-m).mat(), c.mat());
    const Complex lead = c.a() != Complex{} ? c.a() : (c.b() != Complex{} ? c.b() : c.c());
    const double arg = std::arg(lead);
    EXPECT_TRUE(arg > -std::numbers::pi / 2 && arg <= std::numbers::pi / 2);
  }
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(MobiusMap(SL2Matrix(1.0, 1.0, 0.0, 1.0))), MobiusClass::parabolic);
  const Complex w = std::polar(1.0, std::numbers::pi / 6);
  EXPECT_EQ(classify(MobiusMap(SL2Matrix(w, 0.0, 0.0, 1.0 / w))), MobiusClass::elliptic);
  const double s = std::sqrt(2.0);
  const MobiusMap dilation(SL2Matrix(s, 0.0, 0.0, 1.0 / s));
  EXPECT_NEAR(std::abs(dilation.mat().trace() * dilation.mat().trace() - 4.5), 0.0, 1e-14);
  EXPECT_EQ(classify(dilation), MobiusClass::loxodromic);
  EXPECT_EQ(classify(MobiusMap(SL2Matrix(-1.0, 0.0, 0.0, -1.0))), MobiusClass::identity);
}

TEST(Classify, RequiresUnitDeterminant) {
  const MobiusMap bad(SL2Matrix::unchecked({2.0, 0.0, 0.0, 1.0}));
  EXPECT_THROW(classify(bad), PreconditionError);
}

TEST(Classify, ConjugationInvariant) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const MobiusMap g = rng.mobius(0.8);
    MobiusMap m = rng.mobius();
    if (i % 3 == 1) m = MobiusMap(SL2Matrix(1.0, rng.complex(), 0.0, 1.0));
    if (i % 3 == 2) {
      const Complex w = std::polar(1.0, rng.uniform(0.2, 3.0));
      m = MobiusMap(SL2Matrix(w, 0.0, 0.0, 1.0 / w));
    }
    const MobiusMap conj(SL2Matrix::normalize((g * m * g.inverse()).mat()));
    EXPECT_EQ(classify(conj, 1e-7), classify(m, 1e-7));
  }
}

TEST(RelationResidual, CommutingTranslations) {
  GroupPresentation p{{"A", "B"},
                      {MobiusMap(SL2Matrix(translation(1.0))), MobiusMap(SL2Matrix(translation(I)))},
                      {commutator(0, 1)}};
  EXPECT_LE(relation_residual(p).value, 1e-15);
  EXPECT_FALSE(relation_residual(p).no_relators);
}

TEST(RelationResidual, RandomLoxodromicsFail) {
  Rng rng(6);
  int big = 0;
  for (int i = 0; i < 20; ++i) {
    GroupPresentation p{{"A", "B"}, {rng.mobius(), rng.mobius()}, {commutator(0, 1)}};
    if (relation_residual(p).value > 0.1) ++big;
  }
  EXPECT_GE(big, 18);
}

TEST(RelationResidual, EmptyRelatorsFlagged) {
  GroupPresentation p{{"A"}, {MobiusMap::identity()}, {}};
  const RelationResidual r = relation_residual(p);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_TRUE(r.no_relators);
}

TEST(RelationResidual, MalformedRejected) {
  GroupPresentation p{{"A"}, {MobiusMap::identity()}, {{{3, 1}}}};
  EXPECT_FALSE(p.well_formed());
  EXPECT_THROW(relation_residual(p), InvalidInput);
}

TEST(RelationResidual, UnitaryConjugationInvariant) {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    GroupPresentation p{{"A", "B"}, {rng.mobius(), rng.mobius()}, {commutator(0, 1)}};
    const double before = relation_residual(p).value;
    // SU(2) element: Frobenius distances are invariant under its conjugation.
    const Complex alpha = rng.complex(), beta = rng.complex();
    const MobiusMap g = MobiusMap::from_coefficients(alpha, beta, -std::conj(beta), std::conj(alpha));
    for (auto& m : p.generators) m = g * m * g.inverse();
    const double after = relation_residual(p).value;
    EXPECT_LE(std::abs(after - before), 10 * 1e-15 * std::max(1.0, before));
  }
}

TEST(RelationResidual, SatisfiedRelationSurvivesConjugation) {
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const MobiusMap a(SL2Matrix(translation(rng.complex()))), b(SL2Matrix(translation(rng.complex())));
    GroupPresentation p{{"A", "B"}, {a, b}, {commutator(0, 1)}};
    const MobiusMap g = rng.mobius(0.7);
    for (auto& m : p.generators) m = g * m * g.inverse();
    double scale = 1.0;
    for (const auto& m : p.generators) scale = std::max(scale, m.mat().frobenius());
    EXPECT_LE(relation_residual(p).value, 10 * 1e-16 * std::pow(scale, 4) * 16);
  }
}

TEST(Signature, Validation) {
  EXPECT_TRUE(validate_signature({0, 0, {2}}, 2).valid);
  const SignatureCheck excluded = validate_signature({0, 2, {0}}, 2);
  EXPECT_FALSE(excluded.valid);
  EXPECT_NE(excluded.diagnostics.front().find("excluded"), std::string::npos);
  const SignatureCheck one = validate_signature({1, 0, {1}}, 2);
  EXPECT_FALSE(one.valid);
  EXPECT_NE(one.diagnostics.front().find("1"), std::string::npos);
  EXPECT_FALSE(validate_signature({0, 0, {3}}, 2).valid);
}

TEST(Signature, KoebeRelators) {
  const RelatorScheme fuchsian = koebe_relators({0, 0, {3}});
  ASSERT_EQ(fuchsian.relators.size(), 1u);
  EXPECT_EQ(fuchsian.relators[0].size(), 12u);
  EXPECT_EQ(fuchsian.labels, (std::vector<std::string>{"U1", "U2", "U3", "V1", "V2", "V3"}));

  const RelatorScheme schottky = koebe_relators({2, 0, {}});
  EXPECT_TRUE(schottky.relators.empty());
  EXPECT_EQ(schottky.labels, (std::vector<std::string>{"T1", "T2"}));

  const RelatorScheme mixed = koebe_relators({1, 1, {2}});
  ASSERT_EQ(mixed.relators.size(), 2u);
  // Indices: T1 = 0, U1..U3 = 1..3, V1..V3 = 4..6.
  EXPECT_EQ(mixed.relators[0], commutator(1, 4));
  Word second = commutator(2, 5);
  const Word tail = commutator(3, 6);
  second.insert(second.end(), tail.begin(), tail.end());
  EXPECT_EQ(mixed.relators[1], second);

  EXPECT_THROW(koebe_relators({0, 2, {0}}), InvalidInput);
}
