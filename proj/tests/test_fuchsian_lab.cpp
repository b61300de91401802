#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <vector>

#include "support.hpp"

using namespace monodromy;
using namespace monodromy::fuchsian;

namespace {

const OctagonGroup& group() {
  static const OctagonGroup g = build_octagon_group();
  return g;
}

const Polynomial kSeed({1.0, 0.5, 0.0, 0.2});

std::vector<MobiusMap> side_generators() {
  const auto& s = group().side_pairings;
  return {s.begin(), s.end()};
}

MobiusMap quarter_turn() {
  const Complex w = std::polar(1.0, std::numbers::pi / 4);
  return MobiusMap(SL2Matrix(w, 0.0, 0.0, 1.0 / w));
}

}  // namespace

TEST(Octagon, VertexAngle) {
  EXPECT_NEAR(group().vertex_angle, std::numbers::pi / 4, 1e-10);
  EXPECT_NEAR(vertex_angle(group().circumradius), std::numbers::pi / 4, 1e-10);
  for (const Complex v : group().vertices) EXPECT_NEAR(std::abs(v), group().circumradius, 1e-14);
}

TEST(Octagon, GeneratorsAreLoxodromicAndPreserveDisc) {
  for (const auto& m : group().side_pairings) {
    EXPECT_EQ(classify(m), MobiusClass::loxodromic);
    EXPECT_LE(disc_preservation_residual(m), 1e-12);
    EXPECT_NEAR(std::abs(m.mat().trace()), 2.0 * std::cosh(group().translation_length / 2.0), 1e-10);
  }
  for (const auto& m : group().marked) {
    EXPECT_EQ(classify(m), MobiusClass::loxodromic);
    EXPECT_LE(disc_preservation_residual(m), 1e-12);
  }
}

TEST(Octagon, SidePairingsMapSides) {
  // s_k maps side k + 4 onto side k (endpoints swap orientation).
  const auto& v = group().vertices;
  for (std::size_t k = 0; k < 4; ++k) {
    const Complex a = v[k + 4], b = v[(k + 5) % 8];
    const Complex ia = group().side_pairings[k](a), ib = group().side_pairings[k](b);
    const Complex c = v[k], d = v[k + 1];
    const double err = std::min(std::abs(ia - c) + std::abs(ib - d), std::abs(ia - d) + std::abs(ib - c));
    EXPECT_LE(err, 1e-12) << k;
  }
}

TEST(Octagon, Relations) {
  EXPECT_LE(relation_residual(group().marked_presentation()).value, 1e-8);
  EXPECT_LE(relation_residual(group().side_presentation()).value, 1e-8);
}

TEST(Enumeration, Counts) {
  EXPECT_EQ(enumerate(group(), 0).elements.size(), 1u);
  EXPECT_EQ(enumerate(group(), 1).elements.size(), 9u);
  EXPECT_EQ(enumerate(group(), 1, false).elements.size(), 8u);
  // Elements of word length exactly n; counts strictly increase and the
  // growth ratio lies in [5, 7] for n = 3..6.
  std::vector<double> ball{1.0};
  for (int n = 1; n <= 6; ++n) ball.push_back(static_cast<double>(enumerate(group(), n).elements.size()));
  for (int n = 1; n <= 6; ++n) EXPECT_GT(ball[n], ball[n - 1]);
  for (int n = 3; n <= 6; ++n) {
    const double ratio = (ball[n] - ball[n - 1]) / (ball[n - 1] - ball[n - 2]);
    EXPECT_GE(ratio, 5.0) << n;
    EXPECT_LE(ratio, 7.0) << n;
  }
}

TEST(Enumeration, DeterministicAndCapped) {
  const GroupEnumeration a = enumerate(group(), 3);
  const GroupEnumeration b = enumerate(group(), 3);
  ASSERT_EQ(a.elements.size(), b.elements.size());
  for (std::size_t i = 0; i < a.elements.size(); ++i) {
    EXPECT_EQ(a.elements[i].word, b.elements[i].word);
    EXPECT_EQ(a.elements[i].map.mat(), b.elements[i].map.mat());
  }
  EXPECT_THROW(enumerate(group(), 7), CapExceededError);
  EXPECT_THROW(enumerate(group(), 3, true, 2), CapExceededError);
  EXPECT_THROW(enumerate(group(), -1), InvalidInput);
}

TEST(Enumeration, NoDuplicatesAndWordsMatchMaps) {
  const GroupEnumeration e = enumerate(group(), 3);
  const auto gens = side_generators();
  for (std::size_t i = 0; i < e.elements.size(); ++i) {
    EXPECT_LE(psl2_distance(evaluate_word(gens, e.elements[i].word), e.elements[i].map.mat()), 1e-10);
    for (std::size_t j = 0; j < i; ++j) {
      EXPECT_GT(psl2_distance(e.elements[i].map.mat(), e.elements[j].map.mat()), 1e-6);
    }
  }
}

TEST(Theta, ZeroSeed) {
  const ThetaDifferential theta = theta_series(group(), Polynomial(), 3);
  EXPECT_TRUE(theta.is_zero());
  for (Complex t : disc_grid(0.9, 3, 8)) EXPECT_EQ(theta(t), Complex{});
}

TEST(Theta, AutomorphyImprovesWithLength) {
  const auto grid = disc_grid(0.5, 4, 12);
  std::vector<double> res;
  for (int n = 2; n <= 5; ++n) {
    res.push_back(automorphy_residual(theta_series(group(), kSeed, n), side_generators(), grid));
  }
  for (std::size_t i = 1; i < res.size(); ++i) EXPECT_LE(res[i], 1.1 * res[i - 1]) << i;
  EXPECT_LT(res.back(), res.front());
}

TEST(Theta, Holomorphic) {
  const ThetaDifferential theta = theta_series(group(), kSeed, 4);
  for (Complex c : {Complex(0.0), Complex(0.3, 0.2), Complex(-0.5, 0.1)}) {
    EXPECT_LE(circle_mean_residual(theta, c, 0.1), 1e-8);
  }
}

TEST(Theta, EvaluationDisc) {
  const ThetaDifferential theta = theta_series(group(), kSeed, 1);
  EXPECT_NO_THROW(theta(Complex(0.94)));
  EXPECT_THROW(theta(Complex(0.96)), PreconditionError);
  EXPECT_THROW(theta_series(group(), Polynomial(std::vector<Complex>(12, 1.0)), 1), InvalidInput);
}

TEST(DevelopingMonodromy, ZeroDifferentialIsConjugatedAction) {
  const Complex t0(0.1, -0.05);
  const DevelopingMap z(FieldTerm::zero(), t0);
  for (const auto& l : group().marked) {
    const DevelopingMonodromy dm = developing_monodromy(z, l);
    for (Complex w : {Complex(0.0), Complex(0.2, 0.1), Complex(-0.3, 0.4)}) {
      EXPECT_LE(std::abs(dm.rho(w) - (l(w + t0) - t0)), 1e-9);
    }
  }
}

TEST(DevelopingMonodromy, RoutesAgreeForAutomorphicField) {
  const MobiusMap l = quarter_turn();
  const FieldTerm q = RationalFn::polynomial({0.0, 0.0, Complex(0.6, -0.2)});
  IntegrationOptions opt;
  opt.tol = 1e-13;
  const DevelopingMap z(q, 0.0, opt);
  const DevelopingMonodromy dm = developing_monodromy(z, l, Complex(0.3, 0.1));
  EXPECT_LE(dm.route_discrepancy, 1e-6);
  ASSERT_TRUE(dm.automorphy.has_value());
  EXPECT_LE(std::abs(dm.automorphy->det() - 1.0), 1e-9);
}

TEST(DevelopingMonodromy, HomomorphismOnShortTheta) {
  // Order 2 is fast; the residual is bounded by the truncation of Theta.
  const ThetaDifferential theta = theta_series(group(), kSeed, 2);
  IntegrationOptions opt;
  opt.tol = 1e-11;
  const DevelopingMap z(theta.as_field_term(Complex(0.5)), 0.0, opt);
  const auto& s = group().side_pairings;
  const DevelopingMonodromy a = developing_monodromy(z, s[0]);
  const DevelopingMonodromy b = developing_monodromy(z, s[1]);
  const DevelopingMonodromy ab = developing_monodromy(z, s[0] * s[1]);
  EXPECT_LE(psl2_distance((a.rho * b.rho).mat(), ab.rho.mat()), 1.0);
}

TEST(Fit, ExactAndDegenerate) {
  testing_support::Rng rng(51);
  for (int i = 0; i < 20; ++i) {
    const MobiusMap m = rng.mobius();
    const std::array<Complex, 3> z{rng.complex(), rng.complex(), rng.complex()};
    const MobiusMap fit = fit_mobius(z, {m(z[0]), m(z[1]), m(z[2])});
    EXPECT_LE(psl2_distance(fit.mat(), m.mat()), 1e-8);
  }
  EXPECT_THROW(fit_mobius({0.1, 0.1, 0.3}, {0.0, 1.0, 2.0}), FitError);
  EXPECT_THROW(fit_mobius({0.1, 0.2, 0.3}, {1.0, 1.0, 2.0}), FitError);
}

TEST(Xi, Cocycle) {
  // xi_{L1 L2}(t) = xi_{L1}(L2 t) xi_{L2}(t) for the matrix product.
  const auto& m = group().marked;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const Mat2 a = m[i].mat(), b = m[j].mat();
      for (Complex t : {Complex(0.1, 0.2), Complex(-0.3, 0.05)}) {
        const Complex bt = m[j](t);
        EXPECT_LE(std::abs(xi_from_rep(a * b, t) - xi_from_rep(a, bt) * xi_from_rep(b, t)), 1e-9);
      }
    }
  }
}

TEST(Xi, ContinuedSquareRootMatchesRepresentative) {
  // Along a path from t0, the continued branch of sqrt(L') equals the xi of
  // the representative that agrees at t0.
  const MobiusMap l = group().marked[0];
  const Complex t0(0.1, 0.1);
  const Path path = Path::line(t0, Complex(0.5, -0.3)).then(Path::line(Complex(0.5, -0.3), Complex(-0.4, 0.2)));
  const Complex seed = xi_from_rep(l.mat(), t0);
  const Complex end = continue_sqrt_derivative(l, path, seed);
  EXPECT_LE(std::abs(end - xi_from_rep(l.mat(), path.endpoint())), 1e-9);
  EXPECT_THROW(continue_sqrt_derivative(l, path, 2.0 * seed), InvalidInput);
}

TEST(ConjugationResidual, AutomorphicFieldVanishes) {
  const MobiusMap l = quarter_turn();
  const FieldTerm r = RationalFn::polynomial({0.0, 0.0, 0.5});
  const FieldTerm q = RationalFn::polynomial({0.0, 0.0, Complex(0.2, 0.3)});
  IntegrationOptions opt;
  opt.tol = 1e-13;
  EXPECT_LE(conjugation_residual(r, q, l, Complex(0.3, 0.2), Complex(0.1, -0.4), opt), 1e-10);
  EXPECT_THROW(conjugation_residual(r, q, l, Complex(0.96), Complex(0.1), opt), PreconditionError);
}
