#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "circleweb/polycurve.hpp"
#include "oracles.hpp"

using namespace circleweb;

namespace {

CurveFamily random_family(FamilyTag tag, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(0.1, 2.0);
  std::uniform_real_distribution<double> unit(0.02, 0.98);
  switch (tag) {
    case FamilyTag::Cubic:
      return CurveFamily::cubic(pos(rng), pos(rng));
    case FamilyTag::Cubic1: {
      const double th = unit(rng) * std::numbers::pi / 4;  // x0 > y0
      return CurveFamily::cubic1(pos(rng), std::cos(th), std::sin(th));
    }
    default: {
      const double th = unit(rng) * std::numbers::pi / 2;
      return CurveFamily::cubic2(pos(rng), std::cos(th), std::sin(th));
    }
  }
}

MoebiusMap random_moebius(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  Mat4 G = Mat4::Zero();
  for (Generator g : all_generators()) G += u(rng) * moebius_generator(g);
  return moebius_exp(G, 1.0);
}

}  // namespace

TEST(FamilyCurve, CubicAtUnitParameters) {
  const RationalCurve c = family_curve(CurveFamily::cubic(1, 1));
  EXPECT_EQ(c[0], Poly1({-1, 0, 1}));
  EXPECT_EQ(c[1], Poly1({0, -1, 0, 1}));
  EXPECT_EQ(c[2], Poly1({0, 1}));
  EXPECT_EQ(c[3], Poly1({0, 0, 1}));
  EXPECT_EQ(c.max_degree(), 3);
}

TEST(FamilyCurve, MatchesHandWrittenCubic) {
  const RationalCurve c = family_curve(CurveFamily::cubic(oracle::kFig1M, oracle::kFig1X0));
  for (double t : {-1.7, -0.2, 0.0, 0.9, 2.4}) {
    const Vec4 expected = oracle::cubic_point(oracle::kFig1M, oracle::kFig1X0, t);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(c[i](t), expected[i], 1e-14);
  }
}

TEST(FamilyCurve, Cubic2UCoefficientsAtThirdFigureParameters) {
  // m (x0^2 t^2 + y0^2 + 1) / 2 with m = 1/2, x0 = y0 = 1/sqrt(2): (3/8, 0, 1/8)
  const RationalCurve c =
      family_curve(CurveFamily::cubic2(oracle::kFig3M, oracle::kFig3X0, oracle::kFig3Y0));
  EXPECT_NEAR(c[3][0], 3.0 / 8, 1e-15);
  EXPECT_EQ(c[3][1], 0.0);
  EXPECT_NEAR(c[3][2], 1.0 / 8, 1e-15);
}

TEST(FamilyCurve, RejectsBadParameters) {
  EXPECT_THROW(family_curve(CurveFamily::cubic(0, 1)), BadParams);
  EXPECT_THROW(family_curve(CurveFamily::cubic(1, -1)), BadParams);
  const double r = 1 / std::sqrt(2.0);
  EXPECT_THROW(family_curve(CurveFamily::cubic1(1, r, r)), BadParams);
  EXPECT_THROW(family_curve(CurveFamily::cubic1(1, 0.5, 0.8660254037844386)), BadParams);
  EXPECT_THROW(family_curve(CurveFamily::cubic1(1, 0.9, 0.3)), BadParams);  // off the circle
  EXPECT_THROW(family_curve(CurveFamily::cubic2(1, 0.6, 0.7)), BadParams);
  try {
    family_curve(CurveFamily::cubic1(1, r, r));
  } catch (const BadParams& e) {
    EXPECT_NE(std::string(e.what()).find("x0 > y0"), std::string::npos);
  }
}

TEST(RationalCurve, RejectsCommonFactorsAndConstants) {
  EXPECT_THROW(RationalCurve({Poly1{1}, Poly1{2}, Poly1{0}, Poly1{3}}), BadCurve);
  const Poly1 f{-0.5, 1};
  EXPECT_THROW(RationalCurve({f * Poly1{1, 1}, f * Poly1{0, 1}, f, f * Poly1{2, 0, 1}}), BadCurve);
  EXPECT_NO_THROW(RationalCurve({Poly1{1, 1}, Poly1{0, 1}, Poly1{1}, Poly1{2, 0, 1}}));
}

TEST(EvalCurve, ProofAnchors) {
  for (double m : {0.4, 1.3})
    for (double x0 : {0.5, 1.8}) {
      const RationalCurve c = family_curve(CurveFamily::cubic(m, x0));
      EXPECT_TRUE(eval_curve(c, 1.0).same_as(HomPoint(0, 0, 1, 1), 1e-14));
      EXPECT_TRUE(eval_curve(c, -1.0).same_as(HomPoint(0, 0, -1, 1), 1e-14));
      EXPECT_TRUE(eval_curve(c, ProjParam::infinity()).same_as(HomPoint(0, 1, 0, 0), 1e-14));
      EXPECT_TRUE(eval_curve(c, 0.0).same_as(HomPoint(1, 0, 0, 0), 1e-14));
    }
}

TEST(EvalCurve, ProjectiveScaleInvariance) {
  const RationalCurve c = family_curve(CurveFamily::cubic(0.7, 1.1));
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 50; ++i) {
    const double t0 = u(rng), t1 = u(rng), lam = u(rng);
    if (std::abs(lam) < 1e-3) continue;
    EXPECT_TRUE(eval_curve(c, {t0, t1}).same_as(eval_curve(c, {lam * t0, lam * t1}), 1e-12));
  }
  EXPECT_THROW(eval_curve(c, {0, 0}), Error);
}

TEST(CurveTangent, NormalizationAnchors) {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int i = 0; i < 20; ++i) {
    const double m = u(rng), x0 = u(rng);
    const RationalCurve c = family_curve(CurveFamily::cubic(m, x0));
    // Tangent line at Gamma(inf) meets Y = 0 at [1:0:0:x0].
    const Vec4 p = eval_curve(c, ProjParam::infinity()).coords();
    const Vec4 d = curve_tangent(c, ProjParam::infinity()).coords();
    const Vec4 meet = d[1] * p - p[1] * d;
    EXPECT_TRUE(HomPoint(meet).same_as(HomPoint(1, 0, 0, x0), 1e-10));
    // Tangent line at Gamma(0) meets X = 0 at [0:-1:m x0:0].
    const Vec4 q = eval_curve(c, 0.0).coords();
    const Vec4 e = curve_tangent(c, ProjParam::affine(0.0)).coords();
    const Vec4 meet0 = e[0] * q - q[0] * e;
    EXPECT_TRUE(HomPoint(meet0).same_as(HomPoint(0, -1, m * x0, 0), 1e-10));
  }
}

TEST(CurveTangent, LineIsItsOwnTangent) {
  const RationalCurve line({Poly1{1, 2}, Poly1{0, 1}, Poly1{3}, Poly1{2, -1}});
  Eigen::Matrix<double, 4, 3> span;
  span.col(0) = line.coefficient(0);
  span.col(1) = line.coefficient(1);
  for (double t : {-4.0, 0.0, 0.5, 5.0}) {
    span.col(2) = curve_tangent(line, ProjParam::affine(t)).coords();
    Eigen::JacobiSVD<Eigen::Matrix<double, 4, 3>> svd(span);
    EXPECT_LE(svd.singularValues()[2], 1e-14 * svd.singularValues()[0]) << t;
  }
}

TEST(Ideal, ComposedGeneratorsVanishForRandomParameters) {
  std::mt19937_64 rng(59);
  for (FamilyTag tag : {FamilyTag::Cubic, FamilyTag::Cubic1, FamilyTag::Cubic2})
    for (int i = 0; i < 50; ++i) {
      const CurveFamily f = random_family(tag, rng);
      const RationalCurve c = family_curve(f);
      const auto gens = ideal_generators(f);
      ASSERT_EQ(gens.size(), 3u);
      for (const auto& g : gens) {
        EXPECT_LE(ideal_residual(g, c), 1e-10) << to_string(tag) << " " << g.label;
        EXPECT_TRUE(g.q.isApprox(g.q.transpose()));
      }
    }
}

TEST(Ideal, GeneratorsAreNotTrivial) {
  // Each generator is a nonzero form, and a form outside the ideal does not vanish.
  const CurveFamily f = CurveFamily::cubic(0.8, 1.2);
  const RationalCurve c = family_curve(f);
  for (const auto& g : ideal_generators(f)) EXPECT_GT(g.q.cwiseAbs().maxCoeff(), 0.1);
  const QuadraticForm xx = QuadraticForm::from_terms({{0, 0, 1.0}});
  const Poly1 sq = compose_ideal(xx, c);
  const Poly1 expected = 0.8 * 0.8 * Poly1{1, 0, -2, 0, 1};  // m^2 (t^2 - 1)^2
  ASSERT_EQ(sq.degree(), 4);
  for (int k = 0; k <= 4; ++k) EXPECT_NEAR(sq[k], expected[k], 1e-14);
  EXPECT_GT(ideal_residual(xx, c), 0.1);
}

TEST(Ideal, CustomCurvesHaveNoTable) {
  const CurveFamily f = CurveFamily::custom({{{1, 1}, {0, 1}, {1}, {2, 0, 1}}});
  EXPECT_THROW(ideal_generators(f), NotAvailable);
}

TEST(TransformCurve, IdentityAndBoostAxis) {
  const RationalCurve c = family_curve(CurveFamily::cubic(0.6, 0.9));
  const RationalCurve same = transform_curve(MoebiusMap(), c);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(same[i], c[i]);
  const RationalCurve boosted = transform_curve(moebius_exp(Generator::Bz, 0.8), c);
  EXPECT_TRUE(eval_curve(boosted, 1.0).same_as(HomPoint(0, 0, 1, 1), 1e-12));
  EXPECT_TRUE(eval_curve(boosted, -1.0).same_as(HomPoint(0, 0, -1, 1), 1e-12));
}

TEST(TransformCurve, CommutesWithEvaluation) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-3, 3);
  const RationalCurve c = family_curve(CurveFamily::cubic(0.6, 0.9));
  for (int k = 0; k < 5; ++k) {
    const MoebiusMap M = random_moebius(rng);
    const RationalCurve mc = transform_curve(M, c);
    for (int i = 0; i < 20; ++i) {
      const double t = u(rng);
      EXPECT_TRUE(eval_curve(mc, t).same_as(M.apply(eval_curve(c, t)), 1e-10));
    }
  }
}

TEST(TransformForm, PullsBackGenerators) {
  std::mt19937_64 rng(67);
  const CurveFamily f = CurveFamily::cubic1(0.9, std::cos(0.4), std::sin(0.4));
  const RationalCurve c = family_curve(f);
  for (int k = 0; k < 5; ++k) {
    const MoebiusMap M = random_moebius(rng);
    const RationalCurve mc = transform_curve(M, c);
    for (const auto& g : ideal_generators(f))
      EXPECT_LE(ideal_residual(transform_form(M, g), mc), 1e-9);
  }
}

TEST(TangencyPoly, Examples) {
  const double m = 0.7, x0 = 1.3;
  const RationalCurve c = family_curve(CurveFamily::cubic(m, x0));
  // North pole: Z - U = m x0 t - m x0 t^2.
  const Poly1 north = tangency_poly(c, {0, 0, 1});
  ASSERT_EQ(north.degree(), 2);
  EXPECT_NEAR(north[0], 0.0, 1e-15);
  EXPECT_NEAR(north[1], m * x0, 1e-15);
  EXPECT_NEAR(north[2], -m * x0, 1e-15);
  // y = 0 kills the cubic coefficient.
  const SpherePoint on_y0 = stereo_lift({0.6, 0.0});
  EXPECT_LT(tangency_poly(c, on_y0).degree(), 3);
  // x = 0 makes t = 0 a root.
  const SpherePoint on_x0 = stereo_lift({0.0, -0.4});
  EXPECT_NEAR(tangency_poly(c, on_x0)(0.0), 0.0, 1e-15);
}

TEST(TangencyPoly, RootsGiveCirclesThroughThePoint) {
  const RationalCurve c = family_curve(CurveFamily::cubic(oracle::kFig1M, oracle::kFig1X0));
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-2, 2);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const PlanarPoint p{u(rng), u(rng)};
    const Poly1 tp = tangency_poly(c, stereo_lift(p));
    for (double t : real_roots(tp)) {
      const HomPoint pole = eval_curve(c, t);
      if (pair(pole, pole) <= 1e-6 * pole.coords().squaredNorm()) continue;
      EXPECT_LE(circle_from_polar(pole).residual(p), 1e-8);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(TangencyPoly, IdenticallyZeroForDegenerateInput) {
  // A planar curve inside the tangent plane at the north pole (Z = U).
  const RationalCurve flat({Poly1{0, 1}, Poly1{0, 0, 1}, Poly1{1, 0, 0, 1}, Poly1{1, 0, 0, 1}});
  EXPECT_THROW(tangency_poly(flat, {0, 0, 1}), IdenticallyZero);
}

TEST(Cubic, NoTrisecants) {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u(-3, 3);
  const RationalCurve c = family_curve(CurveFamily::cubic(oracle::kFig1M, oracle::kFig1X0));
  for (int i = 0; i < 100; ++i) {
    const double t1 = u(rng), t2 = u(rng);
    if (std::abs(t1 - t2) < 1e-2) continue;
    const Vec4 a = eval_curve(c, t1).coords(), b = eval_curve(c, t2).coords();
    // Minor j of [a; b; Gamma(t)] is a cubic in t vanishing at t1, t2; the
    // line meets the curve again only if the four cofactor lines share a root.
    Eigen::Matrix<double, 4, 2> lines;
    for (int j = 0; j < 4; ++j) {
      std::array<int, 3> cols{};
      for (int k = 0, r = 0; k < 4; ++k)
        if (k != j) cols[r++] = k;
      Poly1 minor;
      for (int r = 0; r < 3; ++r) {
        const int c0 = cols[(r + 1) % 3], c1 = cols[(r + 2) % 3];
        minor = minor + (a[c0] * b[c1] - a[c1] * b[c0]) * c[cols[r]];
      }
      const auto [q, rem] = divmod(minor, Poly1{t1 * t2, -(t1 + t2), 1});
      EXPECT_LE(rem.max_abs(), 1e-9 * std::max(1.0, minor.max_abs()));
      lines(j, 0) = q[0];
      lines(j, 1) = q[1];
    }
    Eigen::JacobiSVD<Eigen::Matrix<double, 4, 2>> svd(lines);
    EXPECT_GT(svd.singularValues()[1], 1e-6 * svd.singularValues()[0]) << t1 << " " << t2;
  }
}
