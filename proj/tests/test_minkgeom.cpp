#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "circleweb/minkgeom.hpp"
#include "oracles.hpp"

using namespace circleweb;

namespace {

Vec4 random_vec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2, 2);
  return {u(rng), u(rng), u(rng), u(rng)};
}

Mat4 random_algebra_element(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  Mat4 G = Mat4::Zero();
  for (Generator g : all_generators()) G += u(rng) * moebius_generator(g);
  return G;
}

}  // namespace

TEST(HomPoint, RejectsZeroAndNormalizes) {
  EXPECT_THROW(HomPoint(0, 0, 0, 0), Error);
  const HomPoint p = HomPoint(2, -8, 4, 1).normalized();
  EXPECT_DOUBLE_EQ(p.y(), 1.0);
  EXPECT_DOUBLE_EQ(p.x(), -0.25);
  EXPECT_TRUE(HomPoint(1, 2, 3, 4).same_as(HomPoint(-2, -4, -6, -8)));
}

TEST(Pair, Examples) {
  EXPECT_EQ(pair(HomPoint(0, 0, 1, 1), HomPoint(0, 0, 1, 1)), 0.0);
  EXPECT_EQ(pair(HomPoint(0, 0, 1, 1), HomPoint(0, 0, -1, 1)), -2.0);
  for (double m : {0.3, 1.0, 2.5})
    for (double x0 : {0.1, 0.8})
      EXPECT_DOUBLE_EQ(pair(HomPoint(0, 1, 0, 0), HomPoint(0, -1, m * x0, 0)), -1.0);
}

TEST(Pair, SymmetricBilinear) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Vec4 a = random_vec(rng), b = random_vec(rng), c = random_vec(rng);
    EXPECT_NEAR(pair(HomPoint(a), HomPoint(b)), pair(HomPoint(b), HomPoint(a)), 1e-14);
    EXPECT_NEAR(pair(HomPoint(2 * a + c), HomPoint(b)),
                2 * pair(HomPoint(a), HomPoint(b)) + pair(HomPoint(c), HomPoint(b)), 1e-12);
  }
}

TEST(Stereo, Examples) {
  const SpherePoint n = stereo_lift({0, 0});
  EXPECT_EQ(n.x, 0.0);
  EXPECT_EQ(n.y, 0.0);
  EXPECT_EQ(n.z, 1.0);
  const SpherePoint e = stereo_lift({1, 0});
  EXPECT_DOUBLE_EQ(e.x, 1.0);
  EXPECT_DOUBLE_EQ(e.z, 0.0);
  const PlanarPoint p = stereo_project({1, 0, 0});
  EXPECT_DOUBLE_EQ(p.x, 1.0);
  EXPECT_DOUBLE_EQ(p.y, 0.0);
  EXPECT_EQ(stereo_project({0, 0, 1}).x, 0.0);
  EXPECT_THROW(stereo_project({0, 0, -1}), PoleError);
}

TEST(Stereo, RoundTripAndOnSphere) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 200; ++i) {
    const PlanarPoint p{u(rng), u(rng)};
    const SpherePoint q = stereo_lift(p);
    EXPECT_LE(std::abs(q.sphere_residual()), 1e-12);
    const PlanarPoint back = stereo_project(q);
    EXPECT_NEAR(back.x, p.x, 1e-12 * std::max(1.0, std::abs(p.x)));
    EXPECT_NEAR(back.y, p.y, 1e-12 * std::max(1.0, std::abs(p.y)));
  }
}

TEST(TangentPlane, ExamplesAndTangency) {
  EXPECT_EQ(tangent_plane({0, 0, 1}).coeffs(), Vec4(0, 0, 1, -1));
  EXPECT_EQ(tangent_plane({1, 0, 0}).coeffs(), Vec4(1, 0, 0, -1));
  EXPECT_EQ(plane_tangency_residual(Plane(0, 0, 1, -1)), 0.0);
  EXPECT_EQ(plane_tangency_residual(Plane(0, 0, 1, 0)), 1.0);
  EXPECT_EQ(plane_tangency_residual(Plane(0, 0, 0, 1)), -1.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 100; ++i) {
    const SpherePoint q = stereo_lift({u(rng), u(rng)});
    EXPECT_LE(std::abs(plane_tangency_residual(tangent_plane(q))), 1e-12);
    EXPECT_LE(std::abs(tangent_plane(q).incidence(q.homogeneous())), 1e-12);
  }
}

TEST(CircleFromPolar, Examples) {
  const PlanarCircle line = circle_from_polar(HomPoint(1, 0, 0, 0));
  EXPECT_TRUE(line.is_line());
  EXPECT_EQ(line.A, 1.0);
  EXPECT_EQ(line.B, 0.0);
  EXPECT_EQ(line.C, 0.0);
  const PlanarCircle unit = circle_from_polar(HomPoint(0, 0, 1, 0));
  EXPECT_NEAR(unit.C / unit.eps, -1.0, 1e-15);
  EXPECT_EQ(unit.A, 0.0);
  EXPECT_NEAR(unit.radius(), 1.0, 1e-15);
  EXPECT_THROW(circle_from_polar(HomPoint(0, 0, 0, 1)), ImaginaryCircle);
  EXPECT_THROW(circle_from_polar(HomPoint(0, 0, 1, 1)), ImaginaryCircle);
}

TEST(CircleFromPolar, LocusLiesInPolarPlaneAndScaleInvariant) {
  std::mt19937_64 rng(7);
  int checked = 0;
  while (checked < 50) {
    const Vec4 v = random_vec(rng);
    const HomPoint p(v);
    if (pair(p, p) <= 0.1 * v.squaredNorm()) continue;
    ++checked;
    const PlanarCircle c = circle_from_polar(p);
    ASSERT_TRUE(c.has_real_locus());
    const PlanarCircle c2 = circle_from_polar(HomPoint(2 * v));
    EXPECT_TRUE(proportional(c.as_vector(), c2.as_vector(), 1e-14));
    EXPECT_TRUE(polar_of_circle(c).same_as(p, 1e-12));
    const Vec4 pn = v.normalized();
    for (int k = 0; k < 8; ++k) {
      PlanarPoint q;
      if (c.is_line()) {
        const double n2 = c.A * c.A + c.B * c.B;
        q = {-c.C * c.A / n2 - c.B * (k - 4), -c.C * c.B / n2 + c.A * (k - 4)};
      } else {
        const PlanarPoint ctr = c.center();
        const double a = 2 * std::numbers::pi * k / 8;
        q = {ctr.x + c.radius() * std::cos(a), ctr.y + c.radius() * std::sin(a)};
      }
      const SpherePoint s = stereo_lift(q);
      EXPECT_LE(std::abs(pair(s.homogeneous(), HomPoint(pn))) / std::sqrt(2.0), 1e-10);
    }
  }
}

TEST(Generators, MatchVectorFieldsAndAlgebra) {
  const Mat4 Rz = moebius_generator(Generator::Rz);
  // R_z = Y d_X - X d_Y: dX/ds = Y, dY/ds = -X
  EXPECT_EQ(Rz(0, 1), 1.0);
  EXPECT_EQ(Rz(1, 0), -1.0);
  EXPECT_EQ(Rz.cwiseAbs().sum(), 2.0);
  const Mat4 Bz = moebius_generator(Generator::Bz);
  // B_z = U d_Z + Z d_U
  EXPECT_EQ(Bz(2, 3), 1.0);
  EXPECT_EQ(Bz(3, 2), 1.0);
  EXPECT_EQ(Bz.cwiseAbs().sum(), 2.0);
  for (Generator g : all_generators()) {
    EXPECT_EQ(so31_defect(moebius_generator(g)), 0.0) << to_string(g);
    EXPECT_EQ(generator_from_string(to_string(g)), g);
  }
}

TEST(MoebiusExp, Examples) {
  for (double s : {-1.3, 0.4, 2.0}) {
    const MoebiusMap M = moebius_exp(Generator::Bz, s);
    EXPECT_TRUE(M.apply(HomPoint(0, 0, 1, 1)).same_as(HomPoint(0, 0, 1, 1), 1e-14));
    EXPECT_TRUE(M.apply(HomPoint(0, 0, -1, 1)).same_as(HomPoint(0, 0, -1, 1), 1e-14));
  }
  const MoebiusMap R = moebius_exp(Generator::Rz, std::numbers::pi / 2);
  EXPECT_TRUE(R.apply(HomPoint(1, 0, 0, 1)).same_as(HomPoint(0, -1, 0, 1), 1e-14));
}

TEST(MoebiusExp, GroupPropertyAndAgreementOfRoutes) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> us(-2, 2);
  const Mat4 eta = minkowski_metric();
  for (int i = 0; i < 30; ++i) {
    const Mat4 G = random_algebra_element(rng);
    const double s = us(rng);
    const MoebiusMap M = moebius_exp(G, s);
    EXPECT_LE((M.matrix().transpose() * eta * M.matrix() - eta).cwiseAbs().maxCoeff(), 1e-10);
    // exp(sG) exp(-sG) = I
    EXPECT_LE((M.matrix() * moebius_exp(G, -s).matrix() - Mat4::Identity()).cwiseAbs().maxCoeff(), 1e-10);
  }
  for (Generator g : all_generators()) {
    const double s = us(rng);
    const Mat4 closed = moebius_exp(g, s).matrix();
    const Mat4 series = detail::general_exp(s * moebius_generator(g));
    EXPECT_LE((closed - series).cwiseAbs().maxCoeff(), 1e-12) << to_string(g);
  }
  Mat4 bad = Mat4::Zero();
  bad(0, 0) = 1;
  EXPECT_THROW(moebius_exp(bad, 1.0), NotInAlgebra);
}

TEST(MoebiusMap, ScalesPairingByLambda) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    const Mat4 m = 1.7 * moebius_exp(random_algebra_element(rng), 1.0).matrix();
    const MoebiusMap M(m);
    EXPECT_NEAR(M.lambda(), 1.7 * 1.7, 1e-10);
    const HomPoint a(random_vec(rng)), b(random_vec(rng));
    const double lhs = pair(M.apply(a), M.apply(b)), rhs = M.lambda() * pair(a, b);
    EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::max(1.0, std::abs(rhs)));
  }
  Mat4 flip = Mat4::Identity();
  flip(0, 0) = 2;
  EXPECT_THROW(MoebiusMap{flip}, Error);
}

TEST(Intersect, Examples) {
  const PlanarCircle unit{1, 0, 0, -1};
  const PlanarCircle axis{0, 1, 0, 0};
  const auto a = circle_circle_intersect(unit, axis);
  ASSERT_EQ(a.points.size(), 2u);
  EXPECT_FALSE(a.tangent);
  const double ys[2] = {a.points[0].y, a.points[1].y};
  EXPECT_NEAR(std::min(ys[0], ys[1]), -1.0, 1e-15);
  EXPECT_NEAR(std::max(ys[0], ys[1]), 1.0, 1e-15);
  EXPECT_NEAR(a.points[0].x, 0.0, 1e-15);

  EXPECT_TRUE(circle_circle_intersect(unit, {1, 0, 0, -4}).points.empty());

  const auto t = circle_circle_intersect(unit, {1, -4, 0, 3});  // (x-2)^2 + y^2 = 1
  ASSERT_EQ(t.points.size(), 1u);
  EXPECT_TRUE(t.tangent);
  EXPECT_NEAR(t.points[0].x, 1.0, 1e-12);
  EXPECT_NEAR(t.points[0].y, 0.0, 1e-12);

  EXPECT_THROW(circle_circle_intersect(unit, {2, 0, 0, -2}), CoincidentCircles);
}

TEST(Intersect, PointsLieOnBothCircles) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-2, 2);
  int seen = 0;
  for (int i = 0; i < 300; ++i) {
    const PlanarCircle c1{u(rng), u(rng), u(rng), u(rng)}, c2{u(rng), u(rng), u(rng), u(rng)};
    if (!c1.has_real_locus() || !c2.has_real_locus()) continue;
    for (const auto& p : circle_circle_intersect(c1, c2).points) {
      EXPECT_LE(c1.residual(p), 1e-10);
      EXPECT_LE(c2.residual(p), 1e-10);
      ++seen;
    }
  }
  EXPECT_GT(seen, 50);
}
