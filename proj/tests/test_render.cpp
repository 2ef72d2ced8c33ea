#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "circleweb/render.hpp"
#include "oracles.hpp"
#include "svg_check.hpp"

using namespace circleweb;

namespace {

RationalCurve fig(int which) {
  switch (which) {
    case 1: return family_curve(CurveFamily::cubic(oracle::kFig1M, oracle::kFig1X0));
    case 2: return family_curve(CurveFamily::cubic1(oracle::kFig2M, oracle::kFig2X0, oracle::kFig2Y0));
    default: return family_curve(CurveFamily::cubic2(oracle::kFig3M, oracle::kFig3X0, oracle::kFig3Y0));
  }
}

double seg_distance(const PlanarPoint& p, const std::array<PlanarPoint, 2>& s) {
  const double dx = s[1].x - s[0].x, dy = s[1].y - s[0].y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((p.x - s[0].x) * dx + (p.y - s[0].y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - s[0].x - t * dx, p.y - s[0].y - t * dy);
}

double nearest(const PlanarPoint& p, const std::vector<std::array<PlanarPoint, 2>>& segs) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : segs) best = std::min(best, seg_distance(p, s));
  return best;
}

}  // namespace

TEST(Render, FiguresAreWellFormedAndIncident) {
  for (int f = 1; f <= 3; ++f) {
    RenderSpec spec;
    spec.boundary = true;
    spec.unit_circle = true;
    spec.boundary_grid = 80;
    const RenderResult r = render_web(fig(f), spec);
    std::string why;
    EXPECT_TRUE(svgcheck::well_formed(r.svg, &why)) << "figure " << f << ": " << why;
    const auto paths = svgcheck::parse_paths(r.svg);
    ASSERT_EQ(paths.size(), r.drawn.size());
    EXPECT_EQ(static_cast<int>(r.drawn.size()) + r.imaginary + r.outside, 3 * spec.per_band);
    for (const auto& p : paths) {
      const HomPoint polar(p.polar);
      const double norm = p.polar.norm();
      for (const PlanarPoint& q : svgcheck::samples_of(p, spec.view)) {
        const SpherePoint s = stereo_lift(q);
        EXPECT_LE(std::abs(pair(s.homogeneous(), polar)) / norm, 1e-8) << "figure " << f;
      }
    }
  }
}

TEST(Render, Deterministic) {
  RenderSpec spec;
  spec.boundary = true;
  spec.boundary_grid = 60;
  EXPECT_EQ(render_web(fig(1), spec).svg, render_web(fig(1), spec).svg);
}

TEST(Render, InfiniteParameterDrawsTheXAxis) {
  RenderSpec spec;
  spec.bands[0].values = {std::numeric_limits<double>::infinity()};
  spec.bands[1].values = {0.5};
  spec.bands[2].values = {-0.5};
  const RenderResult r = render_web(fig(1), spec);
  ASSERT_FALSE(r.drawn.empty());
  const DrawnCircle& axis = r.drawn.front();
  EXPECT_TRUE(std::isinf(axis.u));
  EXPECT_TRUE(axis.circle.is_line());
  EXPECT_NEAR(axis.circle.A, 0.0, 1e-15);
  EXPECT_NEAR(axis.circle.C, 0.0, 1e-15);
  const auto paths = svgcheck::parse_paths(r.svg);
  ASSERT_FALSE(paths.front().arc);
  const double y = spec.view.py(0.0);
  EXPECT_NEAR(paths.front().nums[1], y, 1e-9);
  EXPECT_NEAR(paths.front().nums[3], y, 1e-9);
  EXPECT_NEAR(std::abs(paths.front().nums[2] - paths.front().nums[0]), spec.view.width, 1e-9);
}

TEST(Render, NothingToDraw) {
  RenderSpec spec;
  spec.per_band = 0;
  EXPECT_THROW(render_web(fig(1), spec), EmptyPicture);
  RenderSpec off;
  off.view = {10, 11, 10, 11, 100, 100};
  off.bands[0].values = {0.5};
  off.bands[1].values = {-0.5};
  off.bands[2].values = {2.0};
  EXPECT_THROW(render_web(fig(1), off), EmptyPicture);
}

TEST(Render, RejectsBadSpec) {
  RenderSpec spec;
  spec.view.width = 0;
  EXPECT_THROW(render_web(fig(1), spec), Error);
  RenderSpec flat;
  flat.view.x_max = flat.view.x_min;
  EXPECT_THROW(render_web(fig(1), flat), Error);
}

TEST(Boundary, ContourFollowsTheAxes) {
  RenderSpec spec;
  spec.boundary_grid = 100;
  const double cell = (spec.view.x_max - spec.view.x_min) / spec.boundary_grid;
  const BoundaryOverlay ov = render_boundary(fig(1), spec);
  ASSERT_FALSE(ov.tangency.empty());
  int near_x = 0, near_y = 0;
  for (double s = -1.9; s < 1.9; s += 0.05) {
    // Only where the web is regular on both sides can the contour pass.
    if (leaf_tangency(fig(1), {s, 2 * cell}) && leaf_tangency(fig(1), {s, -2 * cell})) {
      EXPECT_LE(nearest({s, 0.0}, ov.tangency), cell) << "y=0 at " << s;
      ++near_y;
    }
    if (leaf_tangency(fig(1), {2 * cell, s}) && leaf_tangency(fig(1), {-2 * cell, s})) {
      EXPECT_LE(nearest({0.0, s}, ov.tangency), cell) << "x=0 at " << s;
      ++near_x;
    }
  }
  EXPECT_GT(near_x, 5);
  EXPECT_GT(near_y, 5);
}

TEST(Boundary, FoldSeparatesRegularFromDeficient) {
  RenderSpec spec;
  spec.boundary_grid = 100;
  const BoundaryOverlay ov = render_boundary(fig(1), spec);
  ASSERT_FALSE(ov.fold.empty());
  for (std::size_t k = 0; k < ov.fold.size(); k += 37) {
    const PlanarPoint m{(ov.fold[k][0].x + ov.fold[k][1].x) / 2, (ov.fold[k][0].y + ov.fold[k][1].y) / 2};
    const double scale = std::abs(discriminant_sign(fig(1), {m.x + 0.04, m.y})) +
                         std::abs(discriminant_sign(fig(1), {m.x, m.y + 0.04})) + 1e-3;
    EXPECT_LE(std::abs(discriminant_sign(fig(1), m)), scale);
  }
}

TEST(Boundary, RegularCapHasNoContour) {
  RenderSpec spec;
  spec.view = {-0.35, -0.25, 0.15, 0.25, 100, 100};
  spec.boundary_grid = 20;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j)
      ASSERT_EQ(classify_point(fig(1), {-0.35 + 0.005 * i, 0.15 + 0.005 * j}), PointClass::Regular);
  const BoundaryOverlay ov = render_boundary(fig(1), spec);
  EXPECT_EQ(ov.size(), 0u);
}

TEST(Boundary, StableUnderRefinement) {
  RenderSpec coarse;
  coarse.boundary_grid = 60;
  RenderSpec fine = coarse;
  fine.boundary_grid = 120;
  const double cell = (coarse.view.x_max - coarse.view.x_min) / coarse.boundary_grid;
  const BoundaryOverlay a = render_boundary(fig(1), coarse), b = render_boundary(fig(1), fine);
  for (auto [from, to] : {std::pair{&b.fold, &a.fold}, std::pair{&b.tangency, &a.tangency}}) {
    ASSERT_FALSE(to->empty());
    int far = 0;
    for (const auto& s : *from) {
      const PlanarPoint m{(s[0].x + s[1].x) / 2, (s[0].y + s[1].y) / 2};
      if (nearest(m, *to) > cell) ++far;
    }
    EXPECT_EQ(far, 0);
  }
}

TEST(Boundary, OverlayIsEmbedded) {
  RenderSpec spec;
  spec.boundary = true;
  spec.boundary_grid = 40;
  const RenderResult r = render_web(fig(1), spec);
  EXPECT_GT(r.boundary_segments, 0);
  EXPECT_NE(r.svg.find("<g id=\"boundary\""), std::string::npos);
  EXPECT_NE(r.svg.find("class=\"tangency\""), std::string::npos);
}
