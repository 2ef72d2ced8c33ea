#pragma once

// SVG pictures of a circle web in the stereographic plane.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "circleweb/minkgeom.hpp"
#include "circleweb/polycurve.hpp"
#include "circleweb/webcore.hpp"

namespace circleweb {

struct Viewport {
  double x_min = -2, x_max = 2, y_min = -2, y_max = 2;
  int width = 800, height = 800;

  double px(double x) const { return (x - x_min) / (x_max - x_min) * width; }
  double py(double y) const { return (y_max - y) / (y_max - y_min) * height; }
  double plane_x(double px) const { return x_min + px / width * (x_max - x_min); }
  double plane_y(double py) const { return y_max - py / height * (y_max - y_min); }
};

/// Parameters of one foliation: an explicit list (may hold +inf), or
/// `count` values spread over [lo, hi]. With neither, the band is derived
/// from the roots at the probe point.
struct BandSamples {
  std::vector<double> values;
  int count = 0;
  std::optional<std::pair<double, double>> range;
};

struct RenderSpec {
  Viewport view;
  std::array<BandSamples, 3> bands;
  int per_band = 20;  // for derived bands
  PlanarPoint probe{-0.3, 0.2};
  double stroke_width = 1.2;
  std::array<std::string, 3> colors{"#c0392b", "#2471a3", "#229954"};
  std::string boundary_color = "#111111";
  bool boundary = false;
  bool unit_circle = false;
  int boundary_grid = 160;

  void validate() const {
    if (view.width <= 0 || view.height <= 0) throw Error("render: pixel size must be positive");
    if (!(view.x_max > view.x_min) || !(view.y_max > view.y_min))
      throw Error("render: viewport window is empty");
    if (boundary_grid < 2) throw Error("render: boundary grid needs at least 2 cells");
  }
};

struct DrawnCircle {
  int band = 0;
  double u = 0.0;
  HomPoint polar{1, 0, 0, 0};
  PlanarCircle circle;
};

struct RenderResult {
  std::string svg;
  std::vector<DrawnCircle> drawn;
  int imaginary = 0;  // polar point on or inside the sphere
  int outside = 0;    // real circle missing the viewport
  int boundary_segments = 0;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline double angle_of(double t) { return std::isinf(t) ? std::numbers::pi : 2.0 * std::atan(t); }
inline double param_of(double theta) {
  if (std::abs(theta - std::numbers::pi) < 1e-15) return std::numeric_limits<double>::infinity();
  return std::tan(theta / 2.0);
}

// Clip the infinite line a x + b y + c = 0 to the viewport window.
inline std::optional<std::array<PlanarPoint, 2>> clip_line(double a, double b, double c,
                                                           const Viewport& v) {
  const double n = std::hypot(a, b);
  const PlanarPoint foot{-c * a / (n * n), -c * b / (n * n)};
  const PlanarPoint dir{-b / n, a / n};
  double t0 = -std::numeric_limits<double>::infinity(), t1 = -t0;
  const std::array<std::array<double, 3>, 2> slabs{
      {{foot.x, dir.x, 0}, {foot.y, dir.y, 1}}};
  for (const auto& s : slabs) {
    const double lo = s[2] == 0 ? v.x_min : v.y_min, hi = s[2] == 0 ? v.x_max : v.y_max;
    if (s[1] == 0.0) {
      if (s[0] < lo || s[0] > hi) return std::nullopt;
      continue;
    }
    double ta = (lo - s[0]) / s[1], tb = (hi - s[0]) / s[1];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  if (!(t1 > t0)) return std::nullopt;
  return std::array<PlanarPoint, 2>{PlanarPoint{foot.x + t0 * dir.x, foot.y + t0 * dir.y},
                                    PlanarPoint{foot.x + t1 * dir.x, foot.y + t1 * dir.y}};
}

inline bool circle_meets_window(const PlanarPoint& c, double r, const Viewport& v) {
  const double nx = std::clamp(c.x, v.x_min, v.x_max), ny = std::clamp(c.y, v.y_min, v.y_max);
  const double near = std::hypot(c.x - nx, c.y - ny);
  const double fx = std::max(std::abs(c.x - v.x_min), std::abs(c.x - v.x_max));
  const double fy = std::max(std::abs(c.y - v.y_min), std::abs(c.y - v.y_max));
  return near <= r && std::hypot(fx, fy) >= r;
}

// The probe point, or else the grid node nearest to it with three real roots.
inline WebPointResult find_probe(const RationalCurve& c, const RenderSpec& spec) {
  auto res = solve_web_point(c, spec.probe);
  if (res.point) return res;
  const Viewport& v = spec.view;
  constexpr int n = 40;
  std::vector<PlanarPoint> nodes;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      nodes.push_back({v.x_min + (v.x_max - v.x_min) * i / n, v.y_min + (v.y_max - v.y_min) * j / n});
  auto dist = [&](const PlanarPoint& p) { return std::hypot(p.x - spec.probe.x, p.y - spec.probe.y); };
  std::stable_sort(nodes.begin(), nodes.end(),
                   [&](const PlanarPoint& a, const PlanarPoint& b) { return dist(a) < dist(b); });
  for (const auto& p : nodes) {
    res = solve_web_point(c, p);
    if (res.cls == PointClass::Regular) return res;
  }
  return res;
}

// Parameter values of each band, in band order.
inline std::array<std::vector<double>, 3> band_values(const RationalCurve& c,
                                                      const RenderSpec& spec) {
  std::array<std::vector<double>, 3> out;
  bool need_probe = false;
  for (int b = 0; b < 3; ++b) {
    const BandSamples& s = spec.bands[b];
    if (!s.values.empty()) {
      out[b] = s.values;
    } else if (s.range && s.count > 0) {
      const auto [lo, hi] = *s.range;
      for (int k = 0; k < s.count; ++k)
        out[b].push_back(s.count == 1 ? lo : lo + (hi - lo) * k / (s.count - 1));
    } else if (!s.range && s.count == 0) {
      need_probe = true;
    }
  }
  if (!need_probe || spec.per_band <= 0) return out;

  const auto res = find_probe(c, spec);
  if (!res.point)
    throw Error("render: no point with three real roots near the probe (" +
                fmt_short(spec.probe.x) + ", " + fmt_short(spec.probe.y) +
                "); give explicit bands");
  std::array<double, 3> th{};
  for (int i = 0; i < 3; ++i) th[i] = angle_of(res.point->roots[i]);
  std::sort(th.begin(), th.end());
  const double two_pi = 2 * std::numbers::pi;
  for (int b = 0; b < 3; ++b) {
    const BandSamples& s = spec.bands[b];
    if (!s.values.empty() || s.range || s.count != 0) continue;
    const double prev = b == 0 ? th[2] - two_pi : th[b - 1];
    const double next = b == 2 ? th[0] + two_pi : th[b + 1];
    const double lo = 0.5 * (prev + th[b]), hi = 0.5 * (th[b] + next);
    for (int k = 0; k < spec.per_band; ++k) {
      double theta = lo + (hi - lo) * (k + 0.5) / spec.per_band;
      if (theta > std::numbers::pi) theta -= two_pi;
      if (theta <= -std::numbers::pi) theta += two_pi;
      out[b].push_back(param_of(theta));
    }
  }
  return out;
}

inline ProjParam param_from_value(double u) {
  return std::isinf(u) ? ProjParam::infinity() : ProjParam::affine(u);
}

// Zero set of f over the viewport grid as line segments in plane
// coordinates. Cells with a missing corner value are skipped.
inline std::vector<std::array<PlanarPoint, 2>> marching_squares(
    const std::function<std::optional<double>(const PlanarPoint&)>& f, const Viewport& v, int n) {
  std::vector<std::vector<std::optional<double>>> val(n + 1, std::vector<std::optional<double>>(n + 1));
  auto node = [&](int i, int j) {
    return PlanarPoint{v.x_min + (v.x_max - v.x_min) * i / n, v.y_min + (v.y_max - v.y_min) * j / n};
  };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      auto r = f(node(i, j));
      if (r && std::isfinite(*r)) val[i][j] = r;
    }
  std::vector<std::array<PlanarPoint, 2>> segs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::array<std::pair<int, int>, 4> corner{{{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
      std::array<double, 4> z{};
      bool ok = true;
      for (int k = 0; k < 4; ++k) {
        const auto& o = val[corner[k].first][corner[k].second];
        if (!o) {
          ok = false;
          break;
        }
        z[k] = *o;
      }
      if (!ok) continue;
      std::vector<PlanarPoint> cross;
      for (int k = 0; k < 4; ++k) {
        const double a = z[k], b = z[(k + 1) % 4];
        if ((a > 0) == (b > 0)) continue;
        const double s = a / (a - b);
        const PlanarPoint pa = node(corner[k].first, corner[k].second);
        const PlanarPoint pb = node(corner[(k + 1) % 4].first, corner[(k + 1) % 4].second);
        cross.push_back({pa.x + s * (pb.x - pa.x), pa.y + s * (pb.y - pa.y)});
      }
      if (cross.size() == 2) {
        segs.push_back({cross[0], cross[1]});
      } else if (cross.size() == 4) {
        // Saddle: pair edges according to the sign of the cell average.
        const bool center_pos = (z[0] + z[1] + z[2] + z[3]) > 0;
        if (center_pos == (z[0] > 0)) {
          segs.push_back({cross[0], cross[3]});
          segs.push_back({cross[1], cross[2]});
        } else {
          segs.push_back({cross[0], cross[1]});
          segs.push_back({cross[2], cross[3]});
        }
      }
    }
  return segs;
}

}  // namespace detail

struct BoundaryOverlay {
  std::vector<std::array<PlanarPoint, 2>> fold;       // discriminant zero set
  std::vector<std::array<PlanarPoint, 2>> tangency;   // leaves touching
  std::string svg;                                    // the <g id="boundary"> element
  std::size_t size() const { return fold.size() + tangency.size(); }
};

/// Zero contours of discriminant_sign (where two roots merge) and of
/// leaf_tangency (where two leaves touch) over a boundary_grid^2 grid.
inline BoundaryOverlay render_boundary(const RationalCurve& c, const RenderSpec& spec) {
  spec.validate();
  BoundaryOverlay out;
  const Viewport& v = spec.view;
  out.fold = detail::marching_squares(
      [&](const PlanarPoint& p) -> std::optional<double> { return discriminant_sign(c, p); }, v,
      spec.boundary_grid);
  out.tangency = detail::marching_squares(
      [&](const PlanarPoint& p) { return leaf_tangency(c, p); }, v, spec.boundary_grid);
  auto path = [&](const std::vector<std::array<PlanarPoint, 2>>& segs, const char* cls,
                  const char* dash) {
    if (segs.empty()) return std::string();
    std::string d;
    for (const auto& s : segs)
      d += "M" + detail::fmt_short(v.px(s[0].x)) + " " + detail::fmt_short(v.py(s[0].y)) + "L" +
           detail::fmt_short(v.px(s[1].x)) + " " + detail::fmt_short(v.py(s[1].y));
    return "  <path class=\"" + std::string(cls) + "\" stroke-dasharray=\"" + dash + "\" d=\"" + d +
           "\"/>\n";
  };
  out.svg = "<g id=\"boundary\" fill=\"none\" stroke=\"" + spec.boundary_color +
            "\" stroke-width=\"" + detail::fmt_short(1.5 * spec.stroke_width) + "\">\n" +
            path(out.fold, "fold", "none") + path(out.tangency, "tangency", "6 3") + "</g>\n";
  return out;
}

/// Full circles (and clipped lines) of the sampled parameters, one group per
/// foliation band. Each path carries the polar point and parameter it came
/// from.
inline RenderResult render_web(const RationalCurve& c, const RenderSpec& spec) {
  spec.validate();
  const Viewport& v = spec.view;
  RenderResult out;
  const auto bands = detail::band_values(c, spec);
  std::array<std::string, 3> groups;
  for (int b = 0; b < 3; ++b) {
    for (double u : bands[b]) {
      HomPoint polar{1, 0, 0, 0};
      PlanarCircle circ;
      try {
        polar = eval_curve(c, detail::param_from_value(u)).normalized();
        circ = circle_from_polar(polar);
      } catch (const ImaginaryCircle&) {
        ++out.imaginary;
        continue;
      } catch (const BasePointError&) {
        ++out.imaginary;
        continue;
      }
      std::string d;
      if (circ.is_line()) {
        const auto seg = detail::clip_line(circ.A, circ.B, circ.C, v);
        if (!seg) {
          ++out.outside;
          continue;
        }
        d = "M" + detail::fmt(v.px((*seg)[0].x)) + " " + detail::fmt(v.py((*seg)[0].y)) + " L" +
            detail::fmt(v.px((*seg)[1].x)) + " " + detail::fmt(v.py((*seg)[1].y));
      } else {
        const PlanarPoint ctr = circ.center();
        const double r = circ.radius();
        if (!detail::circle_meets_window(ctr, r, v)) {
          ++out.outside;
          continue;
        }
        const double rx = r / (v.x_max - v.x_min) * v.width;
        const double ry = r / (v.y_max - v.y_min) * v.height;
        const std::string a = detail::fmt(v.px(ctr.x - r)), b2 = detail::fmt(v.px(ctr.x + r));
        const std::string y = detail::fmt(v.py(ctr.y));
        const std::string arc = " A" + detail::fmt(rx) + " " + detail::fmt(ry) + " 0 1 0 ";
        d = "M" + a + " " + y + arc + b2 + " " + y + arc + a + " " + y + " Z";
      }
      const Vec4& pc = polar.coords();
      groups[b] += "  <path d=\"" + d + "\" data-u=\"" + detail::fmt(u) + "\" data-polar=\"" +
                   detail::fmt(pc[0]) + " " + detail::fmt(pc[1]) + " " + detail::fmt(pc[2]) + " " +
                   detail::fmt(pc[3]) + "\"/>\n";
      out.drawn.push_back({b, u, polar, circ});
    }
  }
  if (out.drawn.empty())
    throw EmptyPicture("render_web: no sampled circle is real and visible (" +
                       std::to_string(out.imaginary) + " imaginary, " +
                       std::to_string(out.outside) + " outside the viewport)");

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(v.width) + "\" height=\"" + std::to_string(v.height) + "\" viewBox=\"0 0 " +
         std::to_string(v.width) + " " + std::to_string(v.height) + "\">\n";
  svg += "<desc>window " + detail::fmt(v.x_min) + " " + detail::fmt(v.x_max) + " " +
         detail::fmt(v.y_min) + " " + detail::fmt(v.y_max) + "; drawn " +
         std::to_string(out.drawn.size()) + ", imaginary " + std::to_string(out.imaginary) +
         ", outside " + std::to_string(out.outside) + "</desc>\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<clipPath id=\"view\"><rect x=\"0\" y=\"0\" width=\"" + std::to_string(v.width) +
         "\" height=\"" + std::to_string(v.height) + "\"/></clipPath>\n";
  svg += "<g clip-path=\"url(#view)\">\n";
  if (spec.unit_circle) {
    const double rx = 1.0 / (v.x_max - v.x_min) * v.width, ry = 1.0 / (v.y_max - v.y_min) * v.height;
    svg += "<ellipse id=\"unit-circle\" cx=\"" + detail::fmt(v.px(0)) + "\" cy=\"" +
           detail::fmt(v.py(0)) + "\" rx=\"" + detail::fmt(rx) + "\" ry=\"" + detail::fmt(ry) +
           "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"" +
           detail::fmt_short(spec.stroke_width) + "\"/>\n";
  }
  for (int b = 0; b < 3; ++b)
    svg += "<g id=\"foliation-" + std::to_string(b + 1) + "\" fill=\"none\" stroke=\"" +
           spec.colors[b] + "\" stroke-width=\"" + detail::fmt_short(spec.stroke_width) + "\">\n" +
           groups[b] + "</g>\n";
  if (spec.boundary) {
    const BoundaryOverlay ov = render_boundary(c, spec);
    out.boundary_segments = static_cast<int>(ov.size());
    svg += ov.svg;
  }
  svg += "</g>\n</svg>\n";
  out.svg = std::move(svg);
  return out;
}

}  // namespace circleweb
