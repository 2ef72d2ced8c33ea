#pragma once

// Projective model of Moebius geometry on the unit sphere.
//
// Points of RP^3 are homogeneous 4-vectors [X:Y:Z:U]. The unit sphere is the
// quadric X^2+Y^2+Z^2-U^2 = 0, and a circle on it is the section by the plane
// polar to a point outside the sphere. Planes are paired with points through
// the plain dot product; points are paired with each other through the
// signature-(3,1) form.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "circleweb/errors.hpp"

namespace circleweb {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

inline constexpr double kTangencyTol = 1e-10;

/// diag(1, 1, 1, -1)
inline Mat4 minkowski_metric() {
  Mat4 eta = Mat4::Identity();
  eta(3, 3) = -1.0;
  return eta;
}

inline bool proportional(const Vec4& a, const Vec4& b, double tol) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return false;
  const Vec4 ua = a / na, ub = b / nb;
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      worst = std::max(worst, std::abs(ua[i] * ub[j] - ua[j] * ub[i]));
  return worst <= tol;
}

class HomPoint {
 public:
  HomPoint(double x, double y, double z, double u) : HomPoint(Vec4(x, y, z, u)) {}
  explicit HomPoint(const Vec4& v) : v_(v) {
    if (!v_.allFinite()) throw Error("HomPoint: non-finite coordinates");
    if (v_.cwiseAbs().maxCoeff() == 0.0)
      throw Error("HomPoint: all coordinates are zero");
  }

  const Vec4& coords() const { return v_; }
  double operator[](int i) const { return v_[i]; }
  double x() const { return v_[0]; }
  double y() const { return v_[1]; }
  double z() const { return v_[2]; }
  double u() const { return v_[3]; }

  /// Divides by the coordinate of largest magnitude, which becomes +1.
  HomPoint normalized() const {
    int k = 0;
    v_.cwiseAbs().maxCoeff(&k);
    return HomPoint(v_ / v_[k]);
  }

  bool same_as(const HomPoint& o, double tol = kTangencyTol) const {
    return proportional(v_, o.v_, tol);
  }

 private:
  Vec4 v_;
};

/// Plane aX + bY + cZ + dU = 0.
class Plane {
 public:
  Plane(double a, double b, double c, double d) : Plane(Vec4(a, b, c, d)) {}
  explicit Plane(const Vec4& v) : v_(v) {
    if (v_.cwiseAbs().maxCoeff() == 0.0) throw Error("Plane: all coefficients are zero");
  }
  const Vec4& coeffs() const { return v_; }
  double operator[](int i) const { return v_[i]; }
  double incidence(const HomPoint& p) const { return v_.dot(p.coords()); }

 private:
  Vec4 v_;
};

struct SpherePoint {
  double x = 0, y = 0, z = 1;

  HomPoint homogeneous() const { return HomPoint(x, y, z, 1.0); }
  double sphere_residual() const { return x * x + y * y + z * z - 1.0; }
};

struct PlanarPoint {
  double x = 0, y = 0;
};

/// eps (x^2 + y^2) + A x + B y + C = 0; a line when eps == 0.
struct PlanarCircle {
  double eps = 0, A = 0, B = 0, C = 0;

  bool is_line(double tol = 1e-12) const {
    const double s = std::max({std::abs(A), std::abs(B), std::abs(C), std::abs(eps)});
    return std::abs(eps) <= tol * s;
  }
  bool has_real_locus() const {
    if (is_line()) return A != 0.0 || B != 0.0;
    return A * A + B * B - 4.0 * eps * C > 0.0;
  }
  double value(const PlanarPoint& p) const {
    return eps * (p.x * p.x + p.y * p.y) + A * p.x + B * p.y + C;
  }
  /// |value| divided by the sum of the absolute terms.
  double residual(const PlanarPoint& p) const {
    const double scale = std::abs(eps) * (p.x * p.x + p.y * p.y) + std::abs(A * p.x) +
                         std::abs(B * p.y) + std::abs(C);
    return scale > 0 ? std::abs(value(p)) / scale : 0.0;
  }
  PlanarPoint center() const { return {-A / (2 * eps), -B / (2 * eps)}; }
  double radius() const {
    const PlanarPoint c = center();
    return std::sqrt(std::max(0.0, c.x * c.x + c.y * c.y - C / eps));
  }
  Vec4 as_vector() const { return Vec4(eps, A, B, C); }
};

inline double pair(const HomPoint& u, const HomPoint& v) {
  const Vec4& a = u.coords();
  const Vec4& b = v.coords();
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3];
}

inline SpherePoint stereo_lift(const PlanarPoint& p) {
  const double r2 = p.x * p.x + p.y * p.y;
  const double d = 1.0 + r2;
  return {2.0 * p.x / d, 2.0 * p.y / d, (1.0 - r2) / d};
}

inline PlanarPoint stereo_project(const SpherePoint& q) {
  if (std::abs(q.z + 1.0) < 1e-12)
    throw PoleError("stereo_project: point is the projection center (0,0,-1)");
  return {q.x / (1.0 + q.z), q.y / (1.0 + q.z)};
}

inline Plane tangent_plane(const SpherePoint& q) { return Plane(q.x, q.y, q.z, -1.0); }

/// Dual-quadric value, normalized: 0 for tangent planes, >0 secant, <0 missing the sphere.
inline double plane_tangency_residual(const Plane& P) {
  const Vec4& v = P.coeffs();
  const double s = v.squaredNorm();
  return (v[0] * v[0] + v[1] * v[1] + v[2] * v[2] - v[3] * v[3]) / s;
}

/// Circle of the plane polar to p, pushed to the stereographic plane.
inline PlanarCircle circle_from_polar(const HomPoint& p) {
  const Vec4& v = p.coords();
  if (pair(p, p) <= 1e-12 * v.squaredNorm())
    throw ImaginaryCircle("circle_from_polar: polar point is not outside the sphere");
  PlanarCircle c{-(v[2] + v[3]) / 2.0, v[0], v[1], (v[2] - v[3]) / 2.0};
  const double s = std::max({std::abs(c.eps), std::abs(c.A), std::abs(c.B), std::abs(c.C)});
  c.eps /= s;
  c.A /= s;
  c.B /= s;
  c.C /= s;
  return c;
}

/// Inverse of circle_from_polar (tetracyclic coordinates).
inline HomPoint polar_of_circle(const PlanarCircle& c) {
  return HomPoint(c.A, c.B, c.C - c.eps, -c.C - c.eps);
}

enum class Generator { Rx, Ry, Rz, Bx, By, Bz };

inline const std::array<Generator, 6>& all_generators() {
  static const std::array<Generator, 6> g{Generator::Rx, Generator::Ry, Generator::Rz,
                                          Generator::Bx, Generator::By, Generator::Bz};
  return g;
}

inline std::string to_string(Generator g) {
  switch (g) {
    case Generator::Rx: return "Rx";
    case Generator::Ry: return "Ry";
    case Generator::Rz: return "Rz";
    case Generator::Bx: return "Bx";
    case Generator::By: return "By";
    case Generator::Bz: return "Bz";
  }
  return "?";
}

inline std::optional<Generator> generator_from_string(const std::string& s) {
  for (Generator g : all_generators())
    if (to_string(g) == s) return g;
  return std::nullopt;
}

/// Matrix G of the vector field, so that d/ds [X Y Z U]^T = G [X Y Z U]^T.
inline Mat4 moebius_generator(Generator which) {
  Mat4 G = Mat4::Zero();
  // Row = component being differentiated, column = coordinate it is driven by.
  auto set = [&G](int row, int col, double v) { G(row, col) = v; };
  switch (which) {
    case Generator::Rz: set(0, 1, 1); set(1, 0, -1); break;  // Y dX - X dY
    case Generator::Rx: set(1, 2, 1); set(2, 1, -1); break;  // Z dY - Y dZ
    case Generator::Ry: set(2, 0, 1); set(0, 2, -1); break;  // X dZ - Z dX
    case Generator::Bx: set(0, 3, 1); set(3, 0, 1); break;   // U dX + X dU
    case Generator::By: set(1, 3, 1); set(3, 1, 1); break;   // U dY + Y dU
    case Generator::Bz: set(2, 3, 1); set(3, 2, 1); break;   // U dZ + Z dU
  }
  return G;
}

inline double so31_defect(const Mat4& G) {
  const Mat4 eta = minkowski_metric();
  return (G.transpose() * eta + eta * G).cwiseAbs().maxCoeff();
}

class MoebiusMap {
 public:
  MoebiusMap() : m_(Mat4::Identity()), lambda_(1.0) {}
  explicit MoebiusMap(const Mat4& m) : m_(m) {
    const Mat4 eta = minkowski_metric();
    const Mat4 g = m_.transpose() * eta * m_;
    lambda_ = (g(0, 0) + g(1, 1) + g(2, 2) - g(3, 3)) / 4.0;
    if (!(lambda_ > 0.0)) throw Error("MoebiusMap: matrix reverses the (3,1) form");
    const double err = (g - lambda_ * eta).cwiseAbs().maxCoeff();
    if (err > 1e-10 * lambda_)
      throw Error("MoebiusMap: matrix does not preserve the (3,1) form (defect " +
                  std::to_string(err / lambda_) + ")");
  }

  const Mat4& matrix() const { return m_; }
  double lambda() const { return lambda_; }

  HomPoint apply(const HomPoint& p) const { return HomPoint(m_ * p.coords()); }
  MoebiusMap then(const MoebiusMap& next) const { return MoebiusMap(next.m_ * m_); }
  MoebiusMap inverse() const { return MoebiusMap(m_.inverse()); }

 private:
  Mat4 m_;
  double lambda_;
};

namespace detail {

// Returns the single generator G is a multiple of, with the multiple.
inline std::optional<std::pair<Generator, double>> single_generator(const Mat4& G) {
  for (Generator g : all_generators()) {
    const Mat4 B = moebius_generator(g);
    int r = 0, c = 0;
    B.cwiseAbs().maxCoeff(&r, &c);
    const double k = G(r, c) / B(r, c);
    if ((G - k * B).cwiseAbs().maxCoeff() == 0.0) return std::make_pair(g, k);
  }
  return std::nullopt;
}

inline Mat4 closed_form_exp(Generator g, double s) {
  Mat4 M = Mat4::Identity();
  const Mat4 B = moebius_generator(g);
  const bool boost = g == Generator::Bx || g == Generator::By || g == Generator::Bz;
  // B^2 is -P (rotation) or +P (boost) with P the projector on the active plane.
  const Mat4 B2 = B * B;
  if (boost) {
    M += std::sinh(s) * B + (std::cosh(s) - 1.0) * B2;
  } else {
    M += std::sin(s) * B + (1.0 - std::cos(s)) * B2;
  }
  return M;
}

// Scaling and squaring with a Taylor kernel.
inline Mat4 general_exp(const Mat4& A) {
  const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  const Mat4 S = A / std::ldexp(1.0, squarings);
  Mat4 term = Mat4::Identity();
  Mat4 sum = Mat4::Identity();
  for (int k = 1; k < 40; ++k) {
    term = term * S / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-13 * 1e-3) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

}  // namespace detail

/// exp(s G) for G in so(3,1).
inline MoebiusMap moebius_exp(const Mat4& G, double s) {
  if (so31_defect(G) > 1e-12 * std::max(1.0, G.cwiseAbs().maxCoeff()))
    throw NotInAlgebra("moebius_exp: G is not in the span of the six generators");
  if (auto single = detail::single_generator(G))
    return MoebiusMap(detail::closed_form_exp(single->first, s * single->second));
  return MoebiusMap(detail::general_exp(s * G));
}

inline MoebiusMap moebius_exp(Generator g, double s) {
  return MoebiusMap(detail::closed_form_exp(g, s));
}

struct Intersection {
  std::vector<PlanarPoint> points;
  bool tangent = false;
};

namespace detail {

// Line a x + b y + c = 0 against x^2 + y^2 + A x + B y + C = 0.
inline Intersection line_circle(double a, double b, double c, double A, double B, double C) {
  Intersection out;
  const double n2 = a * a + b * b;
  const double n = std::sqrt(n2);
  const PlanarPoint foot{-c * a / n2, -c * b / n2};
  const PlanarPoint dir{-b / n, a / n};
  const double half_b = foot.x * dir.x + foot.y * dir.y + 0.5 * (A * dir.x + B * dir.y);
  const double c0 = foot.x * foot.x + foot.y * foot.y + A * foot.x + B * foot.y + C;
  const double disc = half_b * half_b - c0;
  const double r2 = std::max(1.0, 0.25 * (A * A + B * B) - C);
  if (disc < -kTangencyTol * r2) return out;
  if (std::abs(disc) <= kTangencyTol * r2) {
    out.points.push_back({foot.x - half_b * dir.x, foot.y - half_b * dir.y});
    out.tangent = true;
    return out;
  }
  const double root = std::sqrt(disc);
  for (double s : {-half_b - root, -half_b + root})
    out.points.push_back({foot.x + s * dir.x, foot.y + s * dir.y});
  return out;
}

}  // namespace detail

/// Real intersection points of two circles or lines, via the radical line.
inline Intersection circle_circle_intersect(const PlanarCircle& c1, const PlanarCircle& c2) {
  if (proportional(c1.as_vector(), c2.as_vector(), 1e-10))
    throw CoincidentCircles("circle_circle_intersect: circles coincide");
  const bool l1 = c1.is_line(), l2 = c2.is_line();
  if (l1 && l2) {
    Intersection out;
    const double det = c1.A * c2.B - c1.B * c2.A;
    const double scale = std::hypot(c1.A, c1.B) * std::hypot(c2.A, c2.B);
    if (std::abs(det) <= 1e-14 * scale) return out;  // parallel
    out.points.push_back({(c1.B * c2.C - c2.B * c1.C) / det, (c2.A * c1.C - c1.A * c2.C) / det});
    return out;
  }
  if (l1 || l2) {
    const PlanarCircle& line = l1 ? c1 : c2;
    const PlanarCircle& circ = l1 ? c2 : c1;
    return detail::line_circle(line.A, line.B, line.C, circ.A / circ.eps, circ.B / circ.eps,
                               circ.C / circ.eps);
  }
  const double A1 = c1.A / c1.eps, B1 = c1.B / c1.eps, C1 = c1.C / c1.eps;
  const double A2 = c2.A / c2.eps, B2 = c2.B / c2.eps, C2 = c2.C / c2.eps;
  const double a = A1 - A2, b = B1 - B2, c = C1 - C2;
  if (std::hypot(a, b) <= 1e-14 * std::max({1.0, std::abs(A1), std::abs(B1)}))
    return {};  // concentric
  return detail::line_circle(a, b, c, A1, B1, C1);
}

}  // namespace circleweb
