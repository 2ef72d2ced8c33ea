#pragma once

// Rational polar curves t -> [X(t):Y(t):Z(t):U(t)] and the twisted-cubic
// families whose circle webs are hexagonal.

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "circleweb/minkgeom.hpp"
#include "circleweb/poly1.hpp"

namespace circleweb {

/// Projective parameter [t0:t1]; affine t is [t:1], infinity is [1:0].
struct ProjParam {
  double t0 = 0, t1 = 1;

  static ProjParam affine(double t) { return {t, 1.0}; }
  static ProjParam infinity() { return {1.0, 0.0}; }

  bool is_infinite(double tol = 0.0) const {
    return std::abs(t1) <= tol * std::abs(t0);
  }
  /// t0/t1, +inf at infinity.
  double value() const {
    return t1 == 0.0 ? std::numeric_limits<double>::infinity() : t0 / t1;
  }
};

inline constexpr int kMaxCurveDegree = 4;

class RationalCurve {
 public:
  explicit RationalCurve(std::array<Poly1, 4> comps) : comps_(std::move(comps)) {
    max_degree_ = 0;
    for (const auto& p : comps_) max_degree_ = std::max(max_degree_, p.degree());
    if (max_degree_ < 1) throw BadCurve("RationalCurve: all components are constant");
    if (max_degree_ > kMaxCurveDegree)
      throw BadCurve("RationalCurve: degree " + std::to_string(max_degree_) + " exceeds " +
                     std::to_string(kMaxCurveDegree));
    Poly1 g = comps_[0];
    for (int i = 1; i < 4; ++i) g = gcd(g, comps_[i]);
    if (g.degree() >= 1)
      throw BadCurve("RationalCurve: components share a common factor of degree " +
                     std::to_string(g.degree()));
  }

  const std::array<Poly1, 4>& components() const { return comps_; }
  const Poly1& operator[](int i) const { return comps_[i]; }
  int max_degree() const { return max_degree_; }

  /// Coefficient k of every component as a 4-vector.
  Vec4 coefficient(int k) const {
    return Vec4(comps_[0][k], comps_[1][k], comps_[2][k], comps_[3][k]);
  }
  double max_abs_coefficient() const {
    double m = 0;
    for (const auto& p : comps_) m = std::max(m, p.max_abs());
    return m;
  }

 private:
  std::array<Poly1, 4> comps_;
  int max_degree_ = 0;
};

enum class FamilyTag { Cubic, Cubic1, Cubic2, Custom };

inline std::string to_string(FamilyTag t) {
  switch (t) {
    case FamilyTag::Cubic: return "cubic";
    case FamilyTag::Cubic1: return "cubic1";
    case FamilyTag::Cubic2: return "cubic2";
    case FamilyTag::Custom: return "custom";
  }
  return "?";
}

struct CurveFamily {
  FamilyTag tag = FamilyTag::Cubic;
  double m = 0, x0 = 0, y0 = 0;
  std::array<std::vector<double>, 4> table{};  // custom only, ascending per row

  static CurveFamily cubic(double m, double x0) { return {FamilyTag::Cubic, m, x0, 0.0, {}}; }
  static CurveFamily cubic1(double m, double x0, double y0) {
    return {FamilyTag::Cubic1, m, x0, y0, {}};
  }
  static CurveFamily cubic2(double m, double x0, double y0) {
    return {FamilyTag::Cubic2, m, x0, y0, {}};
  }
  static CurveFamily custom(std::array<std::vector<double>, 4> rows) {
    return {FamilyTag::Custom, 0, 0, 0, std::move(rows)};
  }

  /// Throws BadParams naming the violated constraint.
  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0)) throw BadParams(std::string(name) + " must be positive");
    };
    switch (tag) {
      case FamilyTag::Cubic:
        positive(m, "m");
        positive(x0, "x0");
        break;
      case FamilyTag::Cubic1:
      case FamilyTag::Cubic2:
        positive(m, "m");
        positive(x0, "x0");
        positive(y0, "y0");
        if (tag == FamilyTag::Cubic1 && !(x0 > y0))
          throw BadParams("cubic1 requires x0 > y0");
        if (std::abs(x0 * x0 + y0 * y0 - 1.0) > 1e-12)
          throw BadParams("x0^2 + y0^2 = 1 is required (off by " +
                          std::to_string(x0 * x0 + y0 * y0 - 1.0) + ")");
        break;
      case FamilyTag::Custom:
        for (const auto& row : table)
          if (static_cast<int>(row.size()) > kMaxCurveDegree + 1)
            throw BadParams("custom curve rows hold at most " +
                            std::to_string(kMaxCurveDegree + 1) + " coefficients");
        break;
    }
  }
};

inline RationalCurve family_curve(const CurveFamily& f) {
  f.validate();
  const double m = f.m, x0 = f.x0, y0 = f.y0;
  switch (f.tag) {
    case FamilyTag::Cubic:
      return RationalCurve({Poly1{-m, 0, m}, Poly1{0, -1, 0, 1}, Poly1{0, m * x0},
                            Poly1{0, 0, m * x0}});
    case FamilyTag::Cubic1:
      return RationalCurve({Poly1{m * y0 * (x0 * x0 - y0 * y0) / 4, 0, m * y0},
                            Poly1{-m * x0 * (y0 * y0 - x0 * x0) / 4, 0, -m * x0},
                            Poly1{0, -0.25, 0, 1}, Poly1{0, -m * x0 * y0}});
    case FamilyTag::Cubic2:
      return RationalCurve({Poly1{0, x0 * m},
                            Poly1{m * (y0 * y0 + 1) / (2 * y0), 0, -m * x0 * x0 / (2 * y0)},
                            Poly1{0, 0.125, 0, -0.125},
                            Poly1{m * (y0 * y0 + 1) / 2, 0, m * x0 * x0 / 2}});
    case FamilyTag::Custom:
      try {
        return RationalCurve({Poly1(f.table[0]), Poly1(f.table[1]), Poly1(f.table[2]),
                              Poly1(f.table[3])});
      } catch (const BadCurve& e) {
        throw BadParams(e.what());
      }
  }
  throw BadParams("unknown family");
}

namespace detail {

inline Vec4 homogenized_value(const RationalCurve& c, double t0, double t1) {
  const int D = c.max_degree();
  Vec4 v = Vec4::Zero();
  for (int k = 0; k <= D; ++k)
    v += c.coefficient(k) * (std::pow(t0, k) * std::pow(t1, D - k));
  return v;
}

}  // namespace detail

/// Homogenized evaluation with common degree max_degree; [1:0] gives the
/// leading-coefficient vector.
inline HomPoint eval_curve(const RationalCurve& c, ProjParam t) {
  const double n = std::hypot(t.t0, t.t1);
  if (n == 0.0) throw Error("eval_curve: parameter [0:0]");
  const double t0 = t.t0 / n, t1 = t.t1 / n;
  const Vec4 v = detail::homogenized_value(c, t0, t1);
  if (v.cwiseAbs().maxCoeff() <= 1e-12 * c.max_abs_coefficient())
    throw BasePointError("eval_curve: all components vanish at [" + std::to_string(t.t0) + ":" +
                         std::to_string(t.t1) + "]");
  return HomPoint(v);
}

inline HomPoint eval_curve(const RationalCurve& c, double t) {
  return eval_curve(c, ProjParam::affine(t));
}

/// Derivative of the parametrization in the affine chart containing t
/// (t = t0/t1 when |t1| >= |t0|, otherwise s = t1/t0).
inline HomPoint curve_tangent(const RationalCurve& c, ProjParam t) {
  const HomPoint p = eval_curve(c, t);
  const int D = c.max_degree();
  Vec4 d = Vec4::Zero();
  if (std::abs(t.t1) >= std::abs(t.t0)) {
    const double tau = t.t0 / t.t1;
    for (int k = 1; k <= D; ++k) d += c.coefficient(k) * (k * std::pow(tau, k - 1));
  } else {
    const double s = t.t1 / t.t0;
    for (int k = 0; k < D; ++k) d += c.coefficient(k) * ((D - k) * std::pow(s, D - k - 1));
  }
  if (d.cwiseAbs().maxCoeff() <= 1e-12 * c.max_abs_coefficient() ||
      proportional(d, p.coords(), 1e-12))
    throw SingularParam("curve_tangent: derivative is proportional to the curve point");
  return HomPoint(d);
}

/// Symmetric 4x4 form v^T Q v on (X, Y, Z, U).
struct QuadraticForm {
  Mat4 q = Mat4::Zero();
  std::string label;

  struct Term {
    int i, j;
    double coef;
  };
  static QuadraticForm from_terms(std::initializer_list<Term> terms, std::string label = {}) {
    QuadraticForm f;
    f.label = std::move(label);
    for (const Term& t : terms) {
      if (t.i == t.j) {
        f.q(t.i, t.i) += t.coef;
      } else {
        f.q(t.i, t.j) += t.coef / 2;
        f.q(t.j, t.i) += t.coef / 2;
      }
    }
    return f;
  }
  double operator()(const Vec4& v) const { return v.dot(q * v); }
};

inline std::vector<QuadraticForm> ideal_generators(const CurveFamily& f) {
  f.validate();
  enum { X = 0, Y = 1, Z = 2, U = 3 };
  const double m = f.m, x0 = f.x0, y0 = f.y0;
  switch (f.tag) {
    case FamilyTag::Cubic:
      return {
          QuadraticForm::from_terms({{Z, Z, 1}, {U, U, -1}, {X, U, x0}}, "Z^2-U^2+x0*X*U"),
          QuadraticForm::from_terms({{X, U, 1}, {Y, Z, -m}}, "X*U-m*Y*Z"),
          QuadraticForm::from_terms({{X, Z, 1}, {X, Y, m * x0}, {Y, U, -m}}, "X*Z+m*Y*(x0*X-U)"),
      };
    case FamilyTag::Cubic1: {
      const double x2 = x0 * x0, y2 = y0 * y0;
      return {
          QuadraticForm::from_terms({{X, X, 1 / y2}, {Y, Y, -1 / x2}, {U, U, 1 / x2 - 1 / y2}},
                                    "X^2/y0^2-Y^2/x0^2+(1/x0^2-1/y0^2)*U^2"),
          QuadraticForm::from_terms(
              {{X, Z, 2 * m / y0}, {Y, Z, 2 * m / x0}, {X, U, -1 / x0}, {Y, U, -1 / y0}},
              "2*m*Z*(X/y0+Y/x0)-U*(X/x0+Y/y0)"),
          QuadraticForm::from_terms({{X, X, 1 / y2},
                                     {X, Y, -2 / (x0 * y0)},
                                     {Y, Y, 1 / x2},
                                     {Z, U, 4 * m / (x0 * y0)},
                                     {U, U, -1 / (x2 * y2)}},
                                    "(X/y0-Y/x0)^2+4*m/(x0*y0)*Z*U-U^2/(x0^2*y0^2)"),
      };
    }
    case FamilyTag::Cubic2: {
      const double x3 = x0 * x0 * x0, y2 = y0 * y0;
      return {
          QuadraticForm::from_terms({{X, X, 1 + y2}, {Y, Y, y2}, {U, U, -1}},
                                    "(1+y0^2)*X^2+y0^2*Y^2-U^2"),
          QuadraticForm::from_terms(
              {{X, U, 2 * y2 / (m * x3)}, {Z, U, 8}, {Y, Z, 8 * y0}, {X, Y, -2 * y0 / (m * x3)}},
              "2*y0^2/(m*x0^3)*X*U+8*Z*U+8*y0*Y*Z-2*y0/(m*x0^3)*X*Y"),
          QuadraticForm::from_terms({{X, X, x0 * x0},
                                     {Y, Y, -y2},
                                     {Y, U, 2 * y0},
                                     {X, Z, -8 * m * x3},
                                     {U, U, -1}},
                                    "x0^2*X^2-y0^2*Y^2+2*y0*Y*U-8*m*x0^3*X*Z-U^2"),
      };
    }
    case FamilyTag::Custom:
      throw NotAvailable("ideal generators are only tabulated for the named families");
  }
  throw NotAvailable("unknown family");
}

/// g(Gamma(t)) expanded as a polynomial in t.
inline Poly1 compose_ideal(const QuadraticForm& g, const RationalCurve& c) {
  Poly1 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (g.q(i, j) != 0.0) out = out + g.q(i, j) * (c[i] * c[j]);
  return out;
}

/// Largest coefficient among the individual terms of the expansion, the
/// yardstick for deciding that compose_ideal vanished.
inline double compose_ideal_scale(const QuadraticForm& g, const RationalCurve& c) {
  std::vector<double> acc(2 * c.max_degree() + 1, 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int a = 0; a <= c[i].degree(); ++a)
        for (int b = 0; b <= c[j].degree(); ++b)
          acc[a + b] += std::abs(g.q(i, j) * c[i][a] * c[j][b]);
  double m = 0;
  for (double v : acc) m = std::max(m, v);
  return m;
}

/// max |coefficient of g o Gamma| / compose_ideal_scale.
inline double ideal_residual(const QuadraticForm& g, const RationalCurve& c) {
  const double scale = compose_ideal_scale(g, c);
  return scale > 0 ? compose_ideal(g, c).max_abs() / scale : 0.0;
}

inline RationalCurve transform_curve(const MoebiusMap& M, const RationalCurve& c) {
  const Mat4& m = M.matrix();
  std::array<Poly1, 4> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (m(i, j) != 0.0) out[i] = out[i] + m(i, j) * c[j];
  return RationalCurve(std::move(out));
}

/// Pull a form back along M^-1, so that transform_form(M, g) o (M Gamma) = g o Gamma.
inline QuadraticForm transform_form(const MoebiusMap& M, const QuadraticForm& g) {
  const Mat4 inv = M.matrix().inverse();
  QuadraticForm out;
  out.q = inv.transpose() * g.q * inv;
  out.q = 0.5 * (out.q + out.q.transpose());
  out.label = g.label;
  return out;
}

/// t -> tangent_plane(q) . Gamma(t). Its roots are the parameters of the
/// web circles through q; a drop below max_degree is a root at infinity.
inline Poly1 tangency_poly(const RationalCurve& c, const SpherePoint& q) {
  const Vec4 plane = tangent_plane(q).coeffs();
  std::vector<double> coef(c.max_degree() + 1, 0.0);
  double scale = 0.0;
  for (int k = 0; k <= c.max_degree(); ++k) {
    const Vec4 ck = c.coefficient(k);
    coef[k] = plane.dot(ck);
    scale = std::max(scale, plane.cwiseAbs().dot(ck.cwiseAbs()));
  }
  double worst = 0.0;
  for (double v : coef) worst = std::max(worst, std::abs(v));
  if (worst <= 1e-12 * scale)
    throw IdenticallyZero("tangency_poly: the tangent plane contains the whole curve");
  return Poly1(std::move(coef));
}

}  // namespace circleweb
