#pragma once

// Circle webs of a polar curve: the web function, web points, the
// hexagonality residual, hexagon closure and the Moebius invariants of the
// twisted-cubic normal form.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "circleweb/minkgeom.hpp"
#include "circleweb/poly1.hpp"
#include "circleweb/poly3.hpp"
#include "circleweb/polycurve.hpp"

namespace circleweb {

// ---------------------------------------------------------------- web function

/// W(u1,u2,u3) = a^2+b^2+c^2-d^2 for the plane (a,b,c,d) through
/// Gamma(u1), Gamma(u2), Gamma(u3), whose coefficients are the signed 3x3
/// minors. W carries the factor V^2 with V = (u1-u2)(u1-u3)(u2-u3), which
/// vanishes on the diagonals without describing any tangency; `reduced` is
/// W / V^2, computed by exact division of each minor by V.
struct WebFunction {
  Poly3 full;
  Poly3 reduced;
  int curve_degree = 0;
  /// Coefficient asymmetry of the expansion before symmetrization.
  double raw_asymmetry = 0.0;
  /// Largest coefficient left over by the division by V.
  double division_remainder = 0.0;

  double operator()(double u1, double u2, double u3) const { return full(u1, u2, u3); }
  /// Magnitude of the cancelling terms of W at u, the yardstick for |W|.
  double scale(double u1, double u2, double u3) const { return full.magnitude({u1, u2, u3}); }
};

namespace detail {

inline std::array<Poly3, 4> plane_minors(const RationalCurve& c) {
  const int D = c.max_degree();
  std::array<std::vector<double>, 4> P;
  for (int i = 0; i < 4; ++i) {
    P[i].assign(D + 1, 0.0);
    for (int k = 0; k <= D; ++k) P[i][k] = c[i][k];
  }
  static const std::array<std::pair<std::array<int, 3>, double>, 6> perms{{
      {{0, 1, 2}, 1.0}, {{1, 2, 0}, 1.0}, {{2, 0, 1}, 1.0},
      {{0, 2, 1}, -1.0}, {{2, 1, 0}, -1.0}, {{1, 0, 2}, -1.0},
  }};
  std::array<Poly3, 4> n;
  for (int j = 0; j < 4; ++j) {
    std::array<int, 3> cols{};
    for (int k = 0, r = 0; k < 4; ++k)
      if (k != j) cols[r++] = k;
    Poly3 minor({D + 1, D + 1, D + 1});
    for (const auto& [p, sign] : perms)
      minor.axpy(sign, Poly3::outer(P[cols[p[0]]], P[cols[p[1]]], P[cols[p[2]]]));
    n[j] = (j % 2 == 0) ? minor : (minor *= -1.0);
  }
  return n;
}

inline Poly3 dual_quadric(const std::array<Poly3, 4>& n) {
  Poly3 w = n[0] * n[0];
  w += n[1] * n[1];
  w += n[2] * n[2];
  w -= n[3] * n[3];
  return w;
}

}  // namespace detail

inline WebFunction web_function(const RationalCurve& c) {
  WebFunction w;
  w.curve_degree = c.max_degree();
  auto n = detail::plane_minors(c);
  const Poly3 raw = detail::dual_quadric(n);
  w.raw_asymmetry = raw.asymmetry();
  w.full = raw.symmetrized();

  const int D = c.max_degree();
  if (D < 2) {
    w.reduced = Poly3();  // all points of a line are collinear: no planes
    return w;
  }
  double scale = 0.0;
  for (const auto& m : n) scale = std::max(scale, m.max_abs());
  for (auto& m : n) {
    double r1 = 0, r2 = 0, r3 = 0;
    m = m.divide_by_difference(0, 1, &r1).divide_by_difference(0, 2, &r2).divide_by_difference(1, 2, &r3);
    const double dropped = m.truncate({D - 2, D - 2, D - 2});
    w.division_remainder = std::max({w.division_remainder, r1, r2, r3, dropped});
  }
  if (scale > 0) w.division_remainder /= scale;
  if (w.division_remainder > 1e-9)
    throw Error("web_function: minors are not divisible by the Vandermonde factor (remainder " +
                std::to_string(w.division_remainder) + ")");
  w.reduced = detail::dual_quadric(n).symmetrized();
  return w;
}

// ------------------------------------------------------------------ web points

enum class PointClass { Regular, TangentPair, RootAtInfinity, Deficient, OnCurve };

inline std::string to_string(PointClass k) {
  switch (k) {
    case PointClass::Regular: return "Regular";
    case PointClass::TangentPair: return "TangentPair";
    case PointClass::RootAtInfinity: return "RootAtInfinity";
    case PointClass::Deficient: return "Deficient";
    case PointClass::OnCurve: return "OnCurve";
  }
  return "?";
}

struct WebPoint {
  PlanarPoint plane;
  /// Ascending; a root at the infinite parameter is +inf and comes last.
  std::array<double, 3> roots{};
  std::array<ProjParam, 3> params{};
  std::array<PlanarCircle, 3> circles{};
  bool root_at_infinity = false;
};

struct WebPointResult {
  PointClass cls = PointClass::Deficient;
  std::optional<WebPoint> point;  // present for Regular and RootAtInfinity
};

inline constexpr double kDoubleRootTol = 1e-7;

inline WebPointResult solve_web_point(const RationalCurve& c, const PlanarPoint& p) {
  const SpherePoint q = stereo_lift(p);
  const HomPoint qh = q.homogeneous();
  Poly1 tp;
  try {
    tp = tangency_poly(c, q);
  } catch (const IdenticallyZero&) {
    return {PointClass::Deficient, std::nullopt};
  }
  const int at_infinity = c.max_degree() - tp.degree();
  const auto zs = roots(tp);

  // A curve point on the sphere makes q its own polar point.
  auto on_curve = [&](ProjParam t) {
    try {
      return eval_curve(c, t).same_as(qh, 1e-6);
    } catch (const BasePointError&) {
      return false;
    }
  };
  if (at_infinity > 0 && on_curve(ProjParam::infinity())) return {PointClass::OnCurve, std::nullopt};
  for (const auto& z : zs)
    if (std::abs(z.imag()) <= 1e-4 * std::max(1.0, std::abs(z)) &&
        on_curve(ProjParam::affine(z.real())))
      return {PointClass::OnCurve, std::nullopt};

  std::vector<double> real;
  bool near_real = false, complex = false;
  for (const auto& z : zs) {
    const double rel = std::abs(z.imag()) / std::max(1.0, std::abs(z));
    if (rel <= 1e-9)
      real.push_back(z.real());
    else if (rel <= kDoubleRootTol)
      near_real = true;
    else
      complex = true;
  }
  if (complex) return {PointClass::Deficient, std::nullopt};
  std::sort(real.begin(), real.end());
  bool clustered = near_real || at_infinity >= 2;
  for (std::size_t i = 1; i < real.size(); ++i)
    if (std::abs(real[i] - real[i - 1]) <= kDoubleRootTol * std::max(1.0, std::abs(real[i])))
      clustered = true;
  if (clustered) return {PointClass::TangentPair, std::nullopt};
  if (real.size() + at_infinity != 3) return {PointClass::Deficient, std::nullopt};

  WebPoint w;
  w.plane = p;
  w.root_at_infinity = at_infinity == 1;
  for (int i = 0; i < 3; ++i) {
    const bool inf = i >= static_cast<int>(real.size());
    w.params[i] = inf ? ProjParam::infinity() : ProjParam::affine(real[i]);
    w.roots[i] = w.params[i].value();
    try {
      w.circles[i] = circle_from_polar(eval_curve(c, w.params[i]));
    } catch (const ImaginaryCircle&) {
      return {PointClass::OnCurve, std::nullopt};
    }
  }
  return {w.root_at_infinity ? PointClass::RootAtInfinity : PointClass::Regular, std::move(w)};
}

inline PointClass classify_point(const RationalCurve& c, const PlanarPoint& p) {
  return solve_web_point(c, p).cls;
}

/// Discriminant of the tangency polynomial at p as a binary form of degree
/// max_degree, so a degree drop counts as a root at infinity.
inline double discriminant_sign(const RationalCurve& c, const PlanarPoint& p) {
  Poly1 tp;
  try {
    tp = tangency_poly(c, stereo_lift(p));
  } catch (const IdenticallyZero&) {
    return 0.0;
  }
  const double s = tp.max_abs();
  std::vector<double> a = tp.coeffs();
  for (double& v : a) v /= s;
  return binary_discriminant(a, c.max_degree());
}

/// Signed product of the sines of the angles between the three foliation
/// circles through p, in root order. It vanishes where two leaves touch,
/// which is where the boundary circles run. Empty unless p carries three
/// real roots.
inline std::optional<double> leaf_tangency(const RationalCurve& c, const PlanarPoint& p) {
  const auto res = solve_web_point(c, p);
  if (!res.point) return std::nullopt;
  const SpherePoint q = stereo_lift(p);
  const Eigen::Vector3d qv(q.x, q.y, q.z);
  std::array<Eigen::Vector3d, 3> d;
  for (int i = 0; i < 3; ++i) {
    const Vec4 g = eval_curve(c, res.point->params[i]).coords();
    // The plane normal projected to the tangent plane at q.
    d[i] = g.head<3>() - g[3] * qv;
    const double n = d[i].norm();
    if (n == 0.0) return std::nullopt;
    d[i] /= n;
  }
  auto sine = [&](int i, int j) { return d[i].cross(d[j]).dot(qv); };
  return sine(0, 1) * sine(1, 2) * sine(2, 0);
}

// ------------------------------------------------------------ hexagonality

struct BlaschkeTerms {
  double value = 0.0;                // sum of the four terms
  std::array<double, 4> terms{};
  std::array<double, 3> gradient{};  // W1, W2, W3
  double normalized() const {
    double s = 0;
    for (double t : terms) s += std::abs(t);
    return s > 0 ? value / s : 0.0;
  }
};

namespace detail {

// Relative size of the smallest requested gradient component.
inline double gradient_ratio(const std::array<double, 3>& g, int axis) {
  const double s = std::abs(g[0]) + std::abs(g[1]) + std::abs(g[2]);
  return s > 0 ? std::abs(g[axis]) / s : 0.0;
}

}  // namespace detail

/// d^2/du1 du2 log(F_1 / F_2) for u3 = F(u1, u2) defined by w = 0 near u,
/// split into its four terms. Throws FoldPoint when a first partial of w
/// falls below fold_tol relative to the gradient.
inline BlaschkeTerms blaschke_terms(const Poly3& w, const std::array<double, 3>& u,
                                    double fold_tol = 1e-9) {
  auto d = [&](int a, int b, int c) { return w.partial(a, b, c, u); };
  const double W1 = d(1, 0, 0), W2 = d(0, 1, 0), W3 = d(0, 0, 1);
  BlaschkeTerms out;
  out.gradient = {W1, W2, W3};
  for (int axis : {2, 0, 1})
    if (detail::gradient_ratio(out.gradient, axis) < fold_tol)
      throw FoldPoint("blaschke_terms: dW/du" + std::to_string(axis + 1) +
                      " vanishes relative to the gradient");
  const double W11 = d(2, 0, 0), W12 = d(1, 1, 0), W22 = d(0, 2, 0);
  const double W13 = d(1, 0, 1), W23 = d(0, 1, 1), W33 = d(0, 0, 2);
  const double W112 = d(2, 1, 0), W122 = d(1, 2, 0), W113 = d(2, 0, 1), W123 = d(1, 1, 1);
  const double W133 = d(1, 0, 2), W223 = d(0, 2, 1), W233 = d(0, 1, 2), W333 = d(0, 0, 3);

  const double F1 = -W1 / W3, F2 = -W2 / W3;
  const double F11 = -(W11 + 2 * W13 * F1 + W33 * F1 * F1) / W3;
  const double F12 = -(W12 + W13 * F2 + W23 * F1 + W33 * F1 * F2) / W3;
  const double F22 = -(W22 + 2 * W23 * F2 + W33 * F2 * F2) / W3;
  const double F112 = -(W112 + W113 * F2 + 2 * (W123 + W133 * F2) * F1 + 2 * W13 * F12 +
                        (W233 + W333 * F2) * F1 * F1 + 2 * W33 * F1 * F12 + (W23 + W33 * F2) * F11) /
                      W3;
  const double F122 = -(W122 + W223 * F1 + 2 * (W123 + W233 * F1) * F2 + 2 * W23 * F12 +
                        (W133 + W333 * F1) * F2 * F2 + 2 * W33 * F2 * F12 + (W13 + W33 * F1) * F22) /
                      W3;
  out.terms = {F112 / F1, -F11 * F12 / (F1 * F1), -F122 / F2, F12 * F22 / (F2 * F2)};
  out.value = out.terms[0] + out.terms[1] + out.terms[2] + out.terms[3];
  return out;
}

/// Finite real roots u3 of the reduced web equation at (u1, u2), ascending.
inline std::vector<double> web_sheets(const WebFunction& w, double u1, double u2) {
  const Poly1 p = w.reduced.restrict_to(2, {u1, u2, 0.0});
  if (p.degree() < 1) return {};
  return real_roots(p);
}

struct HexPoint {
  std::array<double, 3> u{};
  double residual = 0.0;  // normalized
  BlaschkeTerms terms;
};

/// Hexagonality residual at (u1, u2) on the given sheet (index into
/// web_sheets). The residual is h divided by the sum of the absolute values
/// of its four terms, so it lies in [-1, 1] and is invariant under scaling W.
inline HexPoint hex_point(const WebFunction& w, double u1, double u2, int sheet = 0,
                          double fold_tol = 1e-9) {
  const auto s = web_sheets(w, u1, u2);
  if (sheet < 0 || sheet >= static_cast<int>(s.size()))
    throw NoSheet("hex_residual: no real u3 on sheet " + std::to_string(sheet) + " at (" +
                  std::to_string(u1) + ", " + std::to_string(u2) + ")");
  HexPoint h;
  h.u = {u1, u2, s[sheet]};
  h.terms = blaschke_terms(w.reduced, h.u, fold_tol);
  h.residual = h.terms.normalized();
  return h;
}

inline double hex_residual(const WebFunction& w, double u1, double u2, int sheet = 0) {
  return hex_point(w, u1, u2, sheet).residual;
}

inline double hex_residual(const RationalCurve& c, double u1, double u2, int sheet = 0) {
  return hex_residual(web_function(c), u1, u2, sheet);
}

struct SampleSpec {
  int count = 100;
  std::uint64_t seed = 1;
  double u_min = -2.0, u_max = 2.0;  // window for both u1 and u2
  double fold_tol = 1e-6;
  int max_attempts = 0;  // 0 means 20 * count
};

struct HexReport {
  double max_residual = 0.0;
  double median_residual = 0.0;
  int samples = 0;
  int rejected = 0;
  int attempts = 0;
  std::vector<HexPoint> points;
};

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Draws (u1, u2) uniformly from the window and a sheet uniformly among the
/// real ones, until `count` points are accepted or the attempt budget runs
/// out. Fold and sheetless draws are counted as rejected.
inline HexReport hex_certify(const WebFunction& w, const SampleSpec& s) {
  if (s.count < 1) throw Error("hex_certify: count must be at least 1");
  HexReport rep;
  const int budget = s.max_attempts > 0 ? s.max_attempts : 20 * s.count;
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> uni(s.u_min, s.u_max);
  std::vector<double> abs_res;
  if (s.u_max > s.u_min) {
    while (rep.samples < s.count && rep.attempts < budget) {
      ++rep.attempts;
      const double u1 = uni(rng), u2 = uni(rng);
      const auto sheets = web_sheets(w, u1, u2);
      if (sheets.empty()) {
        ++rep.rejected;
        continue;
      }
      const int k = static_cast<int>(rng() % sheets.size());
      try {
        HexPoint h = hex_point(w, u1, u2, k, s.fold_tol);
        abs_res.push_back(std::abs(h.residual));
        rep.points.push_back(h);
        ++rep.samples;
      } catch (const FoldPoint&) {
        ++rep.rejected;
      } catch (const NoSheet&) {
        ++rep.rejected;
      }
    }
  }
  if (2 * rep.samples < s.count)
    throw InsufficientSamples("hex_certify: only " + std::to_string(rep.samples) + " of " +
                              std::to_string(s.count) + " samples usable after " +
                              std::to_string(rep.attempts) + " attempts");
  rep.max_residual = *std::max_element(abs_res.begin(), abs_res.end());
  rep.median_residual = median_of(abs_res);
  return rep;
}

inline HexReport hex_certify(const RationalCurve& c, const SampleSpec& s) {
  return hex_certify(web_function(c), s);
}

// ------------------------------------------------------------ hexagon closure

struct ClosureReport {
  std::array<double, 2> base{};
  double base_u3 = 0.0;
  double eps = 0.0;
  double defect = 0.0;
  int iterations = 0;
  /// Smallest |W_k| / |grad W| over the six solves, k the solved variable.
  double min_transversality = 1.0;
  /// Some vertex has a gradient component of the opposite sign to the base,
  /// so the hexagon left the regular region it started in.
  bool fold_crossed = false;
  /// (u1, u2) of the six vertices, starting at (a + eps, b).
  std::array<std::array<double, 2>, 6> vertices{};
};

namespace detail {

struct SolveResult {
  double x;
  int iterations;
};

// Root of f near `guess`, where |f'| is known to be bounded away from zero.
// Safeguarded Newton inside a sign-change bracket when one is found within
// `reach`, plain Newton otherwise.
inline SolveResult solve_near(const std::function<double(double)>& f,
                              const std::function<double(double)>& df, double guess, double reach) {
  constexpr int kMaxIter = 100;
  constexpr double kTol = 1e-12;
  double lo = guess, hi = guess, flo = f(guess), fhi = flo;
  bool bracketed = flo == 0.0;
  for (double r = reach / 64; !bracketed && r <= reach; r *= 2) {
    lo = guess - r;
    hi = guess + r;
    flo = f(lo);
    fhi = f(hi);
    bracketed = (flo <= 0) != (fhi <= 0);
  }
  if (flo == 0.0 && hi == lo) return {guess, 0};

  double x = guess;
  for (int it = 1; it <= kMaxIter; ++it) {
    const double fx = f(x), dfx = df(x);
    if (fx == 0.0) return {x, it};
    if (bracketed) {
      if ((fx <= 0) == (flo <= 0)) {
        lo = x;
        flo = fx;
      } else {
        hi = x;
        fhi = fx;
      }
    }
    double next = dfx != 0.0 ? x - fx / dfx : std::numeric_limits<double>::quiet_NaN();
    const double tol = kTol * std::max(1.0, std::abs(x));
    if (std::isfinite(next) && std::abs(next - x) <= tol) return {next, it};
    if (bracketed && !(next >= std::min(lo, hi) && next <= std::max(lo, hi))) next = 0.5 * (lo + hi);
    if (!std::isfinite(next)) break;
    if (!bracketed && std::abs(next - guess) > reach)
      throw SheetJump("thomsen_closure: no root within reach of the continuation");
    x = next;
    if (bracketed && std::abs(hi - lo) <= tol) return {x, it};
  }
  throw NoConvergence("thomsen_closure: implicit solve did not converge in 100 iterations");
}

}  // namespace detail

/// Thomsen hexagon around the base (a, b) with u3 = c on the given sheet.
/// Each side follows one leaf to the next leaf through the base:
/// u2 = b, then u3 fixed to u1 = a, u2 fixed to u3 = c, u1 fixed to u2 = b,
/// and the same three once more. The defect is how far the last side lands
/// from the start (a + eps, b).
inline ClosureReport thomsen_closure(const WebFunction& w, std::array<double, 2> base, double eps,
                                     int sheet = 0) {
  if (!(eps > 0)) throw Error("thomsen_closure: eps must be positive");
  const Poly3& W = w.reduced;
  const auto sheets = web_sheets(w, base[0], base[1]);
  if (sheet < 0 || sheet >= static_cast<int>(sheets.size()))
    throw NoSheet("thomsen_closure: no real u3 at the base");
  ClosureReport rep;
  rep.base = base;
  rep.eps = eps;
  const std::array<double, 3> target{base[0], base[1], sheets[sheet]};
  rep.base_u3 = target[2];

  std::array<double, 3> u = target;
  std::array<double, 3> g0{};
  for (int a = 0; a < 3; ++a) g0[a] = W.partial(a == 0, a == 1, a == 2, target);
  auto note_transversality = [&](int solved) {
    std::array<double, 3> g{};
    for (int a = 0; a < 3; ++a) {
      g[a] = W.partial(a == 0, a == 1, a == 2, u);
      if ((g[a] > 0) != (g0[a] > 0)) rep.fold_crossed = true;
    }
    rep.min_transversality = std::min(rep.min_transversality, detail::gradient_ratio(g, solved));
  };
  // Moves variable `fixed_to_target` to its base value, holding `held`, and
  // solves for the remaining one.
  auto side = [&](int set, int held) {
    const int solve = 3 - set - held;
    std::array<double, 3> g{};
    for (int a = 0; a < 3; ++a) g[a] = W.partial(a == 0, a == 1, a == 2, u);
    if (detail::gradient_ratio(g, solve) < 1e-9)
      throw FoldPoint("thomsen_closure: leaf is tangent to the solve direction");
    const double shift = target[set] - u[set];
    const double guess = u[solve] - g[set] / g[solve] * shift;
    std::array<double, 3> v = u;
    v[set] = target[set];
    auto f = [&](double x) {
      v[solve] = x;
      return W(v[0], v[1], v[2]);
    };
    auto df = [&](double x) {
      v[solve] = x;
      return W.partial(solve == 0, solve == 1, solve == 2, v);
    };
    const auto r = detail::solve_near(f, df, guess, 10 * eps);
    if (std::abs(r.x - guess) > 10 * eps)
      throw SheetJump("thomsen_closure: solve landed " + std::to_string(std::abs(r.x - guess)) +
                      " from the continuation");
    rep.iterations += r.iterations;
    v[solve] = r.x;
    u = v;
    note_transversality(solve);
  };

  // Start on the u2 = b leaf at u1 = a + eps.
  {
    u[0] = base[0] + eps;
    std::array<double, 3> g{};
    for (int a = 0; a < 3; ++a) g[a] = W.partial(a == 0, a == 1, a == 2, target);
    if (detail::gradient_ratio(g, 2) < 1e-9) throw FoldPoint("thomsen_closure: base is a fold");
    const double guess = target[2] - g[0] / g[2] * eps;
    auto f = [&](double x) { return W(u[0], u[1], x); };
    auto df = [&](double x) { return W.partial(0, 0, 1, {u[0], u[1], x}); };
    const auto r = detail::solve_near(f, df, guess, 10 * eps);
    if (std::abs(r.x - guess) > 10 * eps)
      throw SheetJump("thomsen_closure: first vertex left the sheet");
    rep.iterations += r.iterations;
    u[2] = r.x;
    note_transversality(2);
  }
  rep.vertices[0] = {u[0], u[1]};
  const std::array<std::pair<int, int>, 3> cycle{{{0, 2}, {2, 1}, {1, 0}}};
  for (int k = 0; k < 5; ++k) {
    side(cycle[k % 3].first, cycle[k % 3].second);
    rep.vertices[k + 1] = {u[0], u[1]};
  }
  rep.defect = std::abs(u[0] - (base[0] + eps));
  return rep;
}

inline ClosureReport thomsen_closure(const RationalCurve& c, std::array<double, 2> base, double eps,
                                     int sheet = 0) {
  return thomsen_closure(web_function(c), base, eps, sheet);
}

struct ClosureBase {
  std::array<double, 2> base{};
  int sheet = 0;
};

/// Random bases away from the diagonals and from folds, each checked to
/// traverse its hexagon at the largest step `eps_max` without passing near
/// a fold.
inline std::vector<ClosureBase> sample_closure_bases(const WebFunction& w, int count,
                                                    std::uint64_t seed, double u_min = -2.0,
                                                    double u_max = 2.0, double eps_max = 0.1) {
  constexpr double kMinSeparation = 0.3;
  constexpr double kMinTransversality = 0.05;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(u_min, u_max);
  std::vector<ClosureBase> out;
  for (int attempt = 0; attempt < 200 * count && static_cast<int>(out.size()) < count; ++attempt) {
    const double a = uni(rng), b = uni(rng);
    const auto sheets = web_sheets(w, a, b);
    if (sheets.empty()) continue;
    const int k = static_cast<int>(rng() % sheets.size());
    const std::array<double, 3> u{a, b, sheets[k]};
    if (std::abs(a - b) < kMinSeparation || std::abs(a - u[2]) < kMinSeparation ||
        std::abs(b - u[2]) < kMinSeparation)
      continue;
    std::array<double, 3> g{};
    for (int i = 0; i < 3; ++i) g[i] = w.reduced.partial(i == 0, i == 1, i == 2, u);
    if (std::min({detail::gradient_ratio(g, 0), detail::gradient_ratio(g, 1),
                  detail::gradient_ratio(g, 2)}) < kMinTransversality)
      continue;
    try {
      const ClosureReport r = thomsen_closure(w, {a, b}, eps_max, k);
      if (r.fold_crossed || r.min_transversality < kMinTransversality) continue;
    } catch (const Error&) {
      continue;
    }
    out.push_back({{a, b}, k});
  }
  if (static_cast<int>(out.size()) < count)
    throw InsufficientSamples("sample_closure_bases: found " + std::to_string(out.size()) +
                              " of " + std::to_string(count) + " bases");
  return out;
}

/// Least-squares slope of log(defect) against log(eps); NaN with fewer than
/// two positive defects.
inline double defect_scaling_exponent(const std::vector<std::pair<double, double>>& eps_defect) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [e, d] : eps_defect)
    if (e > 0 && d > 0) pts.emplace_back(std::log(e), std::log(d));
  if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0, my = 0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= pts.size();
  my /= pts.size();
  double sxy = 0, sxx = 0;
  for (const auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxx > 0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

// ------------------------------------------------------------------ invariants

struct InvariantsReport {
  int S = 0, Sbar = 0;
  double I = 0.0, Ibar = 0.0;
  HomPoint p0{0, 1, 0, 0}, pbar0{1, 0, 0, 0};
  HomPoint c1{0, 0, 1, 1}, c2{0, 0, -1, 1};
  HomPoint p0_prime{1, 0, 0, 0}, pbar0_prime{0, 1, 0, 0};
};

namespace detail {

// Meet of the tangent line at Gamma(t) with the polar plane of Gamma(t).
inline HomPoint tangent_polar_meet(const RationalCurve& c, ProjParam t) {
  const HomPoint p = eval_curve(c, t).normalized();
  const HomPoint d = curve_tangent(c, t).normalized();
  return HomPoint(pair(p, d) * p.coords() - pair(p, p) * d.coords()).normalized();
}

inline int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace detail

/// The normal-form invariants, read off at the parameters infinity, 0, 1, -1.
/// Works for any curve; for a Moebius image of a cubic normal form it
/// returns the invariants of the original.
inline InvariantsReport invariants(const RationalCurve& c) {
  InvariantsReport r;
  r.p0 = eval_curve(c, ProjParam::infinity()).normalized();
  r.pbar0 = eval_curve(c, ProjParam::affine(0.0)).normalized();
  r.c1 = eval_curve(c, ProjParam::affine(1.0)).normalized();
  r.c2 = eval_curve(c, ProjParam::affine(-1.0)).normalized();
  r.p0_prime = detail::tangent_polar_meet(c, ProjParam::infinity());
  r.pbar0_prime = detail::tangent_polar_meet(c, ProjParam::affine(0.0));

  auto denom = [](const HomPoint& a, const HomPoint& b, const char* what) {
    const double v = pair(a, b);
    if (std::abs(v) < 1e-12)
      throw DegenerateConfig(std::string("invariants: pairing ") + what + " vanishes");
    return v * v;
  };
  r.S = detail::sign_of(pair(r.c1, r.c2) * pair(r.c2, r.p0_prime) * pair(r.p0_prime, r.c1));
  r.Sbar =
      detail::sign_of(pair(r.c1, r.c2) * pair(r.c2, r.pbar0_prime) * pair(r.pbar0_prime, r.c1));
  r.I = pair(r.p0, r.p0) * pair(r.pbar0_prime, r.pbar0_prime) /
        denom(r.p0, r.pbar0_prime, "(p0, pbar0')");
  r.Ibar = pair(r.pbar0, r.pbar0) * pair(r.p0_prime, r.p0_prime) /
           denom(r.pbar0, r.p0_prime, "(pbar0, p0')");
  return r;
}

inline InvariantsReport invariants(const CurveFamily& f) {
  if (f.tag != FamilyTag::Cubic)
    throw NotAvailable("invariants: defined for the cubic normal form only");
  return invariants(family_curve(f));
}

// ------------------------------------------------------------ negative controls

/// Adds magnitude * (largest coefficient) * U(-1, 1) to every coefficient
/// below each component's leading one.
inline RationalCurve perturb_curve(const RationalCurve& c, double magnitude, std::uint64_t seed) {
  if (magnitude < 0) throw Error("perturb_curve: magnitude must be non-negative");
  if (magnitude == 0) return c;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double scale = magnitude * c.max_abs_coefficient();
  std::array<Poly1, 4> out;
  for (int i = 0; i < 4; ++i) {
    std::vector<double> coef = c[i].coeffs();
    for (int k = 0; k + 1 < static_cast<int>(coef.size()); ++k) coef[k] += scale * uni(rng);
    out[i] = Poly1(std::move(coef));
  }
  return RationalCurve(std::move(out));
}

}  // namespace circleweb
