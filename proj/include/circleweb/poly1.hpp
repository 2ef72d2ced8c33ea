#pragma once

// Univariate real polynomials with ascending coefficients, and their roots.

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "circleweb/errors.hpp"

namespace circleweb {

class Poly1 {
 public:
  static constexpr int kMaxDegree = 8;

  Poly1() = default;
  Poly1(std::initializer_list<double> c) : Poly1(std::vector<double>(c)) {}
  explicit Poly1(std::vector<double> c) : c_(std::move(c)) {
    trim();
    if (degree() > kMaxDegree)
      throw Error("Poly1: degree " + std::to_string(degree()) + " exceeds " +
                  std::to_string(kMaxDegree));
  }

  static Poly1 monomial(int k, double a = 1.0) {
    std::vector<double> c(k + 1, 0.0);
    c[k] = a;
    return Poly1(std::move(c));
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<double>& coeffs() const { return c_; }
  double operator[](int k) const { return k >= 0 && k <= degree() ? c_[k] : 0.0; }
  double leading() const { return c_.empty() ? 0.0 : c_.back(); }
  double max_abs() const {
    double m = 0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  double operator()(double t) const {
    double r = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * t + *it;
    return r;
  }
  std::complex<double> operator()(std::complex<double> t) const {
    std::complex<double> r = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * t + *it;
    return r;
  }

  Poly1 derivative() const {
    if (degree() < 1) return {};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Poly1(std::move(d));
  }

  friend Poly1 operator+(const Poly1& a, const Poly1& b) {
    std::vector<double> r(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Poly1(std::move(r));
  }
  friend Poly1 operator-(const Poly1& a, const Poly1& b) { return a + (-1.0) * b; }
  friend Poly1 operator*(double s, const Poly1& a) {
    std::vector<double> r = a.c_;
    for (double& v : r) v *= s;
    return Poly1(std::move(r));
  }
  friend Poly1 operator*(const Poly1& a, const Poly1& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> r(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Poly1(std::move(r));
  }
  friend bool operator==(const Poly1&, const Poly1&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }
  std::vector<double> c_;
};

/// Quotient and remainder of a / b (b nonzero).
inline std::pair<Poly1, Poly1> divmod(const Poly1& a, const Poly1& b) {
  if (b.is_zero()) throw Error("divmod: division by the zero polynomial");
  std::vector<double> r = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {Poly1{}, a};
  std::vector<double> q(a.degree() - db + 1, 0.0);
  for (int k = a.degree() - db; k >= 0; --k) {
    const double f = r[k + db] / b.leading();
    q[k] = f;
    for (int j = 0; j <= db; ++j) r[k + j] -= f * b[j];
    r[k + db] = 0.0;
  }
  r.resize(db);
  return {Poly1(std::move(q)), Poly1(std::move(r))};
}

/// Euclidean gcd; remainders whose coefficients drop below `cutoff` relative
/// to the largest input coefficient are treated as zero. Returned monic.
inline Poly1 gcd(const Poly1& a, const Poly1& b, double cutoff = 1e-9) {
  const double scale = std::max({a.max_abs(), b.max_abs(), std::numeric_limits<double>::min()});
  auto clean = [&](const Poly1& p) {
    std::vector<double> c = p.coeffs();
    for (double& v : c)
      if (std::abs(v) <= cutoff * scale) v = 0.0;
    return Poly1(std::move(c));
  };
  Poly1 x = clean(a), y = clean(b);
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    Poly1 r = clean(divmod(x, y).second);
    // Rescale so the cutoff stays meaningful as coefficients shrink.
    if (!r.is_zero()) r = (scale / r.max_abs()) * r;
    x = std::move(y);
    y = std::move(r);
  }
  if (x.is_zero()) return x;
  return (1.0 / x.leading()) * x;
}

namespace detail {

// Parlett-Reinsch balancing with power-of-two scalings.
inline void balance(Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      const double row = m.row(i).lpNorm<1>() - std::abs(m(i, i));
      const double col = m.col(i).lpNorm<1>() - std::abs(m(i, i));
      if (row == 0.0 || col == 0.0) continue;
      int e = 0;
      std::frexp(row / col, &e);
      e /= 2;
      if (e == 0) continue;
      const double f = std::ldexp(1.0, e);
      if (col * f + row / f < 0.95 * (col + row)) {
        m.row(i) /= f;
        m.col(i) *= f;
        changed = true;
      }
    }
  }
}

}  // namespace detail

/// All complex roots (with multiplicity) of p, via companion-matrix
/// eigenvalues followed by one Newton step on each root.
inline std::vector<std::complex<double>> roots(const Poly1& p) {
  const int n = p.degree();
  if (n < 1) return {};
  if (n == 1) return {std::complex<double>(-p[0] / p[1], 0.0)};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -p[i] / p.leading();
  detail::balance(comp);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success) throw Error("roots: eigenvalue iteration failed");
  const Poly1 dp = p.derivative();
  std::vector<std::complex<double>> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::complex<double> z = es.eigenvalues()[i];
    const std::complex<double> d = dp(z);
    if (std::abs(d) > 0.0) {
      const std::complex<double> step = p(z) / d;
      if (std::abs(step) < 1e-3 * std::max(1.0, std::abs(z))) z -= step;
    }
    out.push_back(z);
  }
  return out;
}

/// Real roots, ascending. A root counts as real when its imaginary part is
/// below `imag_tol` relative to max(1, |root|).
inline std::vector<double> real_roots(const Poly1& p, double imag_tol = 1e-9) {
  std::vector<double> out;
  for (const auto& z : roots(p))
    if (std::abs(z.imag()) <= imag_tol * std::max(1.0, std::abs(z))) out.push_back(z.real());
  std::sort(out.begin(), out.end());
  return out;
}

/// Discriminant of the binary form of formal degree n whose affine
/// coefficients are `c` (ascending; missing top coefficients mean roots at
/// infinity). Evaluated as a_n^(2n-2) prod (r_i - r_j)^2 after moving to a
/// parameter chart with no root at infinity: the reversal t -> 1/t leaves the
/// binary discriminant unchanged and the 45-degree rotation scales it by
/// 2^(n(n-1)).
inline double binary_discriminant(std::span<const double> c, int n) {
  if (n < 1) return 0.0;
  std::vector<double> a(n + 1, 0.0);
  for (int k = 0; k <= n && k < static_cast<int>(c.size()); ++k) a[k] = c[k];
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;

  double factor = 1.0;
  if (std::abs(a[0]) > std::abs(a[n])) std::reverse(a.begin(), a.end());
  if (std::abs(a[n]) < 1e-3 * scale) {
    // t = (s + 1) / (1 - s)
    Poly1 g;
    for (int k = 0; k <= n; ++k) {
      Poly1 term{a[k]};
      for (int i = 0; i < k; ++i) term = term * Poly1{1.0, 1.0};
      for (int i = k; i < n; ++i) term = term * Poly1{1.0, -1.0};
      g = g + term;
    }
    std::vector<double> b(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) b[k] = g[k];
    if (std::abs(b[n]) > std::abs(a[n])) {
      a = b;
      factor = std::pow(2.0, -n * (n - 1));
    }
  }
  if (a[n] == 0.0) return 0.0;  // double root at infinity
  const Poly1 p(a);
  const auto r = roots(p);
  std::complex<double> prod = 1.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j) prod *= (r[i] - r[j]) * (r[i] - r[j]);
  return factor * std::pow(a[n], 2 * n - 2) * prod.real();
}

}  // namespace circleweb
