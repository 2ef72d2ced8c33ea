#pragma once

// Dense polynomials in three variables, stored as coefficient tensors
// c[i][j][k] of u1^i u2^j u3^k.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "circleweb/errors.hpp"
#include "circleweb/poly1.hpp"

namespace circleweb {

class Poly3 {
 public:
  using Shape = std::array<int, 3>;

  Poly3() : Poly3(Shape{1, 1, 1}) {}
  explicit Poly3(Shape shape) : shape_(shape), c_(static_cast<std::size_t>(shape[0]) * shape[1] * shape[2], 0.0) {}

  /// a(u1) b(u2) c(u3)
  static Poly3 outer(const std::vector<double>& a, const std::vector<double>& b,
                     const std::vector<double>& c) {
    Poly3 t({static_cast<int>(a.size()), static_cast<int>(b.size()), static_cast<int>(c.size())});
    for (int i = 0; i < t.shape_[0]; ++i)
      for (int j = 0; j < t.shape_[1]; ++j)
        for (int k = 0; k < t.shape_[2]; ++k) t.at(i, j, k) = a[i] * b[j] * c[k];
    return t;
  }

  const Shape& shape() const { return shape_; }
  /// Largest exponent stored along `axis`.
  int degree(int axis) const { return shape_[axis] - 1; }

  double& at(int i, int j, int k) { return c_[index(i, j, k)]; }
  double at(int i, int j, int k) const { return c_[index(i, j, k)]; }
  double get(int i, int j, int k) const {
    if (i >= shape_[0] || j >= shape_[1] || k >= shape_[2]) return 0.0;
    return at(i, j, k);
  }

  double max_abs() const {
    double m = 0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  Poly3& operator+=(const Poly3& o) { return axpy(1.0, o); }
  Poly3& operator-=(const Poly3& o) { return axpy(-1.0, o); }
  Poly3& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }

  /// this += s * o, growing the shape as needed.
  Poly3& axpy(double s, const Poly3& o) {
    Shape sh;
    for (int a = 0; a < 3; ++a) sh[a] = std::max(shape_[a], o.shape_[a]);
    if (sh != shape_) resize(sh);
    for (int i = 0; i < o.shape_[0]; ++i)
      for (int j = 0; j < o.shape_[1]; ++j)
        for (int k = 0; k < o.shape_[2]; ++k) at(i, j, k) += s * o.at(i, j, k);
    return *this;
  }

  friend Poly3 operator*(const Poly3& a, const Poly3& b) {
    Poly3 r({a.shape_[0] + b.shape_[0] - 1, a.shape_[1] + b.shape_[1] - 1,
             a.shape_[2] + b.shape_[2] - 1});
    for (int i = 0; i < a.shape_[0]; ++i)
      for (int j = 0; j < a.shape_[1]; ++j)
        for (int k = 0; k < a.shape_[2]; ++k) {
          const double v = a.at(i, j, k);
          if (v == 0.0) continue;
          for (int p = 0; p < b.shape_[0]; ++p)
            for (int q = 0; q < b.shape_[1]; ++q)
              for (int s = 0; s < b.shape_[2]; ++s) r.at(i + p, j + q, k + s) += v * b.at(p, q, s);
        }
    return r;
  }

  /// Coefficients with the variables permuted: result(u_perm) = this(u).
  /// perm[a] is the axis of the result that axis a is sent to.
  Poly3 permuted(const std::array<int, 3>& perm) const {
    Shape sh;
    for (int a = 0; a < 3; ++a) sh[perm[a]] = shape_[a];
    Poly3 r(sh);
    std::array<int, 3> src{}, dst{};
    for (src[0] = 0; src[0] < shape_[0]; ++src[0])
      for (src[1] = 0; src[1] < shape_[1]; ++src[1])
        for (src[2] = 0; src[2] < shape_[2]; ++src[2]) {
          for (int a = 0; a < 3; ++a) dst[perm[a]] = src[a];
          r.at(dst[0], dst[1], dst[2]) = at(src[0], src[1], src[2]);
        }
    return r;
  }

  /// Exact quotient by (u_a - u_b); the remainder magnitude is returned
  /// through `remainder` when given.
  Poly3 divide_by_difference(int a, int b, double* remainder = nullptr) const {
    // Synthetic division in u_a, with u_b multiplication as a shift along b.
    const int n = shape_[a] - 1;
    if (n < 1) throw Error("divide_by_difference: polynomial is constant in the divisor variable");
    Shape qshape = shape_;
    qshape[a] = n;
    qshape[b] = shape_[b] + n - 1;
    Poly3 q(qshape);
    const int other = 3 - a - b;
    // slab(k) of this along axis a, as a 2-D array over (b, other)
    auto src = [&](int ka, int kb, int ko) {
      std::array<int, 3> idx{};
      idx[a] = ka;
      idx[b] = kb;
      idx[other] = ko;
      return kb < shape_[b] ? at(idx[0], idx[1], idx[2]) : 0.0;
    };
    auto qref = [&](int ka, int kb, int ko) -> double& {
      std::array<int, 3> idx{};
      idx[a] = ka;
      idx[b] = kb;
      idx[other] = ko;
      return q.at(idx[0], idx[1], idx[2]);
    };
    const int nb = qshape[b] + 1, no = shape_[other];
    std::vector<double> carry(static_cast<std::size_t>(nb) * no, 0.0);
    for (int kb = 0; kb < nb; ++kb)
      for (int ko = 0; ko < no; ++ko) carry[kb * no + ko] = src(n, kb, ko);
    for (int k = n; k >= 1; --k) {
      for (int kb = 0; kb < nb - 1; ++kb)
        for (int ko = 0; ko < no; ++ko) qref(k - 1, kb, ko) = carry[kb * no + ko];
      // carry <- slab(k-1) + u_b * carry
      std::vector<double> next(carry.size(), 0.0);
      for (int kb = 0; kb < nb; ++kb)
        for (int ko = 0; ko < no; ++ko)
          next[kb * no + ko] = src(k - 1, kb, ko) + (kb > 0 ? carry[(kb - 1) * no + ko] : 0.0);
      carry = std::move(next);
    }
    if (remainder) {
      double r = 0;
      for (double v : carry) r = std::max(r, std::abs(v));
      *remainder = r;
    }
    return q;
  }

  /// Drops coefficients beyond the given per-axis degrees; returns the
  /// largest magnitude discarded.
  double truncate(const Shape& max_degree) {
    Shape sh;
    for (int a = 0; a < 3; ++a) sh[a] = std::min(shape_[a], max_degree[a] + 1);
    double dropped = 0.0;
    for (int i = 0; i < shape_[0]; ++i)
      for (int j = 0; j < shape_[1]; ++j)
        for (int k = 0; k < shape_[2]; ++k)
          if (i >= sh[0] || j >= sh[1] || k >= sh[2])
            dropped = std::max(dropped, std::abs(at(i, j, k)));
    resize(sh);
    return dropped;
  }

  double operator()(double u1, double u2, double u3) const { return partial(0, 0, 0, {u1, u2, u3}); }

  /// d^(a+b+c) / du1^a du2^b du3^c at u.
  double partial(int a, int b, int c, const std::array<double, 3>& u) const {
    const auto p0 = derivative_powers(shape_[0], a, u[0]);
    const auto p1 = derivative_powers(shape_[1], b, u[1]);
    const auto p2 = derivative_powers(shape_[2], c, u[2]);
    double total = 0.0;
    for (int i = a; i < shape_[0]; ++i)
      for (int j = b; j < shape_[1]; ++j) {
        const double w = p0[i] * p1[j];
        if (w == 0.0) continue;
        double inner = 0.0;
        for (int k = c; k < shape_[2]; ++k) inner += at(i, j, k) * p2[k];
        total += w * inner;
      }
    return total;
  }

  /// Sum of |c_ijk u1^i u2^j u3^k|: the size of the terms that cancel in W(u).
  double magnitude(const std::array<double, 3>& u) const {
    double total = 0.0;
    for (int i = 0; i < shape_[0]; ++i)
      for (int j = 0; j < shape_[1]; ++j)
        for (int k = 0; k < shape_[2]; ++k)
          total += std::abs(at(i, j, k) * std::pow(u[0], i) * std::pow(u[1], j) * std::pow(u[2], k));
    return total;
  }

  /// The polynomial in u_axis obtained by fixing the other two variables.
  Poly1 restrict_to(int axis, const std::array<double, 3>& u) const {
    std::vector<double> out(shape_[axis], 0.0);
    std::array<int, 3> idx{};
    for (idx[0] = 0; idx[0] < shape_[0]; ++idx[0])
      for (idx[1] = 0; idx[1] < shape_[1]; ++idx[1])
        for (idx[2] = 0; idx[2] < shape_[2]; ++idx[2]) {
          double w = at(idx[0], idx[1], idx[2]);
          for (int a = 0; a < 3; ++a)
            if (a != axis) w *= std::pow(u[a], idx[a]);
          out[idx[axis]] += w;
        }
    return Poly1(std::move(out));
  }

  /// Largest |this - this o sigma| over the five nontrivial permutations,
  /// relative to max_abs.
  double asymmetry() const {
    static const std::array<std::array<int, 3>, 5> perms{
        {{1, 0, 2}, {0, 2, 1}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1}}};
    const double scale = max_abs();
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (const auto& p : perms) {
      const Poly3 q = permuted(p);
      Shape sh;
      for (int a = 0; a < 3; ++a) sh[a] = std::max(shape_[a], q.shape_[a]);
      for (int i = 0; i < sh[0]; ++i)
        for (int j = 0; j < sh[1]; ++j)
          for (int k = 0; k < sh[2]; ++k)
            worst = std::max(worst, std::abs(get(i, j, k) - q.get(i, j, k)));
    }
    return worst / scale;
  }

  /// Average over the six permutations of the variables. Each orbit of
  /// exponent triples is summed in one fixed order, so the result is
  /// symmetric bit for bit.
  Poly3 symmetrized() const {
    const int n = std::max({shape_[0], shape_[1], shape_[2]});
    Poly3 r(Shape{n, n, n});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          std::array<int, 3> e{i, j, k};
          std::sort(e.begin(), e.end());
          double sum = 0.0;
          do {
            sum += get(e[0], e[1], e[2]);
          } while (std::next_permutation(e.begin(), e.end()));
          // Repeated exponents visit fewer than six distinct triples.
          const int distinct = (e[0] == e[1] && e[1] == e[2]) ? 1 : (e[0] == e[1] || e[1] == e[2]) ? 3 : 6;
          r.at(i, j, k) = sum / distinct;
        }
    return r;
  }

  bool operator==(const Poly3&) const = default;

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * shape_[1] + j) * shape_[2] + k;
  }

  void resize(const Shape& sh) {
    Poly3 r(sh);
    for (int i = 0; i < std::min(sh[0], shape_[0]); ++i)
      for (int j = 0; j < std::min(sh[1], shape_[1]); ++j)
        for (int k = 0; k < std::min(sh[2], shape_[2]); ++k) r.at(i, j, k) = at(i, j, k);
    *this = std::move(r);
  }

  // d^order/du^order of u^i for i < n.
  static std::vector<double> derivative_powers(int n, int order, double u) {
    std::vector<double> out(n, 0.0);
    for (int i = order; i < n; ++i) {
      double f = 1.0;
      for (int r = 0; r < order; ++r) f *= i - r;
      out[i] = f * std::pow(u, i - order);
    }
    return out;
  }

  Shape shape_;
  std::vector<double> c_;
};

}  // namespace circleweb
