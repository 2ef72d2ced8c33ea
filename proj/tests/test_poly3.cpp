#include <gtest/gtest.h>

#include <random>

#include "circleweb/poly3.hpp"
#include "oracles.hpp"

using namespace circleweb;

namespace {

Poly3 random_poly3(std::mt19937_64& rng, Poly3::Shape shape) {
  std::uniform_real_distribution<double> u(-1, 1);
  Poly3 p(shape);
  for (int i = 0; i < shape[0]; ++i)
    for (int j = 0; j < shape[1]; ++j)
      for (int k = 0; k < shape[2]; ++k) p.at(i, j, k) = u(rng);
  return p;
}

}  // namespace

TEST(Poly3, ProductEvaluatesAsProduct) {
  std::mt19937_64 rng(31);
  const Poly3 a = random_poly3(rng, {3, 2, 4}), b = random_poly3(rng, {2, 3, 2});
  const Poly3 c = a * b;
  for (int i = 0; i < 10; ++i) {
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const double x = u(rng), y = u(rng), z = u(rng);
    EXPECT_NEAR(c(x, y, z), a(x, y, z) * b(x, y, z), 1e-12);
  }
}

TEST(Poly3, DivisionByDifferenceIsExact) {
  std::mt19937_64 rng(37);
  const Poly3 q = random_poly3(rng, {3, 2, 3});
  for (const auto& [a, b] : std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}, {2, 0}}) {
    Poly3 diff({a == 0 || b == 0 ? 2 : 1, a == 1 || b == 1 ? 2 : 1, a == 2 || b == 2 ? 2 : 1});
    std::array<int, 3> ia{}, ib{};
    ia[a] = 1;
    ib[b] = 1;
    diff.at(ia[0], ia[1], ia[2]) = 1.0;
    diff.at(ib[0], ib[1], ib[2]) = -1.0;
    const Poly3 p = q * diff;
    double rem = -1;
    const Poly3 back = p.divide_by_difference(a, b, &rem);
    EXPECT_LE(rem, 1e-14);
    for (int t = 0; t < 10; ++t) {
      std::uniform_real_distribution<double> u(-2, 2);
      const double x = u(rng), y = u(rng), z = u(rng);
      EXPECT_NEAR(back(x, y, z), q(x, y, z), 1e-12);
    }
  }
  // A non-multiple leaves a remainder.
  Poly3 one({2, 1, 1});
  one.at(0, 0, 0) = 1.0;
  one.at(1, 0, 0) = 1.0;
  double rem = 0;
  one.divide_by_difference(0, 1, &rem);
  EXPECT_GT(rem, 0.5);
}

TEST(Poly3, PartialsMatchFiniteDifferences) {
  std::mt19937_64 rng(41);
  const Poly3 p = random_poly3(rng, {4, 4, 4});
  const std::array<double, 3> u{0.3, -0.6, 0.9};
  const double h = 1e-4;
  for (int axis = 0; axis < 3; ++axis) {
    auto along = [&](int ax, double t) {
      std::array<double, 3> v = u;
      v[ax] += t;
      return p(v[0], v[1], v[2]);
    };
    const double fd = (along(axis, h) - along(axis, -h)) / (2 * h);
    EXPECT_NEAR(p.partial(axis == 0, axis == 1, axis == 2, u), fd, 1e-7);
    const double fd2 = (along(axis, h) - 2 * along(axis, 0) + along(axis, -h)) / (h * h);
    EXPECT_NEAR(p.partial(2 * (axis == 0), 2 * (axis == 1), 2 * (axis == 2), u), fd2, 1e-5);
  }
  // mixed third partial d^3/du1 du2 du3 against a nested central difference
  double fd = 0;
  for (int a : {-1, 1})
    for (int b : {-1, 1})
      for (int c : {-1, 1}) fd += a * b * c * p(u[0] + a * h, u[1] + b * h, u[2] + c * h);
  fd /= 8 * h * h * h;
  EXPECT_NEAR(p.partial(1, 1, 1, u), fd, 1e-4);
}

TEST(Poly3, RestrictionAndSymmetry) {
  std::mt19937_64 rng(43);
  const Poly3 p = random_poly3(rng, {3, 3, 3});
  const Poly1 r = p.restrict_to(2, {0.4, -1.1, 0.0});
  EXPECT_NEAR(r(0.7), p(0.4, -1.1, 0.7), 1e-13);
  EXPECT_GT(p.asymmetry(), 1e-3);
  const Poly3 s = p.symmetrized();
  EXPECT_LE(s.asymmetry(), 1e-15);
  EXPECT_NEAR(s(0.1, 0.2, 0.3), s(0.3, 0.1, 0.2), 1e-14);
}
