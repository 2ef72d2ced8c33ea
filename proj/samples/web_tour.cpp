// Walks through the cubic normal form with the parameters of the first
// figure: ideal check, a web point, a hexagonality sample and one hexagon.

#include <cmath>
#include <cstdio>

#include "circleweb/circleweb.hpp"

using namespace circleweb;

int main() {
  const double m = 1 / std::sqrt(3.0), x0 = std::sqrt(3.0) / 2;
  const CurveFamily fam = CurveFamily::cubic(m, x0);
  const RationalCurve curve = family_curve(fam);

  std::printf("ideal generators composed with the curve:\n");
  for (const auto& g : ideal_generators(fam))
    std::printf("  %-24s max coefficient %.2e\n", g.label.c_str(), compose_ideal(g, curve).max_abs());

  const PlanarPoint p{-0.3, 0.2};
  const auto res = solve_web_point(curve, p);
  std::printf("point (%.2f, %.2f): %s\n", p.x, p.y, to_string(res.cls).c_str());
  if (res.point)
    for (int i = 0; i < 3; ++i) {
      const PlanarCircle& c = res.point->circles[i];
      std::printf("  u = %+.6f  circle %+.4f(x^2+y^2) %+.4fx %+.4fy %+.4f\n", res.point->roots[i],
                  c.eps, c.A, c.B, c.C);
    }

  const WebFunction w = web_function(curve);
  const auto bases = sample_closure_bases(w, 1, 5);
  const HexPoint h = hex_point(w, bases[0].base[0], bases[0].base[1], bases[0].sheet);
  std::printf("hex residual at (%.4f, %.4f, %.4f): %.3e\n", h.u[0], h.u[1], h.u[2], h.residual);

  const ClosureReport r = thomsen_closure(w, bases[0].base, 0.1, bases[0].sheet);
  std::printf("hexagon at (%.3f, %.3f), eps 0.1: defect %.3e after %d Newton steps\n", r.base[0],
              r.base[1], r.defect, r.iterations);

  const InvariantsReport inv = invariants(fam);
  std::printf("S = %+d, Sbar = %+d, I = %.6f, Ibar = %.6f\n", inv.S, inv.Sbar, inv.I, inv.Ibar);
}
