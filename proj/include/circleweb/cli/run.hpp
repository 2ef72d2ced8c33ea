#pragma once

// Executes a RunConfig: builds the curve, runs the requested checks and
// collects a JSON report plus figure files.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "circleweb/cli/config.hpp"
#include "circleweb/minkgeom.hpp"
#include "circleweb/polycurve.hpp"
#include "circleweb/render.hpp"
#include "circleweb/webcore.hpp"

namespace circleweb::cli {

using nlohmann::json;

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailed = 2;
inline constexpr int kExitInvalid = 3;

struct Artifact {
  std::string name;
  std::string content;
};

struct RunOutcome {
  int exit_code = kExitPass;
  json report;
  std::vector<Artifact> artifacts;  // file name relative to the output dir
};

struct BuiltCurve {
  RationalCurve curve;
  MoebiusMap moebius;
};

/// Family curve, then the seeded perturbation, then the Moebius steps in order.
inline BuiltCurve build_curve(const CurveSpec& spec) {
  RationalCurve c = family_curve(*spec.family);
  if (spec.perturb > 0) c = perturb_curve(c, spec.perturb, spec.perturb_seed);
  MoebiusMap M;
  for (const auto& step : spec.moebius) M = M.then(moebius_exp(step.generator, step.s));
  if (!spec.moebius.empty()) c = transform_curve(M, c);
  return {c, M};
}

namespace detail {

inline json poly_json(const Poly1& p) { return p.coeffs(); }

inline json point_json(const HomPoint& p) {
  const Vec4& v = p.coords();
  return json::array({v[0], v[1], v[2], v[3]});
}

inline json circle_json(const PlanarCircle& c) {
  return {{"eps", c.eps}, {"A", c.A}, {"B", c.B}, {"C", c.C}};
}

inline json curve_json(const CurveSpec& spec, const RationalCurve& c) {
  json j;
  const CurveFamily& f = *spec.family;
  j["family"] = circleweb::to_string(f.tag);
  j["tag"] = spec.tag();
  if (f.tag != FamilyTag::Custom) {
    j["params"]["m"] = f.m;
    j["params"]["x0"] = f.x0;
    if (f.tag != FamilyTag::Cubic) j["params"]["y0"] = f.y0;
  }
  if (spec.perturb > 0) j["perturbation"] = {{"magnitude", spec.perturb}, {"seed", spec.perturb_seed}};
  if (!spec.moebius.empty()) {
    json steps = json::array();
    for (const auto& s : spec.moebius) steps.push_back({{"generator", circleweb::to_string(s.generator)}, {"s", s.s}});
    j["moebius"] = steps;
  }
  j["components"] = {{"X", poly_json(c[0])}, {"Y", poly_json(c[1])}, {"Z", poly_json(c[2])},
                     {"U", poly_json(c[3])}};
  j["degree"] = c.max_degree();
  return j;
}

class Checks {
 public:
  void add(const std::string& name, double value, double threshold, bool passed) {
    list_.push_back({{"name", name}, {"value", value}, {"threshold", threshold}, {"passed", passed}});
    all_ &= passed;
  }
  void fail(const std::string& name, const std::string& why) {
    list_.push_back({{"name", name}, {"error", why}, {"passed", false}});
    all_ = false;
  }
  bool all_passed() const { return all_; }
  const json& list() const { return list_; }

 private:
  json list_ = json::array();
  bool all_ = true;
};

// Largest pairing of the polar point with 8 lifted points of its drawn circle.
inline double drawn_incidence(const DrawnCircle& d, const Viewport& v) {
  const Vec4 pv = d.polar.coords() / d.polar.coords().norm();
  const HomPoint p(pv);
  std::vector<PlanarPoint> pts;
  if (d.circle.is_line()) {
    const auto seg = circleweb::detail::clip_line(d.circle.A, d.circle.B, d.circle.C, v);
    if (!seg) return 0.0;
    for (int k = 0; k < 8; ++k) {
      const double s = k / 7.0;
      pts.push_back({(*seg)[0].x + s * ((*seg)[1].x - (*seg)[0].x), (*seg)[0].y + s * ((*seg)[1].y - (*seg)[0].y)});
    }
  } else {
    const PlanarPoint c = d.circle.center();
    const double r = d.circle.radius();
    for (int k = 0; k < 8; ++k) {
      const double a = 2 * std::numbers::pi * k / 8;
      pts.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
    }
  }
  double worst = 0.0;
  for (const auto& q : pts) {
    const SpherePoint s = stereo_lift(q);
    worst = std::max(worst, std::abs(pair(s.homogeneous(), p)) / std::sqrt(2.0));
  }
  return worst;
}

}  // namespace detail

/// Runs the configured command. Invalid input (bad parameters, a family
/// without tabulated data for the command) surfaces as an exception derived
/// from BadParams, BadCurve, NotAvailable or ConfigError.
inline RunOutcome run(const RunConfig& cfg) {
  RunOutcome out;
  const BuiltCurve built = build_curve(cfg.curve);
  const RationalCurve& curve = built.curve;
  const CurveFamily& fam = *cfg.curve.family;
  json& rep = out.report;
  rep["command"] = to_string(cfg.command);
  rep["seed"] = cfg.seed;
  rep["curve"] = detail::curve_json(cfg.curve, curve);
  rep["thresholds"] = {{"hex", cfg.thresholds.hex},
                       {"closure", cfg.thresholds.closure},
                       {"ideal", cfg.thresholds.ideal}};
  rep["residual_normalization"] =
      "h / (|t1|+|t2|+|t3|+|t4|) where h = t1+t2+t3+t4 is the mixed log-derivative of u1F/u2F";
  detail::Checks checks;

  const Command cmd = cfg.command;
  const bool all = cmd == Command::All;
  const bool named = fam.tag != FamilyTag::Custom;

  if (cmd == Command::VerifyIdeal || (all && named)) {
    auto forms = ideal_generators(fam);  // NotAvailable for custom curves
    json list = json::array();
    for (auto& g : forms) {
      if (!cfg.curve.moebius.empty()) g = transform_form(built.moebius, g);
      const Poly1 comp = compose_ideal(g, curve);
      const double res = ideal_residual(g, curve);
      const bool ok = res <= cfg.thresholds.ideal;
      std::vector<double> coeffs(2 * curve.max_degree() + 1, 0.0);
      for (int k = 0; k <= comp.degree(); ++k) coeffs[k] = comp[k];
      list.push_back({{"label", g.label}, {"composition", coeffs}, {"relative_residual", res}, {"passed", ok}});
      checks.add("ideal " + g.label, res, cfg.thresholds.ideal, ok);
    }
    rep["ideal"] = list;
  }

  std::optional<WebFunction> web;
  auto get_web = [&]() -> const WebFunction& {
    if (!web) web = web_function(curve);
    return *web;
  };

  if (cmd == Command::VerifyHex || all) {
    try {
      const HexReport h = hex_certify(get_web(), cfg.sampling);
      rep["samples"] = h.samples;
      rep["max_residual"] = h.max_residual;
      rep["median_residual"] = h.median_residual;
      rep["rejected"] = h.rejected;
      rep["attempts"] = h.attempts;
      checks.add("hex max residual", h.max_residual, cfg.thresholds.hex,
                 h.max_residual <= cfg.thresholds.hex);
    } catch (const InsufficientSamples& e) {
      rep["samples"] = 0;
      checks.fail("hex max residual", e.what());
    }
  }

  if (cmd == Command::Closure || all) {
    const double eps_max = *std::max_element(cfg.closure.eps.begin(), cfg.closure.eps.end());
    json defects = json::array();
    json details = json::array();
    double worst = 0.0;
    std::vector<double> exponents;
    try {
      const auto bases = sample_closure_bases(get_web(), cfg.closure.bases, cfg.seed,
                                              cfg.closure.u_min, cfg.closure.u_max, eps_max);
      bool failed = false;
      for (const auto& b : bases) {
        std::vector<std::pair<double, double>> series;
        for (double eps : cfg.closure.eps) {
          try {
            const ClosureReport r = thomsen_closure(get_web(), b.base, eps, b.sheet);
            defects.push_back(r.defect);
            worst = std::max(worst, r.defect);
            series.emplace_back(eps, r.defect);
            details.push_back({{"base", {b.base[0], b.base[1]}}, {"u3", r.base_u3}, {"eps", eps},
                               {"defect", r.defect}, {"iterations", r.iterations}});
          } catch (const Error& e) {
            failed = true;
            details.push_back({{"base", {b.base[0], b.base[1]}}, {"eps", eps}, {"error", e.what()}});
          }
        }
        const double k = defect_scaling_exponent(series);
        if (std::isfinite(k)) exponents.push_back(k);
      }
      if (failed)
        checks.fail("closure defect", "a hexagon could not be traced on its sheet");
      else
        checks.add("closure defect", worst, cfg.thresholds.closure, worst <= cfg.thresholds.closure);
    } catch (const InsufficientSamples& e) {
      checks.fail("closure defect", e.what());
    }
    rep["defects"] = defects;
    rep["closure"] = {{"eps", cfg.closure.eps}, {"max_defect", worst}, {"hexagons", details},
                      {"scaling_exponent", exponents.empty() ? json(nullptr) : json(median_of(exponents))}};
  }

  if (cmd == Command::Invariants || (all && fam.tag == FamilyTag::Cubic)) {
    if (fam.tag != FamilyTag::Cubic)
      throw NotAvailable("invariants: defined for the cubic family only");
    try {
      const InvariantsReport inv = invariants(curve);
      const double I_expected = 1 + fam.m * fam.m * fam.x0 * fam.x0;
      const double Ibar_expected = 1 - fam.x0 * fam.x0;
      rep["invariants"] = {{"S", inv.S},
                           {"Sbar", inv.Sbar},
                           {"I", inv.I},
                           {"Ibar", inv.Ibar},
                           {"expected", {{"S", -1}, {"Sbar", 1}, {"I", I_expected}, {"Ibar", Ibar_expected}}},
                           {"points",
                            {{"p0", detail::point_json(inv.p0)},
                             {"pbar0", detail::point_json(inv.pbar0)},
                             {"c1", detail::point_json(inv.c1)},
                             {"c2", detail::point_json(inv.c2)},
                             {"p0_prime", detail::point_json(inv.p0_prime)},
                             {"pbar0_prime", detail::point_json(inv.pbar0_prime)}}}};
      checks.add("invariant S", inv.S, -1, inv.S == -1);
      checks.add("invariant Sbar", inv.Sbar, 1, inv.Sbar == 1);
      const double dI = std::abs(inv.I - I_expected), dIbar = std::abs(inv.Ibar - Ibar_expected);
      checks.add("invariant I deviation", dI, 1e-10, dI <= 1e-10);
      checks.add("invariant Ibar deviation", dIbar, 1e-10, dIbar <= 1e-10);
    } catch (const DegenerateConfig& e) {
      checks.fail("invariants", e.what());
    }
  }

  if (cmd == Command::Classify || (all && !cfg.classify_points.empty())) {
    json list = json::array();
    for (const auto& p : cfg.classify_points) {
      const auto res = solve_web_point(curve, p);
      json entry{{"point", {p.x, p.y}}, {"class", to_string(res.cls)}};
      entry["discriminant"] = discriminant_sign(curve, p);
      if (res.point) {
        json roots = json::array(), circles = json::array();
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) {
          roots.push_back(std::isinf(res.point->roots[i]) ? json("inf") : json(res.point->roots[i]));
          circles.push_back(detail::circle_json(res.point->circles[i]));
          worst = std::max(worst, res.point->circles[i].residual(p));
        }
        entry["roots"] = roots;
        entry["circles"] = circles;
        entry["incidence"] = worst;
        checks.add("circles through (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")",
                   worst, 1e-8, worst <= 1e-8);
      }
      list.push_back(entry);
    }
    rep["classify"] = list;
  }

  if (cmd == Command::Render || all) {
    const std::string file = to_string(cmd) + "-" + cfg.curve.tag() + ".svg";
    try {
      const RenderResult r = render_web(curve, cfg.render);
      double worst = 0.0;
      for (const auto& d : r.drawn) worst = std::max(worst, detail::drawn_incidence(d, cfg.render.view));
      rep["render"] = {{"file", file},
                       {"drawn", r.drawn.size()},
                       {"imaginary", r.imaginary},
                       {"outside", r.outside},
                       {"boundary_segments", r.boundary_segments},
                       {"incidence", worst}};
      checks.add("render incidence", worst, 1e-8, worst <= 1e-8);
      out.artifacts.push_back({file, r.svg});
    } catch (const EmptyPicture& e) {
      checks.fail("render", e.what());
    }
  }

  rep["checks"] = checks.list();
  rep["passed"] = checks.all_passed();
  out.exit_code = checks.all_passed() ? kExitPass : kExitFailed;
  return out;
}

/// Writes the report and the artifacts into `dir`, creating it if needed.
inline void write_outputs(const RunOutcome& o, const std::string& dir, const std::string& report_name) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError(0, "cannot create output directory '" + dir + "': " + ec.message());
  auto write = [&](const std::string& name, const std::string& text) {
    const fs::path p = fs::path(dir) / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError(0, "cannot write '" + p.string() + "'");
    f << text;
    if (!f) throw ConfigError(0, "write failed for '" + p.string() + "'");
  };
  write(report_name, o.report.dump(2) + "\n");
  for (const auto& a : o.artifacts) write(a.name, a.content);
}

}  // namespace circleweb::cli
