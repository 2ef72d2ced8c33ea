#pragma once

// Run configuration: a flat, sectioned key = value file.
//
//   command = verify-hex          # top level: command, seed
//   [curve]                       # family + m/x0/y0, or X/Y/Z/U coefficient rows
//   [sampling] [closure] [thresholds] [render] [classify] [output]
//
// Numbers may be arithmetic expressions: 1/sqrt(3), sqrt(3)/2, 2^-3, pi/4.
// Unknown sections and keys are errors.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "circleweb/errors.hpp"
#include "circleweb/minkgeom.hpp"
#include "circleweb/polycurve.hpp"
#include "circleweb/render.hpp"
#include "circleweb/webcore.hpp"

namespace circleweb::cli {

enum class Command { VerifyIdeal, VerifyHex, Closure, Invariants, Classify, Render, All };

inline const std::vector<std::pair<std::string, Command>>& command_names() {
  static const std::vector<std::pair<std::string, Command>> names{
      {"verify-ideal", Command::VerifyIdeal}, {"verify-hex", Command::VerifyHex},
      {"closure", Command::Closure},          {"invariants", Command::Invariants},
      {"classify", Command::Classify},        {"render", Command::Render},
      {"all", Command::All}};
  return names;
}

inline std::string to_string(Command c) {
  for (const auto& [n, v] : command_names())
    if (v == c) return n;
  return "?";
}

struct Thresholds {
  double hex = 1e-6;
  double closure = 1e-7;
  double ideal = 1e-10;
};

struct ClosureSpec {
  int bases = 10;
  std::vector<double> eps{0.02, 0.05, 0.1};
  double u_min = -2.0, u_max = 2.0;
};

struct MoebiusStep {
  Generator generator;
  double s;
};

struct CurveSpec {
  std::optional<CurveFamily> family;  // named family or custom table
  double perturb = 0.0;
  std::uint64_t perturb_seed = 0;
  std::vector<MoebiusStep> moebius;
  /// Short name used in figure file names.
  std::string tag() const {
    std::string t = family ? circleweb::to_string(family->tag) : "curve";
    if (!moebius.empty()) t += "-moebius";
    if (perturb > 0) t += "-perturbed";
    return t;
  }
};

struct RunConfig {
  Command command = Command::All;
  std::uint64_t seed = 1;
  CurveSpec curve;
  SampleSpec sampling;
  ClosureSpec closure;
  Thresholds thresholds;
  RenderSpec render;
  std::vector<PlanarPoint> classify_points;
  std::string output_dir = ".";
  std::string report_name = "report.json";
};

// ------------------------------------------------------------ number parsing

namespace detail {

// Recursive descent over + - * / ^, parentheses, sqrt(), pi, inf.
class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  double parse() {
    const double v = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("bad number '" + std::string(s_) + "': " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  double sum() {
    double v = product();
    for (;;) {
      if (eat('+')) v += product();
      else if (eat('-')) v -= product();
      else return v;
    }
  }
  double product() {
    double v = unary();
    for (;;) {
      if (eat('*')) v *= unary();
      else if (eat('/')) v /= unary();
      else return v;
    }
  }
  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  double power() {
    const double base = atom();
    if (eat('^')) return std::pow(base, unary());
    return base;
  }
  double atom() {
    skip();
    if (eat('(')) {
      const double v = sum();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      if (name == "pi") return std::numbers::pi;
      if (name == "inf") return std::numeric_limits<double>::infinity();
      if (name == "sqrt") {
        if (!eat('(')) fail("sqrt needs '('");
        const double v = sum();
        if (!eat(')')) fail("missing ')'");
        if (v < 0) fail("sqrt of a negative number");
        return std::sqrt(v);
      }
      fail("unknown name '" + name + "'");
    }
    const std::string rest(s_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    const std::size_t used = end - rest.c_str();
    if (used == 0) fail("expected a number");
    pos_ += used;
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

// Whitespace-separated tokens, keeping parenthesized groups together.
inline std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth == 0 && std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace detail

inline double parse_number(const std::string& text) { return detail::ExprParser(text).parse(); }

// ------------------------------------------------------------------- parsing

namespace detail {

struct Entry {
  std::string value;
  int line;
};
using Section = std::map<std::string, Entry>;

class Reader {
 public:
  Reader(const std::map<std::string, Section>& sections, std::map<std::string, int> section_lines)
      : sections_(sections), section_lines_(std::move(section_lines)) {}

  bool has_section(const std::string& s) const { return sections_.count(s) > 0; }
  int section_line(const std::string& s) const {
    auto it = section_lines_.find(s);
    return it == section_lines_.end() ? 0 : it->second;
  }
  const Entry* find(const std::string& sec, const std::string& key) const {
    auto s = sections_.find(sec);
    if (s == sections_.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }
  std::string where(const std::string& sec, const std::string& key) const {
    return (sec.empty() ? key : "[" + sec + "] " + key);
  }

  double number(const std::string& sec, const std::string& key, double fallback) const {
    const Entry* e = find(sec, key);
    if (!e) return fallback;
    try {
      return parse_number(e->value);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(e->line, where(sec, key) + ": " + ex.what());
    }
  }
  std::vector<double> numbers(const std::string& sec, const std::string& key) const {
    const Entry* e = find(sec, key);
    if (!e) return {};
    std::vector<double> out;
    for (const auto& t : tokens(e->value)) {
      try {
        out.push_back(parse_number(t));
      } catch (const std::invalid_argument& ex) {
        throw ConfigError(e->line, where(sec, key) + ": " + ex.what());
      }
    }
    return out;
  }
  std::vector<double> numbers_exact(const std::string& sec, const std::string& key,
                                    std::size_t n) const {
    auto v = numbers(sec, key);
    if (!v.empty() && v.size() != n)
      throw ConfigError(find(sec, key)->line, where(sec, key) + ": expected " + std::to_string(n) +
                                                  " numbers, got " + std::to_string(v.size()));
    return v;
  }
  long long integer(const std::string& sec, const std::string& key, long long fallback,
                    long long min_value) const {
    const Entry* e = find(sec, key);
    if (!e) return fallback;
    const double v = number(sec, key, 0.0);
    if (v != std::floor(v) || std::abs(v) > 9e15)
      throw ConfigError(e->line, where(sec, key) + ": expected an integer");
    if (v < static_cast<double>(min_value))
      throw ConfigError(e->line, where(sec, key) + ": must be at least " + std::to_string(min_value));
    return static_cast<long long>(v);
  }
  bool boolean(const std::string& sec, const std::string& key, bool fallback) const {
    const Entry* e = find(sec, key);
    if (!e) return fallback;
    if (e->value == "true" || e->value == "yes" || e->value == "on") return true;
    if (e->value == "false" || e->value == "no" || e->value == "off") return false;
    throw ConfigError(e->line, where(sec, key) + ": expected true or false");
  }
  std::string text(const std::string& sec, const std::string& key, const std::string& fallback) const {
    const Entry* e = find(sec, key);
    return e ? e->value : fallback;
  }

 private:
  const std::map<std::string, Section>& sections_;
  std::map<std::string, int> section_lines_;
};

inline const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"", {"command", "seed"}},
      {"curve", {"family", "m", "x0", "y0", "X", "Y", "Z", "U", "perturb", "perturb_seed", "moebius"}},
      {"sampling", {"count", "window", "fold_tol", "max_attempts"}},
      {"closure", {"bases", "eps", "window"}},
      {"thresholds", {"hex", "closure", "ideal"}},
      {"render",
       {"window", "size", "per_band", "probe", "band1", "band2", "band3", "band1_range",
        "band2_range", "band3_range", "stroke_width", "colors", "boundary", "unit_circle",
        "grid"}},
      {"classify", {"points"}},
      {"output", {"dir", "report"}},
  };
  return keys;
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  using detail::Entry;
  std::map<std::string, detail::Section> sections;
  std::map<std::string, int> section_lines;
  sections[""];
  std::string current;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
      current = detail::trim(line.substr(1, line.size() - 2));
      if (!detail::allowed_keys().count(current) || current.empty())
        throw ConfigError(line_no, "unknown section [" + current + "]");
      if (section_lines.count(current))
        throw ConfigError(line_no, "section [" + current + "] appears twice");
      section_lines[current] = line_no;
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    const auto& allowed = detail::allowed_keys().at(current);
    if (!allowed.count(key))
      throw ConfigError(line_no, "unknown key '" + key + "'" +
                                     (current.empty() ? "" : " in [" + current + "]"));
    if (value.empty()) throw ConfigError(line_no, "key '" + key + "' has no value");
    if (sections[current].count(key))
      throw ConfigError(line_no, "key '" + key + "' given twice");
    sections[current][key] = Entry{value, line_no};
  }
  detail::Reader r(sections, section_lines);
  RunConfig cfg;

  // top level
  if (const Entry* e = r.find("", "command")) {
    bool found = false;
    for (const auto& [n, c] : command_names())
      if (n == e->value) {
        cfg.command = c;
        found = true;
      }
    if (!found) throw ConfigError(e->line, "unknown command '" + e->value + "'");
  } else {
    throw ConfigError(0, "missing top-level key 'command'");
  }
  cfg.seed = static_cast<std::uint64_t>(r.integer("", "seed", 1, 0));

  // curve
  if (!r.has_section("curve")) throw ConfigError(0, "missing [curve] block");
  {
    const int cl = r.section_line("curve");
    const Entry* fam = r.find("curve", "family");
    const bool table = r.find("curve", "X") || r.find("curve", "Y") || r.find("curve", "Z") ||
                       r.find("curve", "U");
    if (fam && table)
      throw ConfigError(fam->line, "[curve] gives both a family and a coefficient table");
    if (!fam && !table) throw ConfigError(cl, "[curve] needs either 'family' or X/Y/Z/U rows");
    if (fam) {
      const double m = r.number("curve", "m", std::nan(""));
      const double x0 = r.number("curve", "x0", std::nan(""));
      const double y0 = r.number("curve", "y0", std::nan(""));
      auto need = [&](const char* k) {
        if (!r.find("curve", k))
          throw ConfigError(fam->line, "family " + fam->value + " needs '" + k + "'");
      };
      auto forbid = [&](const char* k) {
        if (const Entry* e = r.find("curve", k))
          throw ConfigError(e->line, "family " + fam->value + " takes no '" + k + "'");
      };
      if (fam->value == "cubic") {
        need("m");
        need("x0");
        forbid("y0");
        cfg.curve.family = CurveFamily::cubic(m, x0);
      } else if (fam->value == "cubic1" || fam->value == "cubic2") {
        need("m");
        need("x0");
        need("y0");
        cfg.curve.family = fam->value == "cubic1" ? CurveFamily::cubic1(m, x0, y0)
                                                  : CurveFamily::cubic2(m, x0, y0);
      } else {
        throw ConfigError(fam->line, "unknown family '" + fam->value +
                                         "' (expected cubic, cubic1 or cubic2)");
      }
    } else {
      for (const char* k : {"m", "x0", "y0"})
        if (const Entry* e = r.find("curve", k))
          throw ConfigError(e->line, std::string("'") + k + "' needs a named family");
      std::array<std::vector<double>, 4> rows;
      const char* names[4] = {"X", "Y", "Z", "U"};
      for (int i = 0; i < 4; ++i) {
        if (!r.find("curve", names[i]))
          throw ConfigError(cl, std::string("[curve] coefficient table is missing row ") + names[i]);
        rows[i] = r.numbers("curve", names[i]);
      }
      cfg.curve.family = CurveFamily::custom(rows);
    }
    cfg.curve.perturb = r.number("curve", "perturb", 0.0);
    if (cfg.curve.perturb < 0)
      throw ConfigError(r.find("curve", "perturb")->line, "[curve] perturb must be non-negative");
    cfg.curve.perturb_seed = static_cast<std::uint64_t>(r.integer("curve", "perturb_seed", 0, 0));
    if (const Entry* e = r.find("curve", "moebius")) {
      for (const auto& step : detail::split(e->value, ',')) {
        const auto parts = detail::tokens(step);
        if (parts.size() != 2)
          throw ConfigError(e->line, "moebius steps look like 'Bz 0.3', got '" + step + "'");
        const auto g = generator_from_string(parts[0]);
        if (!g) throw ConfigError(e->line, "unknown generator '" + parts[0] + "'");
        double s = 0;
        try {
          s = parse_number(parts[1]);
        } catch (const std::invalid_argument& ex) {
          throw ConfigError(e->line, ex.what());
        }
        cfg.curve.moebius.push_back({*g, s});
      }
    }
  }

  // sampling
  cfg.sampling.count = static_cast<int>(r.integer("sampling", "count", 100, 1));
  if (auto w = r.numbers_exact("sampling", "window", 2); !w.empty()) {
    cfg.sampling.u_min = w[0];
    cfg.sampling.u_max = w[1];
  }
  cfg.sampling.fold_tol = r.number("sampling", "fold_tol", 1e-6);
  cfg.sampling.max_attempts = static_cast<int>(r.integer("sampling", "max_attempts", 0, 0));
  cfg.sampling.seed = cfg.seed;

  // closure
  cfg.closure.bases = static_cast<int>(r.integer("closure", "bases", 10, 1));
  if (auto e = r.numbers("closure", "eps"); !e.empty()) {
    for (double v : e)
      if (!(v > 0)) throw ConfigError(r.find("closure", "eps")->line, "[closure] eps must be positive");
    cfg.closure.eps = e;
  }
  if (auto w = r.numbers_exact("closure", "window", 2); !w.empty()) {
    cfg.closure.u_min = w[0];
    cfg.closure.u_max = w[1];
  }

  // thresholds
  cfg.thresholds.hex = r.number("thresholds", "hex", 1e-6);
  cfg.thresholds.closure = r.number("thresholds", "closure", 1e-7);
  cfg.thresholds.ideal = r.number("thresholds", "ideal", 1e-10);

  // render
  RenderSpec& rs = cfg.render;
  if (auto w = r.numbers_exact("render", "window", 4); !w.empty()) {
    rs.view.x_min = w[0];
    rs.view.x_max = w[1];
    rs.view.y_min = w[2];
    rs.view.y_max = w[3];
    if (!(w[1] > w[0] && w[3] > w[2]))
      throw ConfigError(r.find("render", "window")->line, "[render] window must be x_min x_max y_min y_max");
  }
  if (auto s = r.numbers_exact("render", "size", 2); !s.empty()) {
    if (!(s[0] >= 1 && s[1] >= 1) || s[0] != std::floor(s[0]) || s[1] != std::floor(s[1]))
      throw ConfigError(r.find("render", "size")->line, "[render] size must be two positive integers");
    rs.view.width = static_cast<int>(s[0]);
    rs.view.height = static_cast<int>(s[1]);
  }
  rs.per_band = static_cast<int>(r.integer("render", "per_band", 20, 0));
  if (auto p = r.numbers_exact("render", "probe", 2); !p.empty()) rs.probe = {p[0], p[1]};
  for (int b = 0; b < 3; ++b) {
    const std::string key = "band" + std::to_string(b + 1);
    rs.bands[b].values = r.numbers("render", key);
    if (auto rg = r.numbers_exact("render", key + "_range", 3); !rg.empty()) {
      if (!rs.bands[b].values.empty())
        throw ConfigError(r.find("render", key)->line, key + " and " + key + "_range are exclusive");
      if (rg[2] < 1 || rg[2] != std::floor(rg[2]))
        throw ConfigError(r.find("render", key + "_range")->line,
                          key + "_range is 'lo hi count' with a positive integer count");
      rs.bands[b].range = std::make_pair(rg[0], rg[1]);
      rs.bands[b].count = static_cast<int>(rg[2]);
    }
  }
  rs.stroke_width = r.number("render", "stroke_width", rs.stroke_width);
  if (const detail::Entry* e = r.find("render", "colors")) {
    const auto c = detail::tokens(e->value);
    if (c.size() != 3) throw ConfigError(e->line, "[render] colors needs three entries");
    for (int b = 0; b < 3; ++b) rs.colors[b] = c[b];
  }
  rs.boundary = r.boolean("render", "boundary", false);
  rs.unit_circle = r.boolean("render", "unit_circle", false);
  rs.boundary_grid = static_cast<int>(r.integer("render", "grid", 160, 2));

  // classify
  if (const detail::Entry* e = r.find("classify", "points")) {
    for (const auto& pt : detail::split(e->value, ',')) {
      const auto xy = detail::tokens(pt);
      if (xy.size() != 2) throw ConfigError(e->line, "[classify] points look like 'x y, x y'");
      try {
        cfg.classify_points.push_back({parse_number(xy[0]), parse_number(xy[1])});
      } catch (const std::invalid_argument& ex) {
        throw ConfigError(e->line, ex.what());
      }
    }
  }
  if (cfg.command == Command::Classify && cfg.classify_points.empty())
    throw ConfigError(0, "command classify needs [classify] points");

  cfg.output_dir = r.text("output", "dir", ".");
  cfg.report_name = r.text("output", "report", "report.json");
  return cfg;
}

}  // namespace circleweb::cli
