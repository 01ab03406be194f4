#include "declab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "declab/hash.hpp"

namespace declab {

namespace {
constexpr const char* kModule = "cli-harness";

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(Errc::ParseError, kModule, "line " + std::to_string(line) + ": " + msg);
}

[[noreturn]] void value_fail(const std::string& key, const std::string& msg) {
  throw Error(Errc::ValidationError, kModule, key + ": " + msg);
}

double parse_num(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) value_fail(key, "trailing characters in '" + v + "'");
    return x;
  } catch (const Error&) {
    throw;
  } catch (...) {
    value_fail(key, "not a number: '" + v + "'");
  }
}

// "auto" maps to the 0 sentinel
double parse_num_or_auto(const std::string& key, const std::string& v) {
  if (v == "auto") return 0.0;
  return parse_num(key, v);
}

long parse_int(const std::string& key, const std::string& v) {
  double x = parse_num(key, v);
  long i = static_cast<long>(std::llround(x));
  if (std::abs(x - i) > 1e-12) value_fail(key, "expected an integer, got '" + v + "'");
  return i;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  value_fail(key, "expected a boolean, got '" + v + "'");
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_or_auto(double x) { return x == 0.0 ? "auto" : fmt(x); }
} // namespace

double ExperimentConfig::resolved_box_halfwidth() const {
  if (box_halfwidth > 0.0) return box_halfwidth;
  return support_radius + 0.5 * t_end + 10.0 * spacing;
}

double ExperimentConfig::resolved_fit_t_min() const {
  if (fit_t_min > 0.0) return fit_t_min;
  return std::max(10.0, 2.0 * (damper_radius + support_radius));
}

double ExperimentConfig::resolved_fit_t_max() const {
  if (fit_t_max > 0.0) return fit_t_max;
  return 0.9 * t_end;
}

double ExperimentConfig::resolved_local_radius() const {
  return local_radius > 0.0 ? local_radius : support_radius;
}

DomainSpec ExperimentConfig::domain_spec() const {
  DomainSpec d;
  d.dim = dimension;
  d.box_halfwidth = resolved_box_halfwidth();
  d.spacing = spacing;
  d.obstacles = obstacles;
  d.damper_radius = damper_radius;
  d.support_radius = support_radius;
  return d;
}

DomainSpec ExperimentConfig::resolvent_domain_spec() const {
  DomainSpec d;
  d.dim = dimension;
  d.box_halfwidth = resolvent.box_halfwidth;
  d.spacing = resolvent.spacing;
  d.obstacles = obstacles;
  d.damper_radius = damper_radius;
  d.support_radius = support_radius;
  return d;
}

DamperSpec ExperimentConfig::damper_spec() const {
  DamperSpec d;
  if (damper_kind == "constant_one") {
    d.kind = DamperKind::ConstantOne;
  } else if (damper_kind == "exterior_smooth") {
    d.kind = DamperKind::ExteriorSmooth;
  } else if (damper_kind == "exterior_with_hole") {
    d.kind = DamperKind::ExteriorWithHole;
  } else if (damper_kind == "table") {
    d.kind = DamperKind::Table;
  } else {
    value_fail("damper.kind", "unknown damper kind '" + damper_kind + "'");
  }
  d.inner_radius = damper_inner_radius;
  d.hole = damper_hole;
  return d;
}

BumpSpec ExperimentConfig::bump_spec() const {
  BumpSpec b;
  if (initial_kind == "bump_u0") {
    b.kind = BumpKind::BumpU0;
  } else if (initial_kind == "bump_u1") {
    b.kind = BumpKind::BumpU1;
  } else if (initial_kind == "bump_both") {
    b.kind = BumpKind::BumpBoth;
  } else {
    value_fail("initial.kind", "unknown initial-data kind '" + initial_kind + "'");
  }
  b.cx = bump_cx;
  b.cy = bump_cy;
  b.width = bump_width;
  return b;
}

RhsFamily ExperimentConfig::rhs_family() const {
  if (resolvent.rhs == "bump") return RhsFamily::Bump;
  if (resolvent.rhs == "spread") return RhsFamily::Spread;
  if (resolvent.rhs == "random") return RhsFamily::RandomBumps;
  value_fail("resolvent.rhs", "unknown rhs family '" + resolvent.rhs + "'");
}

void ExperimentConfig::validate() const {
  if (dimension != 1 && dimension != 2) value_fail("dimension", "must be 1 or 2");
  if (spacing <= 0.0) value_fail("spacing", "must be positive");
  if (box_halfwidth < 0.0) value_fail("box_halfwidth", "must be positive or auto");
  if (damper_radius <= 0.0) value_fail("damper_radius", "must be positive");
  if (support_radius <= 0.0) value_fail("support_radius", "must be positive");
  for (const auto& o : obstacles)
    if (o.radius <= 0.0) value_fail("obstacle", "radius must be positive");
  if (t_end <= 0.0) value_fail("t_end", "must be positive");
  if (cfl_safety <= 0.0 || cfl_safety > 1.0) value_fail("cfl_safety", "must lie in (0,1]");
  if (observer_stride < 0) value_fail("observer_stride", "must be >= 0");
  if (bump_width <= 0.0) value_fail("width", "must be positive");
  if (fit_t_min < 0.0 || fit_t_max < 0.0) value_fail("fit window", "must be positive or auto");
  if (fit_t_min > 0.0 && fit_t_max > 0.0 && fit_t_min >= fit_t_max)
    value_fail("fit window", "needs fit_t_min < fit_t_max");
  if (gcc.n_pos < 1 || gcc.n_dir < 1) value_fail("gcc sampling", "counts must be >= 1");
  if (gcc.t_max <= 0.0) value_fail("gcc_t_max", "must be positive");
  if (gcc.eps_omega <= 0.0) value_fail("gcc_eps_omega", "must be positive");
  if (resolvent.box_halfwidth <= 0.0) value_fail("resolvent.box_halfwidth", "must be positive");
  if (resolvent.spacing <= 0.0) value_fail("resolvent.spacing", "must be positive");
  if (resolvent.tolerance <= 0.0) value_fail("resolvent.tolerance", "must be positive");
  for (const FrequencyBand* b : {&resolvent.intermediate, &resolvent.high}) {
    if (b->n_samples < 1) value_fail("resolvent band", "needs at least one sample");
    if (!(b->s_min > 0.0) || !(b->s_max >= b->s_min))
      value_fail("resolvent band", "needs 0 < s_min <= s_max");
  }
  if (resolvent.probe_delta <= 0.0) value_fail("probe_delta", "must be positive");
  if (resolvent.probe_n_s < 1) value_fail("probe_n_s", "must be >= 1");
  for (double b : resolvent.probe_betas)
    if (!(b > 0.0) || b > resolvent.probe_delta)
      value_fail("probe_betas", "must lie in (0, probe_delta]");
  if (out_dir.empty()) value_fail("directory", "must not be empty");
  // mapping checks throw on unknown names
  (void)damper_spec();
  (void)bump_spec();
  (void)rhs_family();
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::string section;

  auto want_values = [&](const std::string& key, const std::vector<std::string>& vals,
                         std::size_t n) {
    if (vals.size() != n)
      value_fail(key, "expected " + std::to_string(n) + " value(s), got " +
                          std::to_string(vals.size()));
  };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') parse_fail(lineno, "unterminated section header");
      section = line.substr(1, line.size() - 2);
      if (section != "domain" && section != "damper" && section != "initial" &&
          section != "run" && section != "resolvent" && section != "output")
        parse_fail(lineno, "unknown section [" + section + "]");
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(lineno, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) parse_fail(lineno, "empty key");
    if (section.empty()) parse_fail(lineno, "key outside of any section");
    std::vector<std::string> vals = split_ws(value);

    if (section == "domain") {
      if (key == "dimension") {
        c.dimension = static_cast<int>(parse_int(key, value));
      } else if (key == "box_halfwidth") {
        c.box_halfwidth = parse_num_or_auto(key, value);
      } else if (key == "spacing") {
        c.spacing = parse_num(key, value);
      } else if (key == "obstacle") {
        want_values(key, vals, 3);
        c.obstacles.push_back(
            {parse_num(key, vals[0]), parse_num(key, vals[1]), parse_num(key, vals[2])});
      } else if (key == "damper_radius") {
        c.damper_radius = parse_num(key, value);
      } else if (key == "support_radius") {
        c.support_radius = parse_num(key, value);
      } else {
        parse_fail(lineno, "unknown key '" + key + "' in [domain]");
      }
    } else if (section == "damper") {
      if (key == "kind") {
        c.damper_kind = value;
      } else if (key == "inner_radius") {
        c.damper_inner_radius = parse_num(key, value);
      } else if (key == "hole") {
        want_values(key, vals, 4);
        c.damper_hole = {parse_num(key, vals[0]), parse_num(key, vals[1]),
                         parse_num(key, vals[2]), parse_num(key, vals[3])};
      } else {
        parse_fail(lineno, "unknown key '" + key + "' in [damper]");
      }
    } else if (section == "initial") {
      if (key == "kind") {
        c.initial_kind = value;
      } else if (key == "center") {
        if (vals.size() != 1 && vals.size() != 2)
          value_fail(key, "expected 1 or 2 coordinates");
        c.bump_cx = parse_num(key, vals[0]);
        c.bump_cy = vals.size() == 2 ? parse_num(key, vals[1]) : 0.0;
      } else if (key == "width") {
        c.bump_width = parse_num(key, value);
      } else {
        parse_fail(lineno, "unknown key '" + key + "' in [initial]");
      }
    } else if (section == "run") {
      if (key == "scenario") {
        c.scenario = value;
      } else if (key == "t_end") {
        c.t_end = parse_num(key, value);
      } else if (key == "cfl_safety") {
        c.cfl_safety = parse_num(key, value);
      } else if (key == "observer_stride") {
        c.observer_stride = value == "auto" ? 0 : parse_int(key, value);
      } else if (key == "fit_t_min") {
        c.fit_t_min = parse_num_or_auto(key, value);
      } else if (key == "fit_t_max") {
        c.fit_t_max = parse_num_or_auto(key, value);
      } else if (key == "local_radius") {
        c.local_radius = parse_num_or_auto(key, value);
      } else if (key == "per_step_dissipation") {
        c.per_step_dissipation = parse_bool(key, value);
      } else if (key == "cutoff_diagnostic") {
        c.cutoff_diagnostic = parse_bool(key, value);
      } else if (key == "gcc_n_pos") {
        c.gcc.n_pos = static_cast<int>(parse_int(key, value));
      } else if (key == "gcc_n_dir") {
        c.gcc.n_dir = static_cast<int>(parse_int(key, value));
      } else if (key == "gcc_t_max") {
        c.gcc.t_max = parse_num(key, value);
      } else if (key == "gcc_eps_omega") {
        c.gcc.eps_omega = parse_num(key, value);
      } else if (key == "gcc_escape_radius") {
        c.gcc.escape_radius = parse_num(key, value);
      } else {
        parse_fail(lineno, "unknown key '" + key + "' in [run]");
      }
    } else if (section == "resolvent") {
      if (key == "box_halfwidth") {
        c.resolvent.box_halfwidth = parse_num(key, value);
      } else if (key == "spacing") {
        c.resolvent.spacing = parse_num(key, value);
      } else if (key == "intermediate_band" || key == "high_band") {
        want_values(key, vals, 3);
        FrequencyBand b{parse_num(key, vals[0]), parse_num(key, vals[1]),
                        static_cast<int>(parse_int(key, vals[2]))};
        (key == "intermediate_band" ? c.resolvent.intermediate : c.resolvent.high) = b;
      } else if (key == "tolerance") {
        c.resolvent.tolerance = parse_num(key, value);
      } else if (key == "rhs") {
        c.resolvent.rhs = value;
      } else if (key == "probe") {
        c.resolvent.probe = parse_bool(key, value);
      } else if (key == "probe_delta") {
        c.resolvent.probe_delta = parse_num(key, value);
      } else if (key == "probe_chi_radius") {
        c.resolvent.probe_chi_radius = parse_num_or_auto(key, value);
      } else if (key == "probe_betas") {
        c.resolvent.probe_betas.clear();
        for (const auto& v : vals) c.resolvent.probe_betas.push_back(parse_num(key, v));
      } else if (key == "probe_n_s") {
        c.resolvent.probe_n_s = static_cast<int>(parse_int(key, value));
      } else {
        parse_fail(lineno, "unknown key '" + key + "' in [resolvent]");
      }
    } else if (section == "output") {
      if (key == "directory") {
        c.out_dir = value;
      } else if (key == "seed") {
        try {
          c.seed = std::stoull(value);
        } catch (...) {
          value_fail(key, "not a valid seed: '" + value + "'");
        }
      } else if (key == "snapshot_times") {
        c.snapshot_times.clear();
        for (const auto& v : vals) c.snapshot_times.push_back(parse_num(key, v));
      } else {
        parse_fail(lineno, "unknown key '" + key + "' in [output]");
      }
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, kModule, "cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "[domain]\n";
  o << "dimension = " << c.dimension << "\n";
  o << "box_halfwidth = " << fmt_or_auto(c.box_halfwidth) << "\n";
  o << "spacing = " << fmt(c.spacing) << "\n";
  for (const auto& ob : c.obstacles)
    o << "obstacle = " << fmt(ob.cx) << " " << fmt(ob.cy) << " " << fmt(ob.radius) << "\n";
  o << "damper_radius = " << fmt(c.damper_radius) << "\n";
  o << "support_radius = " << fmt(c.support_radius) << "\n";
  o << "\n[damper]\n";
  o << "kind = " << c.damper_kind << "\n";
  o << "inner_radius = " << fmt(c.damper_inner_radius) << "\n";
  o << "hole = " << fmt(c.damper_hole.x0) << " " << fmt(c.damper_hole.x1) << " "
    << fmt(c.damper_hole.y0) << " " << fmt(c.damper_hole.y1) << "\n";
  o << "\n[initial]\n";
  o << "kind = " << c.initial_kind << "\n";
  o << "center = " << fmt(c.bump_cx) << " " << fmt(c.bump_cy) << "\n";
  o << "width = " << fmt(c.bump_width) << "\n";
  o << "\n[run]\n";
  o << "scenario = " << c.scenario << "\n";
  o << "t_end = " << fmt(c.t_end) << "\n";
  o << "cfl_safety = " << fmt(c.cfl_safety) << "\n";
  o << "observer_stride = " << (c.observer_stride == 0 ? std::string("auto")
                                                       : std::to_string(c.observer_stride))
    << "\n";
  o << "fit_t_min = " << fmt_or_auto(c.fit_t_min) << "\n";
  o << "fit_t_max = " << fmt_or_auto(c.fit_t_max) << "\n";
  o << "local_radius = " << fmt_or_auto(c.local_radius) << "\n";
  o << "per_step_dissipation = " << (c.per_step_dissipation ? "true" : "false") << "\n";
  o << "cutoff_diagnostic = " << (c.cutoff_diagnostic ? "true" : "false") << "\n";
  o << "gcc_n_pos = " << c.gcc.n_pos << "\n";
  o << "gcc_n_dir = " << c.gcc.n_dir << "\n";
  o << "gcc_t_max = " << fmt(c.gcc.t_max) << "\n";
  o << "gcc_eps_omega = " << fmt(c.gcc.eps_omega) << "\n";
  o << "gcc_escape_radius = " << fmt(c.gcc.escape_radius) << "\n";
  o << "\n[resolvent]\n";
  o << "box_halfwidth = " << fmt(c.resolvent.box_halfwidth) << "\n";
  o << "spacing = " << fmt(c.resolvent.spacing) << "\n";
  o << "intermediate_band = " << fmt(c.resolvent.intermediate.s_min) << " "
    << fmt(c.resolvent.intermediate.s_max) << " " << c.resolvent.intermediate.n_samples << "\n";
  o << "high_band = " << fmt(c.resolvent.high.s_min) << " " << fmt(c.resolvent.high.s_max) << " "
    << c.resolvent.high.n_samples << "\n";
  o << "tolerance = " << fmt(c.resolvent.tolerance) << "\n";
  o << "rhs = " << c.resolvent.rhs << "\n";
  o << "probe = " << (c.resolvent.probe ? "true" : "false") << "\n";
  o << "probe_delta = " << fmt(c.resolvent.probe_delta) << "\n";
  o << "probe_chi_radius = " << fmt_or_auto(c.resolvent.probe_chi_radius) << "\n";
  o << "probe_betas =";
  for (double b : c.resolvent.probe_betas) o << " " << fmt(b);
  o << "\n";
  o << "probe_n_s = " << c.resolvent.probe_n_s << "\n";
  o << "\n[output]\n";
  o << "directory = " << c.out_dir << "\n";
  o << "seed = " << c.seed << "\n";
  if (!c.snapshot_times.empty()) {
    o << "snapshot_times =";
    for (double t : c.snapshot_times) o << " " << fmt(t);
    o << "\n";
  }
  return o.str();
}

std::uint64_t config_hash(const ExperimentConfig& c) { return fnv1a64(serialize_config(c)); }

} // namespace declab
