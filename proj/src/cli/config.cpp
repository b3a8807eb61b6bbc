#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "udw/cli.hpp"

namespace udw::cli {

std::string Diagnostic::format(std::string_view source) const {
  std::ostringstream os;
  os << source;
  if (line > 0) os << ':' << line << ':' << column;
  os << ": ";
  if (!key.empty()) os << key << ": ";
  os << message;
  return os.str();
}

namespace {

std::string join(const std::string& source, const std::string& scenario, const std::vector<Diagnostic>& ds) {
  std::ostringstream os;
  os << "scenario '" << scenario << "': ";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i) os << "\n  ";
    os << ds[i].format(source);
  }
  return os.str();
}

}  // namespace

ConfigError::ConfigError(ErrorKind kind, std::string source, std::string scenario,
                         std::vector<Diagnostic> diagnostics)
    : Error(kind, join(source, scenario, diagnostics)),
      scenario_(std::move(scenario)),
      diagnostics_(std::move(diagnostics)) {}

namespace {

using Keys = std::initializer_list<const char*>;

class Reader {
 public:
  std::vector<Diagnostic> diagnostics;

  void report(const YAML::Node& at, const std::string& key, const std::string& message) {
    Diagnostic d;
    if (at.IsDefined() && at.Mark().line >= 0) {
      d.line = at.Mark().line + 1;
      d.column = at.Mark().column + 1;
    }
    d.key = key;
    d.message = message;
    diagnostics.push_back(std::move(d));
  }

  /// True when `node` is a mapping; reports keys outside `allowed`.
  bool mapping(const YAML::Node& node, const std::string& path, Keys allowed) {
    if (!node.IsMap()) {
      report(node, path, "expected a mapping");
      return false;
    }
    for (const auto& kv : node) {
      const std::string name = kv.first.Scalar();
      bool known = false;
      for (const char* a : allowed) known = known || name == a;
      if (!known) {
        std::string list;
        for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
        report(kv.first, prefixed(path, name), "unknown key (expected one of: " + list + ")");
      }
    }
    return true;
  }

  std::optional<double> number(const YAML::Node& parent, const std::string& path, const char* key,
                               bool required) {
    const YAML::Node n = parent[key];
    const std::string p = prefixed(path, key);
    if (!n.IsDefined() || n.IsNull()) {
      if (required) report(parent, p, "missing required key");
      return std::nullopt;
    }
    return as_number(n, p);
  }

  std::optional<double> as_number(const YAML::Node& n, const std::string& path) {
    if (n.IsScalar()) {
      try {
        const double x = n.as<double>();
        if (std::isfinite(x)) return x;
      } catch (const YAML::Exception&) {
      }
    }
    report(n, path, "expected a finite number");
    return std::nullopt;
  }

  std::optional<int> integer(const YAML::Node& parent, const std::string& path, const char* key) {
    const YAML::Node n = parent[key];
    if (!n.IsDefined() || n.IsNull()) return std::nullopt;
    if (n.IsScalar()) {
      try {
        return n.as<int>();
      } catch (const YAML::Exception&) {
      }
    }
    report(n, prefixed(path, key), "expected an integer");
    return std::nullopt;
  }

  std::optional<std::string> string(const YAML::Node& parent, const std::string& path, const char* key,
                                    bool required) {
    const YAML::Node n = parent[key];
    if (!n.IsDefined() || n.IsNull()) {
      if (required) report(parent, prefixed(path, key), "missing required key");
      return std::nullopt;
    }
    if (!n.IsScalar()) {
      report(n, prefixed(path, key), "expected a string");
      return std::nullopt;
    }
    return n.Scalar();
  }

  /// A number (x component) or a list of up to three numbers.
  std::optional<Vec3d> vector(const YAML::Node& parent, const std::string& path, const char* key,
                              bool required) {
    const YAML::Node n = parent[key];
    const std::string p = prefixed(path, key);
    if (!n.IsDefined() || n.IsNull()) {
      if (required) report(parent, p, "missing required key");
      return std::nullopt;
    }
    return as_vector(n, p);
  }

  std::optional<Vec3d> as_vector(const YAML::Node& n, const std::string& path) {
    Vec3d v = Vec3d::Zero();
    if (n.IsScalar()) {
      const auto x = as_number(n, path);
      if (!x) return std::nullopt;
      v(0) = *x;
      return v;
    }
    if (!n.IsSequence() || n.size() == 0 || n.size() > 3) {
      report(n, path, "expected a number or a list of 1 to 3 numbers");
      return std::nullopt;
    }
    for (std::size_t i = 0; i < n.size(); ++i) {
      const auto x = as_number(n[i], path + "[" + std::to_string(i) + "]");
      if (!x) return std::nullopt;
      v(static_cast<int>(i)) = *x;
    }
    return v;
  }

  std::optional<std::vector<double>> numbers(const YAML::Node& parent, const std::string& path,
                                             const char* key) {
    const YAML::Node n = parent[key];
    const std::string p = prefixed(path, key);
    if (!n.IsDefined() || n.IsNull()) return std::nullopt;
    if (!n.IsSequence() || n.size() == 0) {
      report(n, p, "expected a non-empty list of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < n.size(); ++i) {
      const auto x = as_number(n[i], p + "[" + std::to_string(i) + "]");
      if (!x) return std::nullopt;
      out.push_back(*x);
    }
    return out;
  }

  static std::string prefixed(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }
};

/// Runs a factory, turning inner errors into diagnostics at `at`.
template <typename F>
auto guarded(Reader& r, const YAML::Node& at, const std::string& path, F&& make)
    -> std::optional<decltype(make())> {
  try {
    return make();
  } catch (const Error& e) {
    r.report(at, path, e.what());
    return std::nullopt;
  }
}

bool positive(Reader& r, const YAML::Node& parent, const std::string& path, const char* key,
              std::optional<double> x, const char* what) {
  if (x && !(*x > 0.0)) {
    r.report(parent[key], Reader::prefixed(path, key), std::string(what) + " must be > 0");
    return false;
  }
  return x.has_value();
}

struct WorldlineSpec {
  std::string kind = "rest";
  Vec3d position = Vec3d::Zero();
  Vec3d velocity = Vec3d::Zero();
  double acceleration = 0.0;
  Vec3d direction = Vec3d::UnitX();
  std::vector<double> times;
  std::vector<Vec3d> positions;
  YAML::Node node;
};

std::optional<Worldline> build_worldline(Reader& r, const WorldlineSpec& w, double c) {
  const std::string path = "worldline";
  if (w.kind == "rest") return guarded(r, w.node, path, [&] { return Worldline::rest(c, w.position); });
  if (w.kind == "inertial") {
    if (!(w.velocity.norm() < c)) {
      r.report(w.node["params"]["velocity"], path + ".params.velocity", "speed must satisfy |v| < c");
      return std::nullopt;
    }
    return guarded(r, w.node, path, [&] { return Worldline::inertial(w.velocity, c, w.position); });
  }
  if (w.kind == "uniform_acceleration") {
    return guarded(r, w.node, path,
                   [&] { return Worldline::uniform_acceleration(w.acceleration, w.direction, c, w.position); });
  }
  return guarded(r, w.node, path, [&] { return Worldline::tabulated(w.times, w.positions, c); });
}

void read_worldline(Reader& r, const YAML::Node& node, WorldlineSpec& w) {
  w.node = node;
  if (!r.mapping(node, "worldline", {"kind", "params"})) return;
  const auto kind = r.string(node, "worldline", "kind", true);
  if (!kind) return;
  w.kind = *kind;
  YAML::Node params = node["params"];
  const std::string path = "worldline.params";
  const bool has_params = params.IsDefined() && !params.IsNull();
  if (w.kind == "rest") {
    if (has_params && r.mapping(params, path, {"position"})) {
      if (auto p = r.vector(params, path, "position", false)) w.position = *p;
    }
  } else if (w.kind == "inertial") {
    if (!has_params) {
      r.report(node, path, "inertial motion needs params.velocity");
      return;
    }
    if (!r.mapping(params, path, {"velocity", "position"})) return;
    if (auto v = r.vector(params, path, "velocity", true)) w.velocity = *v;
    if (auto p = r.vector(params, path, "position", false)) w.position = *p;
  } else if (w.kind == "uniform_acceleration") {
    if (!has_params) {
      r.report(node, path, "uniform acceleration needs params.acceleration");
      return;
    }
    if (!r.mapping(params, path, {"acceleration", "direction", "position"})) return;
    const auto a = r.number(params, path, "acceleration", true);
    if (positive(r, params, path, "acceleration", a, "acceleration")) w.acceleration = *a;
    if (auto d = r.vector(params, path, "direction", false)) {
      if (d->norm() == 0.0) {
        r.report(params["direction"], path + ".direction", "direction must be nonzero");
      } else {
        w.direction = *d;
      }
    }
    if (auto p = r.vector(params, path, "position", false)) w.position = *p;
  } else if (w.kind == "tabulated") {
    if (!has_params || !r.mapping(params, path, {"times", "positions"})) {
      if (!has_params) r.report(node, path, "tabulated motion needs params.times and params.positions");
      return;
    }
    if (auto t = r.numbers(params, path, "times")) w.times = *t;
    const YAML::Node ps = params["positions"];
    if (!ps.IsSequence()) {
      r.report(ps.IsDefined() ? ps : params, path + ".positions", "expected a list of positions");
      return;
    }
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (auto p = r.as_vector(ps[i], path + ".positions[" + std::to_string(i) + "]")) w.positions.push_back(*p);
    }
    if (w.times.size() != w.positions.size()) {
      r.report(params, path, "times and positions must have the same length");
    }
  } else {
    r.report(node["kind"], "worldline.kind",
             "unknown kind '" + w.kind + "' (expected rest, inertial, uniform_acceleration or tabulated)");
  }
}

std::optional<SwitchingProfile> read_switching(Reader& r, const YAML::Node& node, SwitchingFrame& frame) {
  const std::string path = "switching.params";
  if (!r.mapping(node, "switching", {"kind", "params", "frame"})) return std::nullopt;
  if (auto f = r.string(node, "switching", "frame", false)) {
    if (*f == "detector") {
      frame = SwitchingFrame::Detector;
    } else if (*f == "lab") {
      frame = SwitchingFrame::Lab;
    } else {
      r.report(node["frame"], "switching.frame", "expected detector or lab");
    }
  }
  const auto kind = r.string(node, "switching", "kind", true);
  const YAML::Node params = node["params"];
  if (!kind) return std::nullopt;
  if (!params.IsDefined() || params.IsNull()) {
    r.report(node, path, "missing required key");
    return std::nullopt;
  }
  if (*kind == "gaussian") {
    if (!r.mapping(params, path, {"width", "center"})) return std::nullopt;
    const auto width = r.number(params, path, "width", true);
    const double center = r.number(params, path, "center", false).value_or(0.0);
    if (!positive(r, params, path, "width", width, "sigma (switching width)")) return std::nullopt;
    return guarded(r, params, path, [&] { return SwitchingProfile::gaussian(*width, center); });
  }
  if (*kind == "cosine_ramp") {
    if (!r.mapping(params, path, {"plateau", "ramp", "center"})) return std::nullopt;
    const auto plateau = r.number(params, path, "plateau", true);
    const auto ramp = r.number(params, path, "ramp", true);
    const double center = r.number(params, path, "center", false).value_or(0.0);
    if (plateau && *plateau < 0.0) r.report(params["plateau"], path + ".plateau", "plateau must be >= 0");
    if (!positive(r, params, path, "ramp", ramp, "ramp") || !plateau || *plateau < 0.0) return std::nullopt;
    return guarded(r, params, path, [&] { return SwitchingProfile::cosine_ramp(*plateau, *ramp, center); });
  }
  if (*kind == "compact_bump") {
    if (!r.mapping(params, path, {"start", "end"})) return std::nullopt;
    const auto start = r.number(params, path, "start", true);
    const auto end = r.number(params, path, "end", true);
    if (!start || !end) return std::nullopt;
    if (!(*end > *start)) {
      r.report(params, path, "end must be greater than start");
      return std::nullopt;
    }
    return guarded(r, params, path, [&] { return SwitchingProfile::compact_bump(*start, *end); });
  }
  r.report(node["kind"], "switching.kind",
           "unknown kind '" + *kind + "' (expected gaussian, cosine_ramp or compact_bump)");
  return std::nullopt;
}

std::optional<SmearingProfile> read_smearing(Reader& r, const YAML::Node& node) {
  const std::string path = "smearing.params";
  if (!r.mapping(node, "smearing", {"kind", "params"})) return std::nullopt;
  const auto kind = r.string(node, "smearing", "kind", true);
  if (!kind) return std::nullopt;
  const YAML::Node params = node["params"];
  const bool has_params = params.IsDefined() && !params.IsNull();
  if (*kind == "pointlike") {
    if (has_params) r.mapping(params, path, {});
    return SmearingProfile::pointlike();
  }
  if (*kind != "gaussian_ball" && *kind != "exponential") {
    r.report(node["kind"], "smearing.kind",
             "unknown kind '" + *kind + "' (expected pointlike, gaussian_ball or exponential)");
    return std::nullopt;
  }
  if (!has_params) {
    r.report(node, path, "missing required key");
    return std::nullopt;
  }
  if (*kind == "gaussian_ball") {
    if (!r.mapping(params, path, {"width"})) return std::nullopt;
    const auto width = r.number(params, path, "width", true);
    if (!positive(r, params, path, "width", width, "smearing width")) return std::nullopt;
    return guarded(r, params, path, [&] { return SmearingProfile::gaussian_ball(*width); });
  }
  if (!r.mapping(params, path, {"scale"})) return std::nullopt;
  const auto scale = r.number(params, path, "scale", true);
  if (!positive(r, params, path, "scale", scale, "smearing scale")) return std::nullopt;
  return guarded(r, params, path, [&] { return SmearingProfile::exponential(*scale); });
}

/// Reasons a route cannot evaluate the scenario, checked up front.
std::optional<std::string> route_conflict(Route route, const Scenario& s) {
  const bool point = s.smearing.is_pointlike();
  const bool inertial = s.worldline.is_inertial();
  switch (route) {
    case Route::DetectorFrame:
    case Route::LabFrame:
      if (!point) return "route is for pointlike detectors; use smeared or density";
      break;
    case Route::InertialClosed:
      if (!point) return "route is for pointlike detectors; use smeared or density";
      if (!inertial) return "closed form needs a rest or inertial worldline";
      break;
    case Route::SmearedInertial:
      if (!inertial) return "smeared closed form needs a rest or inertial worldline; use density";
      if (!point && s.switching_frame == SwitchingFrame::Lab) {
        return "lab-switched smeared detectors do not factorize; use density";
      }
      break;
    case Route::Density:
      if (!point) {
        if (s.worldline.kind() != Worldline::Kind::Rest && !s.worldline.motion_axis()) {
          return "density route needs motion along a fixed axis";
        }
        try {
          FrameMap::comoving(s.worldline, s.smearing.length_scale());
        } catch (const Error& e) {
          return e.what();
        }
      }
      break;
  }
  return std::nullopt;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text, std::string_view source) {
  const std::string src(source);
  ScenarioConfig cfg;
  if (source != "<config>") {
    const std::string stem = std::filesystem::path(src).stem().string();
    if (!stem.empty()) cfg.id = stem;
  }
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    Diagnostic d;
    d.line = e.mark.line + 1;
    d.column = e.mark.column + 1;
    d.message = e.msg;
    throw ConfigError(ErrorKind::ParseError, src, cfg.id, {d});
  }

  Reader r;
  if (!root.IsMap()) {
    r.report(root, "", "expected a mapping at the top level");
    throw ConfigError(ErrorKind::ParseError, src, cfg.id, r.diagnostics);
  }
  if (auto id = r.string(root, "", "id", false)) cfg.id = *id;
  r.mapping(root, "", {"id", "units", "detector", "field", "worldline", "switching", "smearing", "run"});

  double c = 1.0;
  if (const YAML::Node u = root["units"]; u.IsDefined()) {
    if (r.mapping(u, "units", {"c"})) {
      const auto cv = r.number(u, "units", "c", false);
      if (cv && positive(r, u, "units", "c", cv, "c")) c = *cv;
    }
  }

  Scenario& s = cfg.base;
  s.id = cfg.id;
  s.field.c = c;

  std::optional<double> gap;
  const YAML::Node det = root["detector"];
  if (!det.IsDefined()) {
    r.report(root, "detector", "missing required section");
  } else if (r.mapping(det, "detector", {"gap", "coupling"})) {
    gap = r.number(det, "detector", "gap", false);
    if (gap) s.detector.gap = *gap;
    if (auto lam = r.number(det, "detector", "coupling", false)) {
      if (*lam < 0.0) {
        r.report(det["coupling"], "detector.coupling", "coupling must be >= 0");
      } else {
        s.detector.coupling = *lam;
      }
    }
  }

  if (const YAML::Node f = root["field"]; f.IsDefined() && r.mapping(f, "field", {"dimension", "ir_cutoff"})) {
    if (auto d = r.integer(f, "field", "dimension")) {
      if (*d < 1 || *d > 3) {
        r.report(f["dimension"], "field.dimension", "d must be 1, 2 or 3");
      } else {
        s.field.dimension = *d;
      }
    }
    const auto cut = r.number(f, "field", "ir_cutoff", false);
    if (positive(r, f, "field", "ir_cutoff", cut, "ir_cutoff")) s.field.ir_cutoff = *cut;
  }
  if (s.field.dimension == 1 && !s.field.ir_cutoff) {
    const YAML::Node f = root["field"];
    r.report(f.IsDefined() ? f : root, "field.ir_cutoff",
             "one spatial dimension needs an infrared cutoff (the massless response diverges as k -> 0)");
  }

  WorldlineSpec wspec;
  bool worldline_ok = true;
  if (const YAML::Node w = root["worldline"]; w.IsDefined()) {
    const std::size_t before = r.diagnostics.size();
    read_worldline(r, w, wspec);
    worldline_ok = r.diagnostics.size() == before;
  } else {
    wspec.node = root;
  }
  if (worldline_ok) {
    if (auto w = build_worldline(r, wspec, c)) {
      s.worldline = *w;
    } else {
      worldline_ok = false;
    }
  }

  if (const YAML::Node sw = root["switching"]; sw.IsDefined()) {
    if (auto chi = read_switching(r, sw, s.switching_frame)) s.switching = *chi;
  } else {
    r.report(root, "switching", "missing required section");
  }

  if (const YAML::Node sm = root["smearing"]; sm.IsDefined()) {
    if (auto f = read_smearing(r, sm)) s.smearing = *f;
  }

  const YAML::Node run = root["run"];
  if (!run.IsDefined()) {
    r.report(root, "run", "missing required section");
  } else if (r.mapping(run, "run", {"routes", "sweep", "tolerances"})) {
    const YAML::Node routes = run["routes"];
    if (!routes.IsDefined()) {
      r.report(run, "run.routes", "missing required key");
    } else if (!routes.IsSequence() || routes.size() == 0) {
      r.report(routes, "run.routes", "expected a non-empty list of routes");
    } else {
      for (std::size_t i = 0; i < routes.size(); ++i) {
        const std::string path = "run.routes[" + std::to_string(i) + "]";
        const auto route = routes[i].IsScalar() ? route_from_string(routes[i].Scalar()) : std::nullopt;
        if (!route) {
          r.report(routes[i], path, "unknown route (expected detector, lab, closed, smeared or density)");
        } else if (std::find(cfg.routes.begin(), cfg.routes.end(), *route) != cfg.routes.end()) {
          r.report(routes[i], path, "route listed twice");
        } else {
          cfg.routes.push_back(*route);
        }
      }
    }
    const YAML::Node sweep = run["sweep"];
    if (sweep.IsDefined() && r.mapping(sweep, "run.sweep", {"omegas", "speeds", "accelerations"})) {
      if (auto om = r.numbers(sweep, "run.sweep", "omegas")) cfg.omegas = *om;
      const auto speeds = r.numbers(sweep, "run.sweep", "speeds");
      const auto accels = r.numbers(sweep, "run.sweep", "accelerations");
      if (speeds && accels) {
        r.report(sweep, "run.sweep", "speeds and accelerations cannot both be swept");
      } else if (speeds) {
        cfg.axis = SweepAxis::Speed;
        cfg.axis_values = *speeds;
        for (std::size_t i = 0; i < speeds->size(); ++i) {
          const double v = (*speeds)[i];
          if (!(std::abs(v) < c)) {
            r.report(sweep["speeds"][i], "run.sweep.speeds[" + std::to_string(i) + "]",
                     "speed must satisfy |v| < c");
          }
        }
        if (wspec.kind != "rest" && wspec.kind != "inertial") {
          r.report(sweep["speeds"], "run.sweep.speeds", "speed sweeps need a rest or inertial worldline");
        }
      } else if (accels) {
        cfg.axis = SweepAxis::Acceleration;
        cfg.axis_values = *accels;
        for (std::size_t i = 0; i < accels->size(); ++i) {
          if (!((*accels)[i] > 0.0)) {
            r.report(sweep["accelerations"][i], "run.sweep.accelerations[" + std::to_string(i) + "]",
                     "acceleration must be > 0");
          }
        }
        if (wspec.kind != "uniform_acceleration") {
          r.report(sweep["accelerations"], "run.sweep.accelerations",
                   "acceleration sweeps need a uniform_acceleration worldline");
        }
      }
    }
    if (const YAML::Node tol = run["tolerances"];
        tol.IsDefined() && r.mapping(tol, "run.tolerances", {"rel", "compare_rel", "compare_abs"})) {
      const auto rel = r.number(tol, "run.tolerances", "rel", false);
      if (positive(r, tol, "run.tolerances", "rel", rel, "rel")) {
        if (*rel >= 1.0) {
          r.report(tol["rel"], "run.tolerances.rel", "rel must be < 1");
        } else {
          cfg.tolerances.rel = *rel;
        }
      }
      const auto crel = r.number(tol, "run.tolerances", "compare_rel", false);
      if (crel) {
        if (*crel < 0.0) {
          r.report(tol["compare_rel"], "run.tolerances.compare_rel", "compare_rel must be >= 0");
        } else {
          cfg.tolerances.compare_rel = *crel;
        }
      }
      const auto cabs = r.number(tol, "run.tolerances", "compare_abs", false);
      if (cabs) {
        if (*cabs < 0.0) {
          r.report(tol["compare_abs"], "run.tolerances.compare_abs", "compare_abs must be >= 0");
        } else {
          cfg.tolerances.compare_abs = *cabs;
        }
      }
    }
  }
  if (!gap && cfg.omegas.empty() && det.IsDefined()) {
    r.report(det, "detector.gap", "missing required key (or give run.sweep.omegas)");
  }

  if (!r.diagnostics.empty()) throw ConfigError(ErrorKind::ValidationError, src, cfg.id, r.diagnostics);

  // Whole-scenario checks at every sweep point.
  const YAML::Node wnode = root["worldline"].IsDefined() ? root["worldline"] : root;
  for (const SweepPoint& p : sweep_points(cfg)) {
    try {
      p.scenario.validate();
    } catch (const Error& e) {
      r.report(wnode, "", e.what());
      break;
    }
  }
  if (r.diagnostics.empty() && worldline_ok) {
    const YAML::Node routes = run["routes"];
    for (std::size_t i = 0; i < cfg.routes.size(); ++i) {
      for (const SweepPoint& p : sweep_points(cfg)) {
        if (auto why = route_conflict(cfg.routes[i], p.scenario)) {
          r.report(routes[i], "run.routes[" + std::to_string(i) + "]",
                   std::string(to_string(cfg.routes[i])) + ": " + *why);
          break;
        }
      }
    }
  }
  if (!r.diagnostics.empty()) throw ConfigError(ErrorKind::ValidationError, src, cfg.id, r.diagnostics);
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    Diagnostic d;
    d.message = "cannot open file";
    throw ConfigError(ErrorKind::ParseError, path, std::filesystem::path(path).stem().string(), {d});
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path);
}

std::vector<SweepPoint> sweep_points(const ScenarioConfig& config) {
  const Scenario& base = config.base;
  const std::vector<double> omegas = config.omegas.empty() ? std::vector<double>{base.detector.gap} : config.omegas;
  const Worldline& w = base.worldline;
  const double c = w.c();

  std::vector<SweepPoint> out;
  for (double omega : omegas) {
    auto push = [&](const Worldline& wl, double speed) {
      SweepPoint p;
      p.omega = omega;
      p.speed = speed;
      p.scenario = base;
      p.scenario.detector.gap = omega;
      p.scenario.worldline = wl;
      out.push_back(std::move(p));
    };
    switch (config.axis) {
      case SweepAxis::None: {
        double speed = 0.0;
        if (w.kind() == Worldline::Kind::Inertial) speed = w.inertial_velocity().norm();
        if (w.kind() == Worldline::Kind::UniformAcceleration) speed = w.acceleration();
        push(w, speed);
        break;
      }
      case SweepAxis::Speed: {
        const Vec3d v0 = w.kind() == Worldline::Kind::Inertial ? w.inertial_velocity() : Vec3d::Zero();
        const Vec3d dir = v0.norm() > 0.0 ? Vec3d(v0.normalized()) : Vec3d(Vec3d::UnitX());
        for (double v : config.axis_values) push(Worldline::inertial(v * dir, c, w.origin()), v);
        break;
      }
      case SweepAxis::Acceleration:
        for (double a : config.axis_values) {
          push(Worldline::uniform_acceleration(a, w.direction(), c, w.origin()), a);
        }
        break;
    }
  }
  return out;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::QuadratureFailure:
    case ErrorKind::InversionFailure:
    case ErrorKind::StepTooCoarse:
    case ErrorKind::FitFailure:
      return kExitNumeric;
    default:
      return kExitInvalid;
  }
}

}  // namespace udw::cli
