#include "dewet/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "dewet/errors.hpp"
#include "dewet/output.hpp"

namespace dewet {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_number(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw ConfigError(key + ": trailing junk in '" + value + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    throw ConfigError(key + ": cannot parse number '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw ConfigError(key + ": trailing junk in '" + value + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    throw ConfigError(key + ": cannot parse integer '" + value + "'");
  }
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "scheme") {
    if (value == "es")
      cfg.scheme.scheme = SchemeKind::EnergyStable;
    else if (value == "ac")
      cfg.scheme.scheme = SchemeKind::AreaConserving;
    else
      throw ConfigError("scheme must be 'es' or 'ac', got '" + value + "'");
  } else if (key == "q") {
    cfg.scheme.q = parse_int(key, value);
  } else if (key == "kfold") {
    cfg.model.fold = parse_int(key, value);
  } else if (key == "beta") {
    cfg.model.beta = parse_number(key, value);
  } else if (key == "eps") {
    cfg.scheme.eps = parse_number(key, value);
  } else if (key == "eta") {
    cfg.scheme.eta = parse_number(key, value);
  } else if (key == "sigma") {
    cfg.scheme.sigma = parse_number(key, value);
  } else if (key == "J") {
    cfg.segments = parse_int(key, value);
  } else if (key == "dt") {
    cfg.scheme.dt = parse_number(key, value);
  } else if (key == "tmax") {
    cfg.t_end = parse_number(key, value);
  } else if (key == "newton_tol") {
    cfg.scheme.newton_tol = parse_number(key, value);
  } else if (key == "newton_max") {
    cfg.scheme.newton_max = parse_int(key, value);
  } else if (key == "newton_damping") {
    cfg.scheme.newton_damping = parse_number(key, value);
  } else if (key == "shape") {
    if (value == "semi_ellipse")
      cfg.shape = ShapeKind::SemiEllipse;
    else if (value == "flat_film")
      cfg.shape = ShapeKind::FlatFilm;
    else if (value == "file")
      cfg.shape = ShapeKind::File;
    else
      throw ConfigError("shape must be semi_ellipse, flat_film or file");
  } else if (key == "a") {
    cfg.ellipse_a = parse_number(key, value);
  } else if (key == "b") {
    cfg.ellipse_b = parse_number(key, value);
  } else if (key == "center_x") {
    cfg.center_x = parse_number(key, value);
  } else if (key == "length") {
    cfg.film_length = parse_number(key, value);
  } else if (key == "height") {
    cfg.film_height = parse_number(key, value);
  } else if (key == "curve_file") {
    cfg.curve_file = value;
  } else if (key == "outdir") {
    cfg.outdir = value;
  } else if (key == "stride") {
    cfg.snapshot_stride = parse_int(key, value);
  } else if (key == "pinch_delta") {
    if (value == "auto")
      cfg.pinch_delta = -1.0;
    else
      cfg.pinch_delta = parse_number(key, value);
  } else if (key == "stabilizer") {
    if (value == "auto") {
      cfg.stabilizer.kind = StabilizerChoice::Kind::Auto;
    } else if (value.rfind("constant:", 0) == 0) {
      cfg.stabilizer.kind = StabilizerChoice::Kind::Constant;
      cfg.stabilizer.value = parse_number(key, value.substr(9));
    } else if (value.rfind("table:", 0) == 0) {
      cfg.stabilizer.kind = StabilizerChoice::Kind::Table;
      cfg.stabilizer.path = value.substr(6);
    } else {
      throw ConfigError("stabilizer must be auto, constant:<value> or table:<path>");
    }
  } else if (key == "s0_grid") {
    const int n = parse_int(key, value);
    if (n < 256) throw ConfigError("s0_grid must be at least 256");
    cfg.s0_grid = static_cast<std::size_t>(n);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

void RunConfig::validate() const {
  scheme.validate();
  model.validate();
  if (segments < 8) throw ConfigError("J must be at least 8");
  if (!(t_end >= 0.0)) throw ConfigError("tmax must be nonnegative");
  if (snapshot_stride < 0) throw ConfigError("stride must be nonnegative");
  if (shape == ShapeKind::SemiEllipse) {
    if (!(ellipse_a > 0.0) || !(ellipse_b > 0.0))
      throw ConfigError("semi-ellipse axes must be positive");
  } else if (shape == ShapeKind::FlatFilm) {
    if (!(film_length > 0.0) || !(film_height > 0.0))
      throw ConfigError("film dimensions must be positive");
  } else if (curve_file.empty()) {
    throw ConfigError("shape = file requires curve_file");
  }
  if (stabilizer.kind == StabilizerChoice::Kind::Constant && stabilizer.value < 0.0)
    throw ConfigError("constant stabilizer must be nonnegative");
  if (outdir.empty()) throw ConfigError("outdir must not be empty");
}

RunConfig parse_config(const std::string& file_path,
                       const std::vector<KeyValue>& overrides) {
  RunConfig cfg;
  std::ifstream is(file_path);
  if (!is) throw ConfigError("cannot open config file " + file_path);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(file_path + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    apply_setting(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  for (const auto& [k, v] : overrides) apply_setting(cfg, k, v);
  cfg.validate();
  return cfg;
}

RunConfig parse_config(const std::vector<KeyValue>& overrides) {
  RunConfig cfg;
  for (const auto& [k, v] : overrides) apply_setting(cfg, k, v);
  cfg.validate();
  return cfg;
}

OpenCurve build_initial_curve(const RunConfig& cfg) {
  switch (cfg.shape) {
    case ShapeKind::SemiEllipse:
      return make_semi_ellipse(cfg.ellipse_a, cfg.ellipse_b, cfg.center_x, cfg.segments);
    case ShapeKind::FlatFilm:
      return make_flat_film(cfg.film_length, cfg.film_height, cfg.segments);
    case ShapeKind::File: {
      SimulationState s = read_snapshot(cfg.curve_file);
      return s.curve;
    }
  }
  throw ConfigError("unreachable shape kind");
}

double resolve_pinch_delta(const RunConfig& cfg, const OpenCurve& initial) {
  if (cfg.pinch_delta >= 0.0) return cfg.pinch_delta;
  double height = 0.0;
  for (const Vec2& p : initial.nodes) height = std::max(height, p.y);
  return 1e-3 * height;
}

}  // namespace dewet
