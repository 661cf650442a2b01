#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dewet/anisotropy.hpp"
#include "dewet/scheme.hpp"

namespace dewet {

enum class ShapeKind { SemiEllipse, FlatFilm, File };

struct StabilizerChoice {
  enum class Kind { Auto, Constant, Table };
  Kind kind = Kind::Auto;
  double value = 0.0;
  std::string path;
};

// Full run description: scheme knobs, anisotropy, initial shape, horizons
// and output policy. Parseable from a flat key = value file with
// command-line overrides on top.
struct RunConfig {
  SchemeConfig scheme;
  AnisotropyModel model;

  ShapeKind shape = ShapeKind::SemiEllipse;
  double ellipse_a = 1.0;
  double ellipse_b = 0.5;
  double center_x = 0.0;
  double film_length = 60.0;
  double film_height = 1.0;
  std::string curve_file;

  int segments = 128;
  double t_end = 5.0;

  std::string outdir = "out";
  int snapshot_stride = 0;    // 0: initial and final snapshots only
  double pinch_delta = -1.0;  // negative: auto, 1e-3 x initial height
  StabilizerChoice stabilizer;
  std::size_t s0_grid = 1024;

  void validate() const;
};

using KeyValue = std::pair<std::string, std::string>;

// Applies one key = value setting; throws ConfigError on unknown keys or
// out-of-range values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Reads a key = value file (# comments, blank lines allowed), then applies
// the overrides in order, then validates.
RunConfig parse_config(const std::string& file_path,
                       const std::vector<KeyValue>& overrides);
RunConfig parse_config(const std::vector<KeyValue>& overrides);

OpenCurve build_initial_curve(const RunConfig& cfg);

// Auto threshold: 1e-3 x the initial curve's height.
double resolve_pinch_delta(const RunConfig& cfg, const OpenCurve& initial);

}  // namespace dewet
