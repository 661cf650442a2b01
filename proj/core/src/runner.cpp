#include "dewet/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>

#include "dewet/errors.hpp"
#include "dewet/output.hpp"

namespace dewet {

namespace {

std::string stabilizer_cache_path(const std::string& outdir, const RunConfig& cfg) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "s0_k%d_beta%.17g_q%d_n%zu.csv", cfg.model.fold,
                cfg.model.beta, cfg.scheme.q, cfg.s0_grid);
  return outdir + "/" + buf;
}

DiagnosticsRecord aggregate_records(const std::vector<SimulationState>& islands,
                                    const AnisotropyModel& model,
                                    const SchemeConfig& scheme, double w0, double a0,
                                    int iters) {
  DiagnosticsRecord first =
      make_record(islands.front(), model, scheme, w0, a0, iters);
  if (islands.size() == 1) return first;
  DiagnosticsRecord last = make_record(islands.back(), model, scheme, w0, a0, iters);
  DiagnosticsRecord out = first;
  out.energy = 0.0;
  out.area = 0.0;
  double min_edge = std::numeric_limits<double>::infinity();
  double max_edge = 0.0;
  for (const SimulationState& s : islands) {
    out.energy += discrete_energy(s, model, scheme);
    out.area += trapezoid_area(s.curve);
    for (std::size_t j = 1; j < s.curve.nodes.size(); ++j) {
      const double len = norm(s.curve.nodes[j] - s.curve.nodes[j - 1]);
      min_edge = std::min(min_edge, len);
      max_edge = std::max(max_edge, len);
    }
  }
  out.energy_ratio = w0 != 0.0 ? out.energy / w0 : std::numeric_limits<double>::quiet_NaN();
  out.area_drift = out.area - a0;
  out.mesh_ratio = max_edge / min_edge;
  out.x_right = last.x_right;
  out.theta_right = last.theta_right;
  out.young_right = last.young_right;
  return out;
}

// Recursively split an island until no interior node sits below delta.
// Refused splits (island too small, or a fragment that is not a valid open
// curve, e.g. a touchdown right next to an overhanging contact) leave the
// island evolving as is; the genuine pinch wins the argmin once it descends.
void settle_island(SimulationState island, double delta,
                   std::vector<SimulationState>& out,
                   std::vector<PinchEvent>& events) {
  if (delta > 0.0) {
    if (auto ev = detect_pinch(island.curve, delta)) {
      ev->t = island.time;
      try {
        auto [left, right] = split_at_pinch(island, *ev);
        events.push_back(*ev);
        settle_island(std::move(left), delta, out, events);
        settle_island(std::move(right), delta, out, events);
        return;
      } catch (const Error&) {
        // island keeps evolving un-split
      }
    }
  }
  out.push_back(std::move(island));
}

}  // namespace

StabilizingFunction resolve_stabilizer(const RunConfig& cfg) {
  switch (cfg.stabilizer.kind) {
    case StabilizerChoice::Kind::Constant:
      return StabilizingFunction::constant(cfg.stabilizer.value);
    case StabilizerChoice::Kind::Table:
      return read_stabilizer_table(cfg.stabilizer.path);
    case StabilizerChoice::Kind::Auto: {
      const std::string outdir = effective_outdir(cfg);
      std::filesystem::create_directories(outdir);
      const std::string cache = stabilizer_cache_path(outdir, cfg);
      if (std::filesystem::exists(cache)) return read_stabilizer_table(cache);
      StabilizingFunction s =
          minimal_stabilizer(cfg.model, cfg.scheme.q, cfg.s0_grid, cfg.s0_grid);
      write_stabilizer_table(cache, s);
      return s;
    }
  }
  throw ConfigError("unreachable stabilizer kind");
}

using SplitObserver = std::function<void(long step, const std::vector<SimulationState>&,
                                         const DiagnosticsRecord&)>;
using PinchObserver = std::function<void(const PinchEvent&)>;

static RunSummary run_with_splitting_impl(const SchemeConfig& scheme,
                                          const AnisotropyModel& model,
                                          const OpenCurve& initial, double t_end,
                                          double pinch_delta,
                                          const SplitObserver& observer,
                                          const PinchObserver& on_pinch = {}) {
  scheme.validate();
  model.validate();
  initial.validate();
  ensure_mesh_not_degenerate(initial);

  RunSummary summary;
  SimulationState start;
  start.time = 0.0;
  start.curve = initial;
  start.kappa = turning_angle_curvature(initial);
  start.mu.assign(initial.nodes.size(), 0.0);
  summary.initial_energy = discrete_energy(start, model, scheme);
  summary.initial_area = trapezoid_area(initial);
  summary.islands.push_back(std::move(start));

  summary.records.push_back(aggregate_records(summary.islands, model, scheme,
                                              summary.initial_energy,
                                              summary.initial_area, 0));
  if (observer) observer(0, summary.islands, summary.records.back());

  long step = 0;
  double t = 0.0;
  while (t < t_end - 1e-12 * std::max(1.0, std::abs(t_end))) {
    ++step;
    t = static_cast<double>(step) * scheme.dt;
    int iters = 0;
    for (SimulationState& island : summary.islands) {
      StepResult sr = newton_step(island, scheme, model);
      sr.state.time = t;
      ensure_mesh_not_degenerate(sr.state.curve);
      island = std::move(sr.state);
      iters = std::max(iters, sr.iterations);
    }
    const std::size_t known_events = summary.pinch_events.size();
    std::vector<SimulationState> settled;
    for (SimulationState& island : summary.islands)
      settle_island(std::move(island), pinch_delta, settled, summary.pinch_events);
    summary.islands = std::move(settled);
    if (on_pinch)
      for (std::size_t k = known_events; k < summary.pinch_events.size(); ++k)
        on_pinch(summary.pinch_events[k]);

    summary.records.push_back(aggregate_records(summary.islands, model, scheme,
                                                summary.initial_energy,
                                                summary.initial_area, iters));
    if (observer) observer(step, summary.islands, summary.records.back());
  }
  return summary;
}

RunSummary run_with_splitting(const SchemeConfig& scheme, const AnisotropyModel& model,
                              const OpenCurve& initial, double t_end,
                              double pinch_delta) {
  return run_with_splitting_impl(scheme, model, initial, t_end, pinch_delta, {});
}

std::string effective_outdir(const RunConfig& cfg) {
  if (const char* env = std::getenv("DEWET_OUTPUT_DIR"); env && *env) return env;
  return cfg.outdir;
}

RunSummary execute_run(const RunConfig& cfg) {
  cfg.validate();
  const std::string outdir = effective_outdir(cfg);
  std::filesystem::create_directories(outdir);

  RunConfig run_cfg = cfg;
  run_cfg.scheme.stabilizer = resolve_stabilizer(cfg);
  const OpenCurve initial = build_initial_curve(run_cfg);
  const double delta = resolve_pinch_delta(run_cfg, initial);

  std::ofstream diag(outdir + "/diagnostics.csv");
  if (!diag) throw Error("cannot open " + outdir + "/diagnostics.csv");
  write_diagnostics_header(diag);

  auto snapshot_name = [&](long step, std::size_t island) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "snapshot_%06ld_island%zu.csv", step, island);
    return outdir + "/" + buf;
  };

  const int stride = run_cfg.snapshot_stride;
  auto observer = [&](long step, const std::vector<SimulationState>& islands,
                      const DiagnosticsRecord& rec) {
    write_diagnostics_row(diag, rec);
    if (step == 0 || (stride > 0 && step % stride == 0))
      for (std::size_t k = 0; k < islands.size(); ++k)
        write_snapshot(snapshot_name(step, k), islands[k]);
  };

  std::ofstream pinch(outdir + "/pinch_events.csv");
  pinch << "t,node_index,y_value\n";
  pinch.flush();
  auto on_pinch = [&pinch](const PinchEvent& ev) {
    pinch << format_double(ev.t) << ',' << ev.node << ',' << format_double(ev.y)
          << '\n';
    pinch.flush();
  };

  RunSummary summary = run_with_splitting_impl(run_cfg.scheme, run_cfg.model, initial,
                                               run_cfg.t_end, delta, observer, on_pinch);
  if (run_cfg.t_end > 0.0) {
    for (std::size_t k = 0; k < summary.islands.size(); ++k) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "final_island%zu.csv", k);
      write_snapshot(outdir + "/" + buf, summary.islands[k]);
    }
  }
  return summary;
}

std::vector<ConvergenceRow> execute_convergence(const RunConfig& cfg, int levels,
                                                double t_eval, bool refine_time) {
  cfg.validate();
  if (cfg.shape == ShapeKind::File)
    throw ConfigError("convergence runs need a resolution-parameterized shape");
  const std::string outdir = effective_outdir(cfg);
  std::filesystem::create_directories(outdir);

  SchemeConfig base = cfg.scheme;
  base.stabilizer = resolve_stabilizer(cfg);
  CurveFactory factory = [&cfg](int segments) {
    return cfg.shape == ShapeKind::SemiEllipse
               ? make_semi_ellipse(cfg.ellipse_a, cfg.ellipse_b, cfg.center_x, segments)
               : make_flat_film(cfg.film_length, cfg.film_height, segments);
  };
  auto rows = convergence_study(base, cfg.model, factory, cfg.segments, levels, t_eval,
                                refine_time);
  write_convergence_table(outdir + "/convergence.csv", rows);
  return rows;
}

}  // namespace dewet
