#include "dewet/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dewet/errors.hpp"
#include "dewet/polygon.hpp"

namespace dewet {

double discrete_energy(const SimulationState& state, const AnisotropyModel& model,
                       const SchemeConfig& cfg) {
  const auto frames = edge_frames(state.curve);
  const double eps2 = cfg.eps * cfg.eps;
  double w = 0.0;
  for (std::size_t e = 0; e < frames.size(); ++e) {
    w += frames[e].length * gamma(model, frames[e].theta, 0);
    w += 0.25 * eps2 * frames[e].length *
         (state.kappa[e] * state.kappa[e] + state.kappa[e + 1] * state.kappa[e + 1]);
  }
  w -= cfg.sigma * (state.curve.nodes.back().x - state.curve.nodes.front().x);
  return w;
}

double mesh_ratio(const OpenCurve& curve) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t j = 1; j < curve.nodes.size(); ++j) {
    const double len = norm(curve.nodes[j] - curve.nodes[j - 1]);
    lo = std::min(lo, len);
    hi = std::max(hi, len);
  }
  if (!(lo > 0.0)) throw Error("mesh_ratio: degenerate curve");
  return hi / lo;
}

double manifold_distance(const OpenCurve& a, const OpenCurve& b, MdMethod method,
                         int grid_cells) {
  // The node loop closes itself across the substrate segment.
  std::span<const Vec2> pa(a.nodes);
  std::span<const Vec2> pb(b.nodes);
  if (method == MdMethod::Grid)
    return polygon::symmetric_difference_area_grid(pa, pb, grid_cells);
  if (!polygon::is_simple(pa) || !polygon::is_simple(pb))
    throw Error("manifold_distance: self-intersecting input curve");
  return polygon::symmetric_difference_area(pa, pb);
}

std::pair<double, double> contact_angles(const OpenCurve& curve) {
  if (curve.segments() < 3) throw Error("contact_angles: curve too short");
  const Vec2 first = curve.nodes[1] - curve.nodes[0];
  const Vec2 last = curve.nodes.back() - curve.nodes[curve.nodes.size() - 2];
  return {std::atan2(first.y, first.x), -std::atan2(last.y, last.x)};
}

DiagnosticsRecord make_record(const SimulationState& state,
                              const AnisotropyModel& model, const SchemeConfig& cfg,
                              double reference_energy, double reference_area,
                              int newton_iters) {
  DiagnosticsRecord r;
  r.t = state.time;
  r.energy = discrete_energy(state, model, cfg);
  r.energy_ratio = reference_energy != 0.0
                       ? r.energy / reference_energy
                       : std::numeric_limits<double>::quiet_NaN();
  r.area = trapezoid_area(state.curve);
  r.area_drift = r.area - reference_area;
  r.mesh_ratio = mesh_ratio(state.curve);
  r.x_left = state.curve.nodes.front().x;
  r.x_right = state.curve.nodes.back().x;
  std::tie(r.theta_left, r.theta_right) = contact_angles(state.curve);
  const double len_first = norm(state.curve.nodes[1] - state.curve.nodes[0]);
  const double len_last =
      norm(state.curve.nodes.back() - state.curve.nodes[state.curve.nodes.size() - 2]);
  const double dsk_left = (state.kappa[1] - state.kappa[0]) / len_first;
  const double dsk_right =
      (state.kappa[state.kappa.size() - 1] - state.kappa[state.kappa.size() - 2]) /
      len_last;
  r.young_left = young_residual(model, r.theta_left, cfg.sigma, cfg.eps, dsk_left);
  r.young_right = young_residual(model, r.theta_right, cfg.sigma, cfg.eps, dsk_right);
  r.newton_iters = newton_iters;
  return r;
}

namespace {

struct Bracket {
  SimulationState before;  // last state with t <= t_eval
  SimulationState after;   // first state with t >= t_eval
};

Bracket run_to(const SchemeConfig& cfg, const AnisotropyModel& model,
               const OpenCurve& initial, double t_eval) {
  Bracket br;
  bool done = false;
  auto observer = [&](const SimulationState& s, const DiagnosticsRecord&) {
    if (done) return;
    if (s.time < t_eval) {
      br.before = s;
    } else {
      br.after = s;
      done = true;
    }
  };
  SimulationState start;
  start.curve = initial;
  start.kappa = turning_angle_curvature(initial);
  start.mu.assign(initial.nodes.size(), 0.0);
  br.before = start;
  // run slightly past t_eval so the bracket always closes
  run(cfg, model, initial, t_eval + cfg.dt, observer);
  if (!done) throw Error("convergence_study: run ended before t_eval");
  return br;
}

OpenCurve state_at(const Bracket& br, double t_eval) {
  if (br.after.time <= br.before.time) return br.after.curve;
  if (t_eval <= br.before.time) return br.before.curve;
  if (t_eval >= br.after.time) return br.after.curve;
  return interpolate_curves(br.before.curve, br.after.curve, br.before.time,
                            br.after.time, t_eval);
}

}  // namespace

std::vector<ConvergenceRow> convergence_study(const SchemeConfig& base,
                                              const AnisotropyModel& model,
                                              const CurveFactory& initial,
                                              int base_segments, int levels,
                                              double t_eval, bool refine_time) {
  if (levels < 1) throw Error("convergence_study: need at least one level");
  std::vector<OpenCurve> solutions;
  std::vector<int> segs;
  std::vector<double> dts;
  for (int l = 0; l <= levels; ++l) {
    SchemeConfig cfg = base;
    const int j = base_segments << l;
    cfg.dt = refine_time ? base.dt / std::pow(4.0, l) : base.dt;
    const Bracket br = run_to(cfg, model, initial(j), t_eval);
    solutions.push_back(state_at(br, t_eval));
    segs.push_back(j);
    dts.push_back(cfg.dt);
  }
  std::vector<ConvergenceRow> rows;
  for (int l = 0; l < levels; ++l) {
    ConvergenceRow row;
    row.segments = segs[l];
    row.dt = dts[l];
    row.error = manifold_distance(solutions[l], solutions[l + 1]);
    row.order = l == 0 ? std::numeric_limits<double>::quiet_NaN()
                       : std::log2(rows.back().error / row.error);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dewet
