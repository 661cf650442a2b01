#include "dewet/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "dewet/diagnostics.hpp"
#include "dewet/errors.hpp"
#include "dewet/topology.hpp"

namespace dewet {

void SchemeConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (!(eta > 0.0)) throw ConfigError("contact line mobility must be positive");
  if (!(newton_tol > 0.0)) throw ConfigError("newton tolerance must be positive");
  if (!(eps >= 0.0)) throw ConfigError("regularization strength must be nonnegative");
  if (q != 0 && q != 1) throw ConfigError("q must be 0 or 1");
  if (newton_max < 1) throw ConfigError("newton iteration cap must be at least 1");
  if (!(newton_damping > 0.0) || newton_damping > 1.0)
    throw ConfigError("newton damping must lie in (0, 1]");
}

void SimulationState::validate() const {
  curve.validate();
  const std::size_t n = curve.nodes.size();
  if (kappa.size() != n || mu.size() != n)
    throw Error("state fields must share the curve's node count");
  if (kappa.front() != 0.0 || kappa.back() != 0.0)
    throw Error("curvature must vanish at the contact points");
}

namespace {

struct EdgeData {
  double len = 0.0;
  Vec2 tau;
  Vec2 nor;
  Mat2 b;  // B_q at the old edge angle
};

// Scatter helper around the eliminated Dirichlet unknowns: y and kappa
// columns exist at interior nodes only (their values are exactly zero, so
// dropped columns contribute nothing to the right-hand side either).
class Assembler {
 public:
  Assembler(const DofLayout& layout, SparseSystem& sys)
      : layout_(layout), sys_(sys) {}

  void coeff(int row, int col, double v) { sys_.add(row, col, v); }
  void rhs(int row, double v) { sys_.rhs[row] += v; }

  void coeff_x(int row, int node, Vec2 v) {
    sys_.add(row, layout_.x(node), v.x);
    if (layout_.interior(node)) sys_.add(row, layout_.y(node), v.y);
  }
  void coeff_mu(int row, int node, double v) { sys_.add(row, layout_.mu(node), v); }
  void coeff_kappa(int row, int node, double v) {
    if (layout_.interior(node)) sys_.add(row, layout_.kappa(node), v);
  }

 private:
  const DofLayout& layout_;
  SparseSystem& sys_;
};

NewtonSystem assemble(const SimulationState& state, const SimulationState& iterate,
                      const SchemeConfig& cfg, const AnisotropyModel& model,
                      bool area_conserving) {
  const int segs = state.curve.segments();
  if (iterate.curve.segments() != segs)
    throw Error("assemble: iterate node count differs from state");

  NewtonSystem out;
  out.layout.segments = segs;
  out.system.n = out.layout.size();
  out.system.rhs.assign(out.system.n, 0.0);
  Assembler asmb(out.layout, out.system);

  const auto& xm = state.curve.nodes;
  const auto& xi = iterate.curve.nodes;
  const auto& ki = iterate.kappa;
  const auto& mi = iterate.mu;
  const double dt = cfg.dt;
  const double eps2 = cfg.eps * cfg.eps;

  std::vector<EdgeData> edge(segs);
  std::vector<Vec2> dxi(segs);       // iterate tangent w.r.t. old metric
  std::vector<Vec2> hi_perp(segs);   // perp of iterate edge vector
  for (int e = 0; e < segs; ++e) {
    const Vec2 h = xm[e + 1] - xm[e];
    EdgeData d;
    d.len = norm(h);
    if (!(d.len > 0.0) || !std::isfinite(d.len)) throw DegenerateMesh("degenerate edge in old curve");
    d.tau = h / d.len;
    d.nor = perp(d.tau);
    const double theta = std::atan2(d.tau.y, d.tau.x);
    d.b = energy_matrix(model, cfg.stabilizer, theta, cfg.q);
    edge[e] = d;
    const Vec2 hi = xi[e + 1] - xi[e];
    dxi[e] = hi / d.len;
    hi_perp[e] = perp(hi);
  }

  // --- Equation A, one row per mu dof: normal velocity + mass flux.
  for (int l = 0; l <= segs; ++l) {
    const int row = out.layout.mu(l);
    for (int e : {l - 1, l}) {
      if (e < 0 || e >= segs) continue;
      if (!area_conserving) {
        const Vec2 nw = (edge[e].len / (2.0 * dt)) * edge[e].nor;
        asmb.coeff_x(row, l, nw);
        asmb.rhs(row, dot(nw, xm[l]));
      } else {
        const Vec2 di = xi[l] - xm[l];
        // 1/2 delta . n^m part
        const Vec2 nw = (edge[e].len / (4.0 * dt)) * edge[e].nor;
        asmb.coeff_x(row, l, nw);
        asmb.rhs(row, dot(nw, xm[l]));
        // (1/2) delta . perp(h^{m+1}) / len, product rule about the iterate
        const Vec2 cw = (1.0 / (4.0 * dt)) * hi_perp[e];
        asmb.coeff_x(row, l, cw);
        asmb.rhs(row, dot(cw, xm[l]));
        const Vec2 dperp = (1.0 / (4.0 * dt)) * perp(di);
        asmb.coeff_x(row, e + 1, -dperp);
        asmb.coeff_x(row, e, dperp);
        asmb.rhs(row, (1.0 / (4.0 * dt)) * dot(di, hi_perp[e]));
      }
      // stiffness of mu on the old metric
      const double w = 1.0 / edge[e].len;
      if (e == l - 1) {
        asmb.coeff_mu(row, l, w);
        asmb.coeff_mu(row, l - 1, -w);
      } else {
        asmb.coeff_mu(row, l, w);
        asmb.coeff_mu(row, l + 1, -w);
      }
    }
  }

  // --- Equation B, rows x(l) for omega = (phi_l, 0) and y(l) for (0, phi_l).
  // Chemical potential pairing against the (averaged) normal.
  for (int l = 0; l <= segs; ++l) {
    for (int c = 0; c < 2; ++c) {
      if (c == 1 && !out.layout.interior(l)) continue;
      const int row = c == 0 ? out.layout.x(l) : out.layout.y(l);
      for (int e : {l - 1, l}) {
        if (e < 0 || e >= segs) continue;
        const double nc = c == 0 ? edge[e].nor.x : edge[e].nor.y;
        if (!area_conserving) {
          asmb.coeff_mu(row, l, 0.5 * edge[e].len * nc);
        } else {
          const double hic = c == 0 ? hi_perp[e].x : hi_perp[e].y;
          asmb.coeff_mu(row, l, 0.25 * edge[e].len * nc + 0.25 * hic);
          // mu^i * perp(h^{i+1}) picks up X columns
          const double f = 0.25 * mi[l];
          if (c == 0) {
            // perp(h).x = -(y_{e+1} - y_e)
            if (out.layout.interior(e + 1)) asmb.coeff(row, out.layout.y(e + 1), -f);
            if (out.layout.interior(e)) asmb.coeff(row, out.layout.y(e), f);
          } else {
            asmb.coeff(row, out.layout.x(e + 1), f);
            asmb.coeff(row, out.layout.x(e), -f);
          }
          asmb.rhs(row, f * hic);
        }
      }
    }
  }

  // Flux part of equation B: -(F_e, d_s omega) scatters +F to node e and -F
  // to node e+1 rows.
  for (int e = 0; e < segs; ++e) {
    const EdgeData& d = edge[e];
    const double c2 = 0.5 * (ki[e] * ki[e] + ki[e + 1] * ki[e + 1]);
    for (int c = 0; c < 2; ++c) {
      struct Target {
        int node;
        double sign;
      } targets[2] = {{e, 1.0}, {e + 1, -1.0}};
      for (const Target& t : targets) {
        if (c == 1 && !out.layout.interior(t.node)) continue;
        const int row = c == 0 ? out.layout.x(t.node) : out.layout.y(t.node);
        const double s = t.sign;
        // B_q(theta^m) d_s X^{m+1}: row c of B against the edge difference.
        const double brow[2] = {c == 0 ? d.b.a : d.b.c, c == 0 ? d.b.b : d.b.d};
        const Vec2 bcoeff{s * brow[0] / d.len, s * brow[1] / d.len};
        asmb.coeff_x(row, e + 1, bcoeff);
        asmb.coeff_x(row, e, -bcoeff);
        if (eps2 > 0.0) {
          const double nc = c == 0 ? d.nor.x : d.nor.y;
          const double dsc = c == 0 ? dxi[e].x : dxi[e].y;
          const double tc = c == 0 ? d.tau.x : d.tau.y;
          // eps^2 d_s kappa^{m+1} n^m
          asmb.coeff_kappa(row, e + 1, s * eps2 * nc / d.len);
          asmb.coeff_kappa(row, e, -s * eps2 * nc / d.len);
          // -eps^2 avg(kappa^{i+1} kappa^i) d_s X^i
          asmb.coeff_kappa(row, e, -s * eps2 * 0.5 * ki[e] * dsc);
          asmb.coeff_kappa(row, e + 1, -s * eps2 * 0.5 * ki[e + 1] * dsc);
          // -eps^2/2 avg((kappa^i)^2) d_s X^{m+1}
          const double f = s * eps2 * 0.5 * c2 / d.len;
          if (c == 0) {
            asmb.coeff(row, out.layout.x(e + 1), -f);
            asmb.coeff(row, out.layout.x(e), f);
          } else {
            if (out.layout.interior(e + 1)) asmb.coeff(row, out.layout.y(e + 1), -f);
            if (out.layout.interior(e)) asmb.coeff(row, out.layout.y(e), f);
          }
          // +eps^2 avg((kappa^i)^2) d_s X^i is a known addend of the flux
          asmb.rhs(row, -s * eps2 * c2 * dsc);
          (void)tc;
        }
      }
    }
  }

  // Contact-line relaxation and substrate energy on the endpoint x rows.
  {
    const double f = 1.0 / (cfg.eta * dt);
    const int r0 = out.layout.x(0);
    asmb.coeff(r0, out.layout.x(0), -f);
    asmb.rhs(r0, -f * xm[0].x + cfg.sigma);
    const int rj = out.layout.x(segs);
    asmb.coeff(rj, out.layout.x(segs), -f);
    asmb.rhs(rj, -f * xm[segs].x - cfg.sigma);
  }

  // --- Equation C, one row per interior kappa dof.
  for (int l = 1; l < segs; ++l) {
    const int row = out.layout.kappa(l);
    const double w = 0.5 * (edge[l - 1].len + edge[l].len);
    asmb.coeff_kappa(row, l, w / dt);
    asmb.rhs(row, w * state.kappa[l] / dt);
    for (int e : {l - 1, l}) {
      const double s = e == l - 1 ? -1.0 : 1.0;
      // -(n^m . d_s dX, d_s phi)
      const Vec2 nw = (s / (dt * edge[e].len)) * edge[e].nor;
      asmb.coeff_x(row, e + 1, nw);
      asmb.coeff_x(row, e, -nw);
      asmb.rhs(row, dot(nw, xm[e + 1] - xm[e]));
      // product-rule linearization of (d_s X^{m+1}.d_s dX/dt kappa^{m+1}, phi)
      const double we = edge[e].len / (2.0 * dt);
      const double di_di = dot(dxi[e], dxi[e]);
      const double di_tau = dot(dxi[e], edge[e].tau);
      const Vec2 xw = (we * ki[l] / edge[e].len) * (2.0 * dxi[e] - edge[e].tau);
      asmb.coeff_x(row, e + 1, xw);
      asmb.coeff_x(row, e, -xw);
      asmb.coeff_kappa(row, l, we * (di_di - di_tau));
      asmb.rhs(row, we * ki[l] * (2.0 * di_di - di_tau));
    }
  }

  out.system.finalize();
  for (const Triplet& t : out.system.entries)
    if (!std::isfinite(t.value)) throw Error("assemble: non-finite matrix entry");
  for (double v : out.system.rhs)
    if (!std::isfinite(v)) throw Error("assemble: non-finite right-hand side");
  return out;
}

SimulationState unpack(const DofLayout& layout, const std::vector<double>& u,
                       double time) {
  SimulationState s;
  s.time = time;
  const int segs = layout.segments;
  s.curve.nodes.resize(segs + 1);
  s.kappa.assign(segs + 1, 0.0);
  s.mu.assign(segs + 1, 0.0);
  for (int j = 0; j <= segs; ++j) {
    s.curve.nodes[j].x = u[layout.x(j)];
    s.curve.nodes[j].y = layout.interior(j) ? u[layout.y(j)] : 0.0;
    s.mu[j] = u[layout.mu(j)];
    if (layout.interior(j)) s.kappa[j] = u[layout.kappa(j)];
  }
  return s;
}

}  // namespace

void ensure_mesh_not_degenerate(const OpenCurve& curve) {
  double min_len = std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t j = 1; j < curve.nodes.size(); ++j) {
    const double len = norm(curve.nodes[j] - curve.nodes[j - 1]);
    min_len = std::min(min_len, len);
    total += len;
  }
  const double mean = total / static_cast<double>(curve.nodes.size() - 1);
  if (min_len < 1e-12 * mean)
    throw DegenerateMesh("minimum edge length fell below 1e-12 x mean edge length");
}

NewtonSystem assemble_es_newton(const SimulationState& state,
                                const SimulationState& iterate,
                                const SchemeConfig& cfg,
                                const AnisotropyModel& model) {
  return assemble(state, iterate, cfg, model, /*area_conserving=*/false);
}

NewtonSystem assemble_ac_newton(const SimulationState& state,
                                const SimulationState& iterate,
                                const SchemeConfig& cfg,
                                const AnisotropyModel& model) {
  return assemble(state, iterate, cfg, model, /*area_conserving=*/true);
}

StepResult newton_step(const SimulationState& state, const SchemeConfig& cfg,
                       const AnisotropyModel& model) {
  const bool ac = cfg.scheme == SchemeKind::AreaConserving;
  const double t_next = state.time + cfg.dt;
  SimulationState iterate = state;
  iterate.time = t_next;

  double diff = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= cfg.newton_max; ++it) {
    NewtonSystem sys = ac ? assemble_ac_newton(state, iterate, cfg, model)
                          : assemble_es_newton(state, iterate, cfg, model);
    const std::vector<double> u = solve(sys.system);
    SimulationState next = unpack(sys.layout, u, t_next);
    if (cfg.newton_damping < 1.0) {
      const double a = cfg.newton_damping;
      for (std::size_t j = 0; j < next.curve.nodes.size(); ++j) {
        next.curve.nodes[j] = iterate.curve.nodes[j] +
                              a * (next.curve.nodes[j] - iterate.curve.nodes[j]);
        next.mu[j] = iterate.mu[j] + a * (next.mu[j] - iterate.mu[j]);
        next.kappa[j] = iterate.kappa[j] + a * (next.kappa[j] - iterate.kappa[j]);
      }
      // keep the eliminated endpoint values exact
      next.curve.nodes.front().y = 0.0;
      next.curve.nodes.back().y = 0.0;
      next.kappa.front() = 0.0;
      next.kappa.back() = 0.0;
    }
    double dx = 0.0, dmu = 0.0, dkappa = 0.0;
    for (std::size_t j = 0; j < next.curve.nodes.size(); ++j) {
      dx = std::max({dx, std::abs(next.curve.nodes[j].x - iterate.curve.nodes[j].x),
                     std::abs(next.curve.nodes[j].y - iterate.curve.nodes[j].y)});
      dmu = std::max(dmu, std::abs(next.mu[j] - iterate.mu[j]));
      dkappa = std::max(dkappa, std::abs(next.kappa[j] - iterate.kappa[j]));
    }
    diff = dx + dmu + dkappa;
    iterate = std::move(next);
    if (diff <= cfg.newton_tol) return {std::move(iterate), it};
  }
  char msg[128];
  std::snprintf(msg, sizeof(msg),
                "newton iteration did not reach tolerance %.3e (last update %.3e)",
                cfg.newton_tol, diff);
  throw NonConvergence(msg, diff, cfg.newton_max);
}

RunResult run_from(const SchemeConfig& cfg, const AnisotropyModel& model,
                   const SimulationState& start, double t_end,
                   double reference_energy, double reference_area,
                   const StepObserver& observer,
                   std::optional<double> pinch_delta) {
  cfg.validate();
  model.validate();
  start.validate();
  ensure_mesh_not_degenerate(start.curve);

  RunResult result;
  result.state = start;
  const double t0 = start.time;
  long step = 0;
  while (result.state.time < t_end - 1e-12 * std::max(1.0, std::abs(t_end))) {
    StepResult sr = newton_step(result.state, cfg, model);
    ++step;
    sr.state.time = t0 + static_cast<double>(step) * cfg.dt;
    result.state = std::move(sr.state);
    ensure_mesh_not_degenerate(result.state.curve);
    if (observer) {
      observer(result.state,
               make_record(result.state, model, cfg, reference_energy,
                           reference_area, sr.iterations));
    }
    if (pinch_delta) {
      if (auto ev = detect_pinch(result.state.curve, *pinch_delta)) {
        ev->t = result.state.time;
        result.reason = StopReason::Pinch;
        result.pinch = ev;
        return result;
      }
    }
  }
  result.reason = StopReason::ReachedEnd;
  return result;
}

RunResult run(const SchemeConfig& cfg, const AnisotropyModel& model,
              const OpenCurve& initial, double t_end, const StepObserver& observer,
              std::optional<double> pinch_delta) {
  initial.validate();
  SimulationState state;
  state.time = 0.0;
  state.curve = initial;
  state.kappa = turning_angle_curvature(initial);
  state.mu.assign(initial.nodes.size(), 0.0);
  const double w0 = discrete_energy(state, model, cfg);
  const double a0 = trapezoid_area(initial);
  return run_from(cfg, model, state, t_end, w0, a0, observer, pinch_delta);
}

}  // namespace dewet
