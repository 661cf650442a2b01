#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dewet/anisotropy.hpp"
#include "dewet/curve.hpp"
#include "dewet/linsolve.hpp"
#include "dewet/pinch_event.hpp"

namespace dewet {

struct DiagnosticsRecord;

enum class SchemeKind { EnergyStable, AreaConserving };

struct SchemeConfig {
  SchemeKind scheme = SchemeKind::EnergyStable;
  int q = 1;                    // energy-matrix variant
  double dt = 1e-3;
  double eps = 0.0;             // Willmore regularization strength
  double eta = 100.0;           // contact line mobility
  double sigma = -0.6;          // substrate energy constant
  double newton_tol = 1e-8;
  int newton_max = 50;
  double newton_damping = 1.0;  // step-scaling factor for robustness runs
  StabilizingFunction stabilizer;

  void validate() const;
};

// Curve, nodal curvature and chemical potential at time t_m.
struct SimulationState {
  double time = 0.0;
  OpenCurve curve;
  std::vector<double> kappa;  // Dirichlet-zero at the contact points
  std::vector<double> mu;

  void validate() const;
};

// Unknown ordering of the 4J Newton system, interleaved per node to keep the
// matrix banded: x_j and mu_j at every node, y_j and kappa_j at interior
// nodes only (the Dirichlet rows/columns are eliminated).
struct DofLayout {
  int segments = 0;

  int size() const { return 4 * segments; }
  int node_base(int j) const {
    return j == 0 ? 0 : 2 + 4 * (j - 1);
  }
  int x(int j) const { return node_base(j); }
  int y(int j) const { return node_base(j) + 1; }      // interior only
  int mu(int j) const {
    return node_base(j) + (j == 0 || j == segments ? 1 : 2);
  }
  int kappa(int j) const { return node_base(j) + 3; }  // interior only
  bool interior(int j) const { return j > 0 && j < segments; }
};

struct NewtonSystem {
  DofLayout layout;
  SparseSystem system;
};

// One linearized step of the fully implicit schemes about `iterate`. All
// inner products and arclength derivatives use the metric of state.curve;
// per-edge energy matrices are evaluated at the old edge angles.
NewtonSystem assemble_es_newton(const SimulationState& state,
                                const SimulationState& iterate,
                                const SchemeConfig& cfg,
                                const AnisotropyModel& model);

// Same as the energy-stable assembly except that velocity and chemical
// potential pair against the averaged normal built from the old and new
// curves, linearized by the product rule about the iterate.
NewtonSystem assemble_ac_newton(const SimulationState& state,
                                const SimulationState& iterate,
                                const SchemeConfig& cfg,
                                const AnisotropyModel& model);

struct StepResult {
  SimulationState state;
  int iterations = 0;
};

// Newton iteration from the previous time step's solution until
// |dX|_inf + |dmu|_inf + |dkappa|_inf <= newton_tol. Throws NonConvergence
// after newton_max iterations.
StepResult newton_step(const SimulationState& state, const SchemeConfig& cfg,
                       const AnisotropyModel& model);

// Throws DegenerateMesh when min edge < 1e-12 x mean edge.
void ensure_mesh_not_degenerate(const OpenCurve& curve);

enum class StopReason { ReachedEnd, Pinch };

struct RunResult {
  SimulationState state;
  StopReason reason = StopReason::ReachedEnd;
  std::optional<PinchEvent> pinch;
};

using StepObserver =
    std::function<void(const SimulationState&, const DiagnosticsRecord&)>;

// Time-steps a single island from `initial` until t >= t_end, a pinch event
// (when pinch_delta is set), or failure. kappa is seeded from turning angles
// and mu from zero. Emits one DiagnosticsRecord per accepted step; drifts and
// ratios in the records are measured against the initial state.
RunResult run(const SchemeConfig& cfg, const AnisotropyModel& model,
              const OpenCurve& initial, double t_end,
              const StepObserver& observer = {},
              std::optional<double> pinch_delta = std::nullopt);

// Same loop but resuming from a ready-made state (used after splits);
// reference energy/area for the records are taken from `reference`.
RunResult run_from(const SchemeConfig& cfg, const AnisotropyModel& model,
                   const SimulationState& start, double t_end,
                   double reference_energy, double reference_area,
                   const StepObserver& observer = {},
                   std::optional<double> pinch_delta = std::nullopt);

}  // namespace dewet
