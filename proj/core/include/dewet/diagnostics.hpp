#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "dewet/anisotropy.hpp"
#include "dewet/curve.hpp"
#include "dewet/scheme.hpp"

namespace dewet {

// Per-step observables of a run.
struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;        // W_c
  double energy_ratio = 0.0;  // W_c / W_c(0)
  double area = 0.0;
  double area_drift = 0.0;    // A - A(0)
  double mesh_ratio = 1.0;    // max edge / min edge
  double x_left = 0.0;
  double x_right = 0.0;
  double theta_left = 0.0;    // dynamic contact angles (radians)
  double theta_right = 0.0;
  double young_left = 0.0;    // f_eps residual at the contacts
  double young_right = 0.0;
  int newton_iters = 0;
};

// W_c = sum_j |h_j| gamma(theta_j)
//       + eps^2/4 sum_j |h_j| (kappa_{j-1}^2 + kappa_j^2) - sigma (x_J - x_0).
double discrete_energy(const SimulationState& state, const AnisotropyModel& model,
                       const SchemeConfig& cfg);

double mesh_ratio(const OpenCurve& curve);

enum class MdMethod { Exact, Grid };

// Area of the symmetric difference of the two regions enclosed by the curves
// and the substrate. Throws on self-intersecting inputs.
double manifold_distance(const OpenCurve& a, const OpenCurve& b,
                         MdMethod method = MdMethod::Exact, int grid_cells = 512);

// Dynamic contact angles of the first and last edges against the substrate,
// mapped so that an equilibrium isotropic dome has cos(theta) = sigma.
std::pair<double, double> contact_angles(const OpenCurve& curve);

DiagnosticsRecord make_record(const SimulationState& state,
                              const AnisotropyModel& model, const SchemeConfig& cfg,
                              double reference_energy, double reference_area,
                              int newton_iters);

struct ConvergenceRow {
  int segments = 0;
  double dt = 0.0;
  double error = 0.0;
  double order = 0.0;  // NaN on the first row
};

using CurveFactory = std::function<OpenCurve(int segments)>;

// Refinement study: level l runs with (J 2^l, dt/4^l) (or fixed dt when
// refine_time is false); errors are manifold distances between consecutive
// levels of the in-time interpolants at t_eval, orders their log2 ratios.
std::vector<ConvergenceRow> convergence_study(const SchemeConfig& base,
                                              const AnisotropyModel& model,
                                              const CurveFactory& initial,
                                              int base_segments, int levels,
                                              double t_eval,
                                              bool refine_time = true);

}  // namespace dewet
