#pragma once

#include <string>
#include <vector>

#include "dewet/config.hpp"
#include "dewet/diagnostics.hpp"
#include "dewet/scheme.hpp"
#include "dewet/topology.hpp"

namespace dewet {

// Stabilizer according to the config: a constant, a table file, or the
// minimal stabilizing function, computed once and cached in outdir keyed by
// (fold, beta, q, grid size).
StabilizingFunction resolve_stabilizer(const RunConfig& cfg);

struct RunSummary {
  std::vector<SimulationState> islands;
  std::vector<PinchEvent> pinch_events;
  double initial_energy = 0.0;
  double initial_area = 0.0;
  std::vector<DiagnosticsRecord> records;  // aggregate, one per step
};

// Full simulation with pinch handling: all islands advance on the shared
// time grid, splits happen at step boundaries, diagnostics aggregate over
// islands. Pure computation, no file output.
RunSummary run_with_splitting(const SchemeConfig& scheme, const AnisotropyModel& model,
                              const OpenCurve& initial, double t_end,
                              double pinch_delta);

// The `run` subcommand: simulate per the config and write diagnostics.csv,
// snapshot CSVs and pinch_events.csv into the output directory (the
// DEWET_OUTPUT_DIR environment variable overrides cfg.outdir).
RunSummary execute_run(const RunConfig& cfg);

// The `convergence` subcommand driver; writes convergence.csv into outdir.
std::vector<ConvergenceRow> execute_convergence(const RunConfig& cfg, int levels,
                                                double t_eval, bool refine_time);

std::string effective_outdir(const RunConfig& cfg);

}  // namespace dewet
