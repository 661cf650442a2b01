#pragma once

#include <ostream>
#include <string>

#include "dewet/anisotropy.hpp"
#include "dewet/diagnostics.hpp"
#include "dewet/scheme.hpp"

namespace dewet {

// All floating-point output uses 17 significant digits so regression diffs
// are exact.
std::string format_double(double v);

// Curve snapshot: header j,x,y,kappa, one row per node.
void write_snapshot(const std::string& path, const SimulationState& state);
SimulationState read_snapshot(const std::string& path);

void write_diagnostics_header(std::ostream& os);
void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r);

// Stabilizer table: header theta,s0 on the uniform sample grid.
void write_stabilizer_table(const std::string& path, const StabilizingFunction& s);
StabilizingFunction read_stabilizer_table(const std::string& path);

void write_convergence_table(const std::string& path,
                             const std::vector<ConvergenceRow>& rows);

}  // namespace dewet
