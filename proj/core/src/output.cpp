#include "dewet/output.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dewet/errors.hpp"

namespace dewet {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_snapshot(const std::string& path, const SimulationState& state) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  os << "j,x,y,kappa\n";
  for (std::size_t j = 0; j < state.curve.nodes.size(); ++j) {
    os << j << ',' << format_double(state.curve.nodes[j].x) << ','
       << format_double(state.curve.nodes[j].y) << ','
       << format_double(state.kappa[j]) << '\n';
  }
  if (!os) throw Error("failed writing " + path);
}

SimulationState read_snapshot(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  std::string line;
  if (!std::getline(is, line) || line.rfind("j,x,y", 0) != 0)
    throw Error(path + ": not a curve snapshot (expected header j,x,y,kappa)");
  SimulationState state;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    double vals[3];
    std::getline(ls, field, ',');  // node index, ignored
    for (double& v : vals) {
      if (!std::getline(ls, field, ',')) throw Error(path + ": short row");
      v = std::stod(field);
    }
    state.curve.nodes.push_back({vals[0], vals[1]});
    state.kappa.push_back(vals[2]);
  }
  state.mu.assign(state.curve.nodes.size(), 0.0);
  state.curve.validate();
  return state;
}

void write_diagnostics_header(std::ostream& os) {
  os << "t,energy,energy_ratio,area,area_drift,mesh_ratio,x_left,x_right,"
        "theta_left,theta_right,young_left,young_right,newton_iters\n";
}

void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r) {
  os << format_double(r.t) << ',' << format_double(r.energy) << ','
     << format_double(r.energy_ratio) << ',' << format_double(r.area) << ','
     << format_double(r.area_drift) << ',' << format_double(r.mesh_ratio) << ','
     << format_double(r.x_left) << ',' << format_double(r.x_right) << ','
     << format_double(r.theta_left) << ',' << format_double(r.theta_right) << ','
     << format_double(r.young_left) << ',' << format_double(r.young_right) << ','
     << r.newton_iters << '\n';
}

void write_stabilizer_table(const std::string& path, const StabilizingFunction& s) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  os << "theta,s0\n";
  if (s.is_constant()) {
    os << format_double(-std::numbers::pi) << ',' << format_double(s.constant_value())
       << '\n';
  } else {
    const auto& vals = s.samples();
    const double step = 2.0 * std::numbers::pi / static_cast<double>(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
      os << format_double(-std::numbers::pi + step * static_cast<double>(i)) << ','
         << format_double(vals[i]) << '\n';
  }
  if (!os) throw Error("failed writing " + path);
}

StabilizingFunction read_stabilizer_table(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  std::string line;
  if (!std::getline(is, line) || line.rfind("theta,s0", 0) != 0)
    throw Error(path + ": not a stabilizer table (expected header theta,s0)");
  std::vector<double> vals;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::getline(ls, field, ',');  // theta implied by the uniform grid
    if (!std::getline(ls, field, ',')) throw Error(path + ": short row");
    vals.push_back(std::stod(field));
  }
  if (vals.empty()) throw Error(path + ": empty stabilizer table");
  if (vals.size() == 1) return StabilizingFunction::constant(vals[0]);
  return StabilizingFunction::from_samples(std::move(vals));
}

void write_convergence_table(const std::string& path,
                             const std::vector<ConvergenceRow>& rows) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  os << "J,dt,error,order\n";
  for (const ConvergenceRow& r : rows)
    os << r.segments << ',' << format_double(r.dt) << ',' << format_double(r.error)
       << ',' << format_double(r.order) << '\n';
  if (!os) throw Error("failed writing " + path);
}

}  // namespace dewet
