#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dewet/config.hpp"
#include "dewet/diagnostics.hpp"
#include "dewet/errors.hpp"
#include "dewet/output.hpp"
#include "dewet/runner.hpp"

namespace {

struct CliSettings {
  std::string config_file;
  std::vector<dewet::KeyValue> overrides;
};

// Every simulation knob is routed through the shared key = value grammar so
// flags and config files validate identically; flags win over the file.
void add_config_options(CLI::App* cmd, CliSettings& s) {
  cmd->add_option("--config", s.config_file, "configuration file (key = value lines)");
  static const char* keys[] = {
      "scheme",     "q",          "kfold",      "beta",        "eps",
      "eta",        "sigma",      "J",          "dt",          "tmax",
      "newton_tol", "newton_max", "newton_damping",
      "shape",      "a",          "b",          "center_x",    "length",
      "height",     "curve_file", "outdir",     "stride",      "pinch_delta",
      "stabilizer", "s0_grid"};
  for (const char* key : keys) {
    cmd->add_option_function<std::string>(
        std::string("--") + key,
        [&s, key](const std::string& v) { s.overrides.emplace_back(key, v); },
        std::string("config key '") + key + "'");
  }
}

dewet::RunConfig make_config(const CliSettings& s) {
  return s.config_file.empty() ? dewet::parse_config(s.overrides)
                               : dewet::parse_config(s.config_file, s.overrides);
}

void print_rows(const std::vector<dewet::ConvergenceRow>& rows) {
  std::printf("%8s %22s %24s %10s\n", "J", "dt", "error", "order");
  for (const auto& r : rows)
    std::printf("%8d %22s %24s %10.3f\n", r.segments,
                dewet::format_double(r.dt).c_str(),
                dewet::format_double(r.error).c_str(), r.order);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametric finite element simulator for anisotropic "
               "solid-state dewetting with Willmore regularization"};
  app.require_subcommand(1);

  CliSettings run_settings;
  CLI::App* cmd_run = app.add_subcommand("run", "evolve an interface and write CSVs");
  add_config_options(cmd_run, run_settings);

  CliSettings conv_settings;
  int levels = 3;
  double t_eval = 1.0;
  std::string mode = "coupled";
  CLI::App* cmd_conv =
      app.add_subcommand("convergence", "mesh refinement study (manifold distance)");
  add_config_options(cmd_conv, conv_settings);
  cmd_conv->add_option("--levels", levels, "number of error rows (runs levels+1 sims)");
  cmd_conv->add_option("--teval", t_eval, "evaluation time for the errors");
  cmd_conv->add_option("--mode", mode,
                       "coupled: dt/4 per level; spatial: fixed dt per level")
      ->check(CLI::IsMember({"coupled", "spatial"}));

  int s0_fold = 2;
  double s0_beta = 0.0;
  int s0_q = 1;
  int s0_grid = 1024;
  std::string s0_out = "s0.csv";
  CLI::App* cmd_s0 =
      app.add_subcommand("s0", "tabulate the minimal stabilizing function");
  cmd_s0->add_option("--kfold", s0_fold, "fold number k");
  cmd_s0->add_option("--beta", s0_beta, "degree of anisotropy");
  cmd_s0->add_option("--q", s0_q, "energy matrix variant (0 or 1)");
  cmd_s0->add_option("--grid", s0_grid, "samples per angle grid");
  cmd_s0->add_option("--out", s0_out, "output CSV path");

  std::string cmp_a, cmp_b;
  CLI::App* cmd_cmp =
      app.add_subcommand("compare", "manifold distance between two snapshots");
  cmd_cmp->add_option("fileA", cmp_a, "first snapshot CSV")->required();
  cmd_cmp->add_option("fileB", cmp_b, "second snapshot CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_run->parsed()) {
      const dewet::RunConfig cfg = make_config(run_settings);
      const dewet::RunSummary summary = dewet::execute_run(cfg);
      std::printf("completed t = %s with %zu island(s), %zu pinch event(s)\n",
                  dewet::format_double(summary.records.back().t).c_str(),
                  summary.islands.size(), summary.pinch_events.size());
      std::printf("output in %s\n", dewet::effective_outdir(cfg).c_str());
    } else if (cmd_conv->parsed()) {
      const dewet::RunConfig cfg = make_config(conv_settings);
      const auto rows =
          dewet::execute_convergence(cfg, levels, t_eval, mode == "coupled");
      print_rows(rows);
    } else if (cmd_s0->parsed()) {
      if (s0_grid < 256) throw dewet::ConfigError("--grid must be at least 256");
      dewet::AnisotropyModel model{s0_fold, s0_beta};
      model.validate();
      const auto table = dewet::minimal_stabilizer(
          model, s0_q, static_cast<std::size_t>(s0_grid),
          static_cast<std::size_t>(s0_grid));
      dewet::write_stabilizer_table(s0_out, table);
      std::printf("wrote %s (max S0 = %s)\n", s0_out.c_str(),
                  dewet::format_double(table.max_value()).c_str());
    } else if (cmd_cmp->parsed()) {
      const dewet::SimulationState a = dewet::read_snapshot(cmp_a);
      const dewet::SimulationState b = dewet::read_snapshot(cmp_b);
      std::printf("%s\n",
                  dewet::format_double(dewet::manifold_distance(a.curve, b.curve)).c_str());
    }
  } catch (const dewet::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const dewet::NonConvergence& e) {
    std::fprintf(stderr, "non-convergence: %s\n", e.what());
    return 3;
  } catch (const dewet::DegenerateMesh& e) {
    std::fprintf(stderr, "degenerate mesh: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
