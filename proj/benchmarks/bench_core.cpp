#include <benchmark/benchmark.h>

#include "dewet/anisotropy.hpp"
#include "dewet/diagnostics.hpp"
#include "dewet/scheme.hpp"

namespace {

dewet::SimulationState make_state(int segments) {
  dewet::SimulationState s;
  s.curve = dewet::make_semi_ellipse(1.0, 0.5, 0.0, segments);
  s.kappa = dewet::turning_angle_curvature(s.curve);
  s.mu.assign(s.curve.nodes.size(), 0.0);
  return s;
}

dewet::SchemeConfig make_config(dewet::SchemeKind kind) {
  dewet::SchemeConfig cfg;
  cfg.scheme = kind;
  cfg.dt = 5.0 / 128.0;
  cfg.eps = 1e-2;
  cfg.stabilizer = dewet::StabilizingFunction::constant(2.0);
  return cfg;
}

void BM_AssembleES(benchmark::State& state) {
  const auto s = make_state(static_cast<int>(state.range(0)));
  const auto cfg = make_config(dewet::SchemeKind::EnergyStable);
  const dewet::AnisotropyModel model{2, 0.5};
  for (auto _ : state)
    benchmark::DoNotOptimize(dewet::assemble_es_newton(s, s, cfg, model));
}
BENCHMARK(BM_AssembleES)->Arg(128)->Arg(256)->Arg(512);

void BM_AssembleAC(benchmark::State& state) {
  const auto s = make_state(static_cast<int>(state.range(0)));
  const auto cfg = make_config(dewet::SchemeKind::AreaConserving);
  const dewet::AnisotropyModel model{2, 0.5};
  for (auto _ : state)
    benchmark::DoNotOptimize(dewet::assemble_ac_newton(s, s, cfg, model));
}
BENCHMARK(BM_AssembleAC)->Arg(128)->Arg(256)->Arg(512);

void BM_NewtonStep(benchmark::State& state) {
  const auto s = make_state(static_cast<int>(state.range(0)));
  const auto cfg = make_config(dewet::SchemeKind::EnergyStable);
  const dewet::AnisotropyModel model{2, 0.5};
  for (auto _ : state)
    benchmark::DoNotOptimize(dewet::newton_step(s, cfg, model));
}
BENCHMARK(BM_NewtonStep)->Arg(128)->Arg(256);

void BM_ManifoldDistance(benchmark::State& state) {
  const auto a = dewet::make_semi_ellipse(1.0, 0.5, 0.0, static_cast<int>(state.range(0)));
  const auto b = dewet::make_semi_ellipse(1.05, 0.45, 0.02, static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(dewet::manifold_distance(a, b));
}
BENCHMARK(BM_ManifoldDistance)->Arg(64)->Arg(128)->Arg(256);

void BM_MinimalStabilizer(benchmark::State& state) {
  const dewet::AnisotropyModel model{2, 0.5};
  for (auto _ : state)
    benchmark::DoNotOptimize(dewet::minimal_stabilizer(model, 1, 256, 256));
}
BENCHMARK(BM_MinimalStabilizer);

}  // namespace

BENCHMARK_MAIN();
