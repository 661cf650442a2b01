#include "dewet/topology.hpp"

#include "dewet/errors.hpp"

namespace dewet {

std::optional<PinchEvent> detect_pinch(const OpenCurve& curve, double delta) {
  if (!(delta > 0.0)) throw Error("detect_pinch: threshold must be positive");
  const int segs = curve.segments();
  int best = -1;
  double best_y = 0.0;
  for (int j = 1; j < segs; ++j) {
    const double y = curve.nodes[j].y;
    if (best < 0 || y < best_y) {
      best = j;
      best_y = y;
    }
  }
  if (best < 0 || best_y > delta) return std::nullopt;
  PinchEvent ev;
  ev.node = best;
  ev.y = best_y;
  return ev;
}

std::pair<SimulationState, SimulationState> split_at_pinch(
    const SimulationState& state, const PinchEvent& event) {
  const int segs = state.curve.segments();
  const int js = event.node;
  if (js <= 0 || js >= segs) throw Error("split_at_pinch: event node out of range");
  if (js + 1 < 4 || segs - js + 1 < 4)
    throw SplitRefused("split would create an island with fewer than 4 nodes");

  auto take = [&](int lo, int hi) {
    SimulationState island;
    island.time = state.time;
    island.curve.nodes.assign(state.curve.nodes.begin() + lo,
                              state.curve.nodes.begin() + hi + 1);
    island.kappa.assign(state.kappa.begin() + lo, state.kappa.begin() + hi + 1);
    island.mu.assign(state.mu.begin() + lo, state.mu.begin() + hi + 1);
    return island;
  };

  SimulationState left = take(0, js);
  SimulationState right = take(js, segs);
  left.curve.nodes.back().y = 0.0;
  right.curve.nodes.front().y = 0.0;
  left.kappa.back() = 0.0;
  right.kappa.front() = 0.0;
  left.curve.validate();
  right.curve.validate();
  return {std::move(left), std::move(right)};
}

}  // namespace dewet
