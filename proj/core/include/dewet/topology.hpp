#pragma once

#include <optional>
#include <utility>

#include "dewet/curve.hpp"
#include "dewet/pinch_event.hpp"
#include "dewet/scheme.hpp"

namespace dewet {

// Interior node with minimal y if that y <= delta (ties to the smaller
// index), otherwise nothing.
std::optional<PinchEvent> detect_pinch(const OpenCurve& curve, double delta);

// Projects the pinch node onto the substrate, duplicates it, and splits the
// state into a left island (nodes 0..j*) and a right island (j*..J); the new
// contact points get zero curvature. Throws SplitRefused when an island
// would have fewer than 4 nodes.
std::pair<SimulationState, SimulationState> split_at_pinch(
    const SimulationState& state, const PinchEvent& event);

}  // namespace dewet
