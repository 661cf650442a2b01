#pragma once

namespace dewet {

// Interior node that touched down on the substrate.
struct PinchEvent {
  int node = 0;
  double t = 0.0;  // stamped by the caller that knows the clock
  double y = 0.0;
};

}  // namespace dewet
