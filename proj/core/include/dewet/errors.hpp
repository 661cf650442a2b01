#pragma once

#include <stdexcept>
#include <string>

namespace dewet {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Newton iteration exceeded its iteration cap.
struct NonConvergence : Error {
  NonConvergence(const std::string& what, double residual, int iterations)
      : Error(what), last_residual(residual), iterations(iterations) {}
  double last_residual;
  int iterations;
};

// An edge of the evolving polyline collapsed below the degeneracy threshold.
struct DegenerateMesh : Error {
  using Error::Error;
};

struct SingularMatrix : Error {
  using Error::Error;
};

struct ResidualTooLarge : Error {
  using Error::Error;
};

// Invalid run configuration (bad key, bad value, missing field).
struct ConfigError : Error {
  using Error::Error;
};

// A pinch split would create an island with fewer than 4 nodes.
struct SplitRefused : Error {
  using Error::Error;
};

}  // namespace dewet
