#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dewet/vec2.hpp"

namespace dewet {

// k-fold surface energy density gamma(theta) = 1 + beta*cos(k*theta).
// beta = 0 is the isotropic density gamma == 1.
struct AnisotropyModel {
  int fold = 2;       // k
  double beta = 0.0;  // degree of anisotropy, 0 <= beta < 1

  void validate() const;
};

enum class AnisotropyClass { Isotropic, Weak, Strong };

// gamma, gamma' or gamma'' at theta (order 0, 1, 2).
double gamma(const AnisotropyModel& model, double theta, int order = 0);

// Isotropic iff beta == 0; weak iff beta <= 1/(k^2-1); strong beyond.
AnisotropyClass classify(const AnisotropyModel& model);

// Nonnegative stabilizing scalar S(theta), 2*pi-periodic. Either an exact
// constant or a table of samples on the uniform grid theta_i = -pi + i*2pi/N,
// interpolated piecewise-linearly with wraparound.
class StabilizingFunction {
 public:
  StabilizingFunction() : constant_(0.0) {}

  static StabilizingFunction constant(double value);
  static StabilizingFunction from_samples(std::vector<double> samples);

  double operator()(double theta) const;

  bool is_constant() const { return samples_.empty(); }
  double constant_value() const { return constant_; }
  const std::vector<double>& samples() const { return samples_; }

  double max_value() const;
  StabilizingFunction scaled(double factor) const;

 private:
  double constant_;
  std::vector<double> samples_;  // empty when constant
};

// 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  Vec2 apply(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
};

// B_q(theta) = G(theta) R(theta)^(1-q) + S(theta) (I - R(theta))/2 with
// G = [[gamma, -gamma'], [gamma', gamma]] and the reflection
// R = [[cos 2theta, sin 2theta], [sin 2theta, -cos 2theta]].
// For q = 1 this is G + S n n^T with n = (-sin theta, cos theta).
Mat2 energy_matrix(const AnisotropyModel& model, const StabilizingFunction& s,
                   double theta, int q);

struct B1Split {
  Mat2 symmetric;      // gamma I + S (I - R)/2
  Mat2 antisymmetric;  // [[0, -gamma'], [gamma', 0]]
};
B1Split split_b1(const AnisotropyModel& model, const StabilizingFunction& s,
                 double theta);

// Minimal stabilizing function S0 tabulated on theta_samples grid points.
// For each theta the least alpha >= 0 satisfying the q-appropriate
// inequality on the hat grid is found by bisection (bracket grown by
// doubling, tolerance 1e-10 on alpha).
// Preconditions: grids >= 256; q = 0 needs gamma(theta) = gamma(pi + theta)
// (even fold); q = 1 needs 3 gamma(theta) > gamma(pi + theta).
StabilizingFunction minimal_stabilizer(const AnisotropyModel& model, int q,
                                       std::size_t theta_samples = 1024,
                                       std::size_t hat_samples = 1024);

struct StabilityCheck {
  bool holds = false;
  double worst_margin = 0.0;
  double worst_theta = 0.0;
  double worst_theta_hat = 0.0;
};

// Evaluates the q-appropriate stability inequality on a grid x grid lattice;
// holds iff the minimum margin is >= -1e-9.
StabilityCheck verify_stability(const AnisotropyModel& model,
                                const StabilizingFunction& s, int q,
                                std::size_t grid);

// Margin of the per-edge energy inequality:
//   (B_1(theta) w) . (w - v)/|v| - (|w| gamma(theta_hat) - |v| gamma(theta)),
// theta/theta_hat taken from the tangent components of v/w.
// Nonnegative whenever S >= S0 and 3 gamma(theta) > gamma(pi + theta).
double key_inequality_margin(const AnisotropyModel& model,
                             const StabilizingFunction& s, Vec2 v, Vec2 w);

// f_eps(theta; sigma) = gamma cos(theta) - gamma' sin(theta) - sigma
//                       - eps^2 * ds_kappa * sin(theta).
// eps = 0 recovers the Young-equation residual f(theta; sigma).
double young_residual(const AnisotropyModel& model, double theta, double sigma,
                      double eps = 0.0, double ds_kappa = 0.0);

// Internal margin evaluators shared with the verification path; exposed for
// tests that scan (theta, theta_hat) pairs directly.
double stability_margin_q0(const AnisotropyModel& model, double alpha,
                           double theta, double theta_hat);
double stability_margin_q1(const AnisotropyModel& model, double alpha,
                           double theta, double theta_hat);

}  // namespace dewet
