#pragma once

#include <span>
#include <vector>

#include "dewet/vec2.hpp"

namespace dewet {

// Open polyline attached to the substrate {y = 0}: nodes X_0 .. X_J with
// y_0 = y_J = 0, x_0 < x_J, and strictly positive edge lengths. Immutable by
// convention: evolution produces new instances.
struct OpenCurve {
  std::vector<Vec2> nodes;

  int segments() const { return static_cast<int>(nodes.size()) - 1; }
  // Throws Error when an invariant is violated.
  void validate() const;
};

// Per-edge frame of the polyline. The normal is the tangent rotated
// counterclockwise by 90 degrees, so n = (-sin theta, cos theta) with
// theta = atan2(tangent) in (-pi, pi].
struct EdgeFrame {
  double length = 0.0;
  Vec2 tangent;
  Vec2 normal;
  double theta = 0.0;
};

std::vector<EdgeFrame> edge_frames(const OpenCurve& curve);

// Mass-lumped inner product over the curve:
//   (u, v)^h = 1/2 sum_j |h_j| [ (u.v)(rho_j^-) + (u.v)(rho_{j-1}^+) ].
// Fields of length J+1 are nodal, fields of length J are per-edge constants
// (taking their edge value in both one-sided limits).
double lumped_inner(const OpenCurve& curve, std::span<const double> u,
                    std::span<const double> v);
double lumped_inner(const OpenCurve& curve, std::span<const Vec2> u,
                    std::span<const Vec2> v);

// Piecewise-linear derivative with respect to arclength of the metric curve:
// on edge j the value is (u_j - u_{j-1}) / |h_j|.
std::vector<double> edge_derivative(const OpenCurve& metric,
                                    std::span<const double> nodal);
std::vector<Vec2> edge_derivative(const OpenCurve& metric,
                                  std::span<const Vec2> nodal);

// Upper half-ellipse with semi-axes a (horizontal) and b (vertical) resting
// on the substrate, nodes equidistributed in arclength.
OpenCurve make_semi_ellipse(double a, double b, double center_x, int segments);

// Rectangle outline from (-length/2, 0) up, across and down to (length/2, 0),
// nodes equidistributed in arclength.
OpenCurve make_flat_film(double length, double height, int segments);

// Nodal curvature from turning angles,
//   kappa_j = -dtheta_j / (0.5 (|h_j| + |h_{j+1}|)),
// with the signed turning angle wrapped into (-pi, pi]; endpoint values are 0
// (the zero-curvature contact condition). Sign convention kappa = -X_ss . n:
// a semicircular cap of radius R has kappa = +1/R.
std::vector<double> turning_angle_curvature(const OpenCurve& curve);

// A = 1/2 sum_j (x_j - x_{j-1})(y_j + y_{j-1}); the area enclosed between the
// curve and the substrate when the contact points sit on it.
double trapezoid_area(const OpenCurve& curve);

// Nodewise convex combination of two curves with the same node count,
// weights ((t_b - t)/(t_b - t_a), (t - t_a)/(t_b - t_a)).
OpenCurve interpolate_curves(const OpenCurve& a, const OpenCurve& b, double t_a,
                             double t_b, double t);

double perimeter(const OpenCurve& curve);

}  // namespace dewet
