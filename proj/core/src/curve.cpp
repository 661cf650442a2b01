#include "dewet/curve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "dewet/errors.hpp"

namespace dewet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kContactTol = 1e-14;

double wrap_angle(double t) {
  double w = std::remainder(t, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

// Composite Simpson rule on [lo, hi].
double simpson(const std::function<double(double)>& f, double lo, double hi, int panels) {
  const double h = (hi - lo) / panels;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(lo + i * h);
  return sum * h / 3.0;
}

}  // namespace

void OpenCurve::validate() const {
  if (segments() < 3) throw Error("curve needs at least 3 edges");
  if (std::abs(nodes.front().y) > kContactTol || std::abs(nodes.back().y) > kContactTol)
    throw Error("contact points must lie on the substrate");
  if (!(nodes.front().x < nodes.back().x))
    throw Error("left contact must precede right contact");
  for (std::size_t j = 1; j < nodes.size(); ++j)
    if (!(norm(nodes[j] - nodes[j - 1]) > 0.0)) throw Error("zero-length edge");
}

std::vector<EdgeFrame> edge_frames(const OpenCurve& curve) {
  std::vector<EdgeFrame> frames;
  frames.reserve(curve.nodes.size() - 1);
  for (std::size_t j = 1; j < curve.nodes.size(); ++j) {
    const Vec2 h = curve.nodes[j] - curve.nodes[j - 1];
    const double len = norm(h);
    if (!(len > 0.0)) throw Error("zero-length edge");
    EdgeFrame f;
    f.length = len;
    f.tangent = h / len;
    f.normal = perp(f.tangent);
    f.theta = std::atan2(f.tangent.y, f.tangent.x);
    if (f.theta <= -kPi) f.theta = kPi;
    frames.push_back(f);
  }
  return frames;
}

namespace {

double dot_or_mul(double a, double b) { return a * b; }
double dot_or_mul(Vec2 a, Vec2 b) { return dot(a, b); }

template <class T>
double lumped_inner_impl(const OpenCurve& curve, std::span<const T> u,
                         std::span<const T> v) {
  const std::size_t nodal = curve.nodes.size();
  const std::size_t edges = nodal - 1;
  auto check = [&](std::span<const T> f) {
    if (f.size() != nodal && f.size() != edges)
      throw Error("lumped_inner: field length matches neither nodes nor edges");
  };
  check(u);
  check(v);
  auto at = [&](std::span<const T> f, std::size_t edge, std::size_t node) -> const T& {
    return f.size() == edges ? f[edge] : f[node];
  };
  double sum = 0.0;
  for (std::size_t j = 1; j <= edges; ++j) {
    const double len = norm(curve.nodes[j] - curve.nodes[j - 1]);
    const double upper = dot_or_mul(at(u, j - 1, j), at(v, j - 1, j));
    const double lower = dot_or_mul(at(u, j - 1, j - 1), at(v, j - 1, j - 1));
    sum += 0.5 * len * (upper + lower);
  }
  return sum;
}

}  // namespace

double lumped_inner(const OpenCurve& curve, std::span<const double> u,
                    std::span<const double> v) {
  return lumped_inner_impl<double>(curve, u, v);
}

double lumped_inner(const OpenCurve& curve, std::span<const Vec2> u,
                    std::span<const Vec2> v) {
  return lumped_inner_impl<Vec2>(curve, u, v);
}

std::vector<double> edge_derivative(const OpenCurve& metric,
                                    std::span<const double> nodal) {
  if (nodal.size() != metric.nodes.size())
    throw Error("edge_derivative: field is not nodal");
  std::vector<double> out(metric.nodes.size() - 1);
  for (std::size_t j = 1; j < metric.nodes.size(); ++j) {
    const double len = norm(metric.nodes[j] - metric.nodes[j - 1]);
    if (!(len > 0.0)) throw Error("zero-length edge");
    out[j - 1] = (nodal[j] - nodal[j - 1]) / len;
  }
  return out;
}

std::vector<Vec2> edge_derivative(const OpenCurve& metric,
                                  std::span<const Vec2> nodal) {
  if (nodal.size() != metric.nodes.size())
    throw Error("edge_derivative: field is not nodal");
  std::vector<Vec2> out(metric.nodes.size() - 1);
  for (std::size_t j = 1; j < metric.nodes.size(); ++j) {
    const double len = norm(metric.nodes[j] - metric.nodes[j - 1]);
    if (!(len > 0.0)) throw Error("zero-length edge");
    out[j - 1] = (nodal[j] - nodal[j - 1]) / len;
  }
  return out;
}

OpenCurve make_semi_ellipse(double a, double b, double center_x, int segments) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error("semi-ellipse axes must be positive");
  if (segments < 8) throw Error("semi-ellipse needs at least 8 edges");

  // Parameterize left-to-right: P(phi) = (center - a cos phi, b sin phi),
  // phi in [0, pi]; arclength density g(phi) = sqrt(a^2 sin^2 + b^2 cos^2).
  auto g = [&](double phi) {
    const double s = a * std::sin(phi);
    const double c = b * std::cos(phi);
    return std::hypot(s, c);
  };

  // Cumulative arclength on a fine grid, refined until stable to 1e-12.
  int panels = 1024;
  double total = simpson(g, 0.0, kPi, panels);
  for (;;) {
    panels *= 2;
    const double next = simpson(g, 0.0, kPi, panels);
    if (std::abs(next - total) < 1e-12 * std::max(1.0, std::abs(next)) || panels >= (1 << 22)) {
      total = next;
      break;
    }
    total = next;
  }
  std::vector<double> cum(panels + 1, 0.0);
  {
    const double h = kPi / panels;
    for (int i = 1; i <= panels; ++i) {
      const double lo = (i - 1) * h;
      cum[i] = cum[i - 1] + simpson(g, lo, lo + h, 2);
    }
    // Rescale so the cumulative table ends exactly at the refined total.
    const double scale = total / cum[panels];
    for (double& c : cum) c *= scale;
  }

  OpenCurve curve;
  curve.nodes.resize(segments + 1);
  curve.nodes[0] = {center_x - a, 0.0};
  curve.nodes[segments] = {center_x + a, 0.0};
  const double h = kPi / panels;
  for (int j = 1; j < segments; ++j) {
    const double target = total * j / segments;
    const auto it = std::lower_bound(cum.begin(), cum.end(), target);
    std::size_t i = std::min<std::size_t>(std::distance(cum.begin(), it), panels);
    if (i == 0) i = 1;
    // Linear seed inside the bracketing panel, then Newton on s(phi) - target.
    double phi = (i - 1 + (target - cum[i - 1]) / (cum[i] - cum[i - 1])) * h;
    for (int it2 = 0; it2 < 4; ++it2) {
      const double base = cum[i - 1] + simpson(g, (i - 1) * h, phi, 2);
      phi -= (base - target) / g(phi);
      phi = std::clamp(phi, 0.0, kPi);
    }
    curve.nodes[j] = {center_x - a * std::cos(phi), b * std::sin(phi)};
  }
  return curve;
}

OpenCurve make_flat_film(double length, double height, int segments) {
  if (!(length > 0.0) || !(height > 0.0)) throw Error("film dimensions must be positive");
  if (segments < 3) throw Error("flat film needs at least 3 edges");
  const Vec2 corners[4] = {{-length / 2.0, 0.0},
                           {-length / 2.0, height},
                           {length / 2.0, height},
                           {length / 2.0, 0.0}};
  const double total = height + length + height;
  // Edges per leg proportional to arclength, corners snapped onto nodes so
  // the outline (perimeter, area) is exact at any resolution.
  int side = std::max(1, static_cast<int>(std::lround(segments * height / total)));
  while (2 * side + 1 > segments) --side;
  const int legs[3] = {side, segments - 2 * side, side};

  OpenCurve curve;
  curve.nodes.reserve(segments + 1);
  for (int leg = 0; leg < 3; ++leg) {
    for (int i = 0; i < legs[leg]; ++i) {
      const double f = static_cast<double>(i) / legs[leg];
      curve.nodes.push_back(corners[leg] + f * (corners[leg + 1] - corners[leg]));
    }
  }
  curve.nodes.push_back(corners[3]);
  return curve;
}

std::vector<double> turning_angle_curvature(const OpenCurve& curve) {
  const auto frames = edge_frames(curve);
  std::vector<double> kappa(curve.nodes.size(), 0.0);
  for (std::size_t j = 1; j + 1 < curve.nodes.size(); ++j) {
    const double dtheta = wrap_angle(frames[j].theta - frames[j - 1].theta);
    kappa[j] = -dtheta / (0.5 * (frames[j - 1].length + frames[j].length));
  }
  return kappa;
}

double trapezoid_area(const OpenCurve& curve) {
  double area = 0.0;
  for (std::size_t j = 1; j < curve.nodes.size(); ++j)
    area += (curve.nodes[j].x - curve.nodes[j - 1].x) *
            (curve.nodes[j].y + curve.nodes[j - 1].y);
  return 0.5 * area;
}

OpenCurve interpolate_curves(const OpenCurve& a, const OpenCurve& b, double t_a,
                             double t_b, double t) {
  if (a.nodes.size() != b.nodes.size())
    throw Error("interpolate_curves: node counts differ");
  if (!(t_b > t_a)) throw Error("interpolate_curves: empty time interval");
  const double wb = (t - t_a) / (t_b - t_a);
  const double wa = 1.0 - wb;
  OpenCurve out;
  out.nodes.resize(a.nodes.size());
  for (std::size_t j = 0; j < a.nodes.size(); ++j)
    out.nodes[j] = wa * a.nodes[j] + wb * b.nodes[j];
  return out;
}

double perimeter(const OpenCurve& curve) {
  double sum = 0.0;
  for (std::size_t j = 1; j < curve.nodes.size(); ++j)
    sum += norm(curve.nodes[j] - curve.nodes[j - 1]);
  return sum;
}

}  // namespace dewet
