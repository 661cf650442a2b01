#include "dewet/anisotropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dewet/errors.hpp"

namespace dewet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBisectTol = 1e-10;

double wrap_angle(double theta) {
  // Range (-pi, pi].
  double t = std::remainder(theta, kTwoPi);
  if (t <= -kPi) t += kTwoPi;
  return t;
}

}  // namespace

void AnisotropyModel::validate() const {
  if (fold < 1) throw ConfigError("anisotropy fold must be a positive integer");
  if (beta < 0.0 || beta >= 1.0)
    throw ConfigError("anisotropy degree must satisfy 0 <= beta < 1 so that gamma stays positive");
}

double gamma(const AnisotropyModel& model, double theta, int order) {
  const double k = static_cast<double>(model.fold);
  switch (order) {
    case 0:
      return 1.0 + model.beta * std::cos(k * theta);
    case 1:
      return -k * model.beta * std::sin(k * theta);
    case 2:
      return -k * k * model.beta * std::cos(k * theta);
    default:
      throw std::invalid_argument("gamma: order must be 0, 1 or 2");
  }
}

AnisotropyClass classify(const AnisotropyModel& model) {
  if (model.beta == 0.0) return AnisotropyClass::Isotropic;
  const double k = static_cast<double>(model.fold);
  const double threshold = 1.0 / (k * k - 1.0);
  return model.beta <= threshold ? AnisotropyClass::Weak : AnisotropyClass::Strong;
}

StabilizingFunction StabilizingFunction::constant(double value) {
  if (value < 0.0) throw std::invalid_argument("stabilizing function must be nonnegative");
  StabilizingFunction s;
  s.constant_ = value;
  return s;
}

StabilizingFunction StabilizingFunction::from_samples(std::vector<double> samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("stabilizing table needs at least 2 samples");
  for (double v : samples)
    if (!(v >= 0.0)) throw std::invalid_argument("stabilizing function must be nonnegative");
  StabilizingFunction s;
  s.constant_ = 0.0;
  s.samples_ = std::move(samples);
  return s;
}

double StabilizingFunction::operator()(double theta) const {
  if (samples_.empty()) return constant_;
  const std::size_t n = samples_.size();
  const double step = kTwoPi / static_cast<double>(n);
  double u = (wrap_angle(theta) + kPi) / step;
  // wrap_angle gives (-pi, pi]; theta = pi maps onto the first sample.
  std::size_t i0 = static_cast<std::size_t>(std::floor(u));
  double frac = u - static_cast<double>(i0);
  if (i0 >= n) {
    i0 -= n;
  }
  const std::size_t i1 = (i0 + 1) % n;
  return samples_[i0] * (1.0 - frac) + samples_[i1] * frac;
}

double StabilizingFunction::max_value() const {
  if (samples_.empty()) return constant_;
  return *std::max_element(samples_.begin(), samples_.end());
}

StabilizingFunction StabilizingFunction::scaled(double factor) const {
  if (factor < 0.0) throw std::invalid_argument("scale factor must be nonnegative");
  StabilizingFunction s(*this);
  s.constant_ *= factor;
  for (double& v : s.samples_) v *= factor;
  return s;
}

Mat2 energy_matrix(const AnisotropyModel& model, const StabilizingFunction& s,
                   double theta, int q) {
  if (q != 0 && q != 1) throw std::invalid_argument("energy_matrix: q must be 0 or 1");
  const double g = gamma(model, theta, 0);
  const double gp = gamma(model, theta, 1);
  const double sv = s(theta);
  const double sn = std::sin(theta);
  const double cs = std::cos(theta);
  // S-block = S n n^T, n = (-sin, cos).
  Mat2 stab{sv * sn * sn, -sv * sn * cs, -sv * sn * cs, sv * cs * cs};
  if (q == 1) {
    return Mat2{g, -gp, gp, g} + stab;
  }
  const double c2 = std::cos(2.0 * theta);
  const double s2 = std::sin(2.0 * theta);
  // G * R, symmetric.
  Mat2 gr{g * c2 - gp * s2, g * s2 + gp * c2, gp * c2 + g * s2, gp * s2 - g * c2};
  return gr + stab;
}

B1Split split_b1(const AnisotropyModel& model, const StabilizingFunction& s,
                 double theta) {
  const double g = gamma(model, theta, 0);
  const double gp = gamma(model, theta, 1);
  const double sv = s(theta);
  const double sn = std::sin(theta);
  const double cs = std::cos(theta);
  B1Split out;
  out.symmetric = Mat2{g + sv * sn * sn, -sv * sn * cs, -sv * sn * cs, g + sv * cs * cs};
  out.antisymmetric = Mat2{0.0, -gp, gp, 0.0};
  return out;
}

double stability_margin_q0(const AnisotropyModel& model, double alpha,
                           double theta, double theta_hat) {
  // gamma(theta) * (B_0(theta; alpha) tau_hat) . tau_hat - gamma(theta_hat)^2
  const double g = gamma(model, theta, 0);
  const double gp = gamma(model, theta, 1);
  const double gh = gamma(model, theta_hat, 0);
  const double d = theta - theta_hat;
  // tau_hat^T (G R) tau_hat = gamma cos(2d) - gamma' sin(2d),
  // tau_hat^T n n^T tau_hat = sin^2 d.
  const double sd = std::sin(d);
  const double quad = g * std::cos(2.0 * d) - gp * std::sin(2.0 * d) + alpha * sd * sd;
  return g * quad - gh * gh;
}

double stability_margin_q1(const AnisotropyModel& model, double alpha,
                           double theta, double theta_hat) {
  // P_alpha(theta, theta_hat) - Q(theta, theta_hat)
  const double g = gamma(model, theta, 0);
  const double gp = gamma(model, theta, 1);
  const double gh = gamma(model, theta_hat, 0);
  const double d = theta - theta_hat;
  const double sd = std::sin(d);
  const double p = 2.0 * std::sqrt((g + alpha * sd * sd) * g);
  const double qv = gh + g * std::cos(d) + gp * sd;
  return p - qv;
}

namespace {

double min_margin_over_hats(const AnisotropyModel& model, int q, double alpha,
                            double theta, const std::vector<double>& hats) {
  double worst = std::numeric_limits<double>::infinity();
  for (double th : hats) {
    const double m = q == 0 ? stability_margin_q0(model, alpha, theta, th)
                            : stability_margin_q1(model, alpha, theta, th);
    worst = std::min(worst, m);
  }
  return worst;
}

std::vector<double> uniform_grid(std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = -kPi + kTwoPi * static_cast<double>(i) / static_cast<double>(n);
  return g;
}

}  // namespace

StabilizingFunction minimal_stabilizer(const AnisotropyModel& model, int q,
                                       std::size_t theta_samples,
                                       std::size_t hat_samples) {
  model.validate();
  if (q != 0 && q != 1) throw std::invalid_argument("minimal_stabilizer: q must be 0 or 1");
  if (theta_samples < 256 || hat_samples < 256)
    throw std::invalid_argument("minimal_stabilizer: grids must have at least 256 samples");
  if (q == 0) {
    // Needs gamma(theta) = gamma(pi + theta): even fold (or isotropic).
    if (model.beta != 0.0 && model.fold % 2 != 0)
      throw Error("minimal_stabilizer: q = 0 requires an even fold number");
  } else {
    // 3 gamma(theta) > gamma(pi + theta) everywhere.
    const std::vector<double> probe = uniform_grid(1024);
    for (double t : probe)
      if (3.0 * gamma(model, t, 0) <= gamma(model, t + kPi, 0))
        throw Error("minimal_stabilizer: q = 1 requires 3 gamma(theta) > gamma(pi + theta)");
  }

  const std::vector<double> thetas = uniform_grid(theta_samples);
  const std::vector<double> hats = uniform_grid(hat_samples);
  std::vector<double> values(theta_samples);

  // The inequalities are tight at theta_hat = theta (+pi), where the margin
  // evaluates to roundoff noise of either sign; feasibility must absorb that
  // or the bracket explodes to where one ulp exceeds the bisection tolerance.
  constexpr double kRoundoff = 1e-12;
  auto feasible = [&](double alpha, double theta) {
    return min_margin_over_hats(model, q, alpha, theta, hats) >= -kRoundoff;
  };

  for (std::size_t i = 0; i < theta_samples; ++i) {
    const double theta = thetas[i];
    if (feasible(0.0, theta)) {
      values[i] = 0.0;
      continue;
    }
    double hi = 1.0;
    int doublings = 0;
    while (!feasible(hi, theta)) {
      hi *= 2.0;
      if (++doublings > 60)
        throw Error("minimal_stabilizer: no feasible stabilizer below the bracket cap");
    }
    double lo = hi > 1.0 ? hi / 2.0 : 0.0;
    while (hi - lo > kBisectTol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (feasible(mid, theta))
        hi = mid;
      else
        lo = mid;
    }
    values[i] = hi;
  }
  return StabilizingFunction::from_samples(std::move(values));
}

StabilityCheck verify_stability(const AnisotropyModel& model,
                                const StabilizingFunction& s, int q,
                                std::size_t grid) {
  if (q != 0 && q != 1) throw std::invalid_argument("verify_stability: q must be 0 or 1");
  const std::vector<double> thetas = uniform_grid(grid);
  StabilityCheck out;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (double theta : thetas) {
    const double alpha = s(theta);
    for (double th : thetas) {
      const double m = q == 0 ? stability_margin_q0(model, alpha, theta, th)
                              : stability_margin_q1(model, alpha, theta, th);
      if (m < out.worst_margin) {
        out.worst_margin = m;
        out.worst_theta = theta;
        out.worst_theta_hat = th;
      }
    }
  }
  out.holds = out.worst_margin >= -1e-9;
  return out;
}

double key_inequality_margin(const AnisotropyModel& model,
                             const StabilizingFunction& s, Vec2 v, Vec2 w) {
  const double nv = norm(v);
  const double nw = norm(w);
  if (nv == 0.0 || nw == 0.0)
    throw std::invalid_argument("key_inequality_margin: zero-length vector");
  const double theta = std::atan2(v.y, v.x);
  const double theta_hat = std::atan2(w.y, w.x);
  const Mat2 b1 = energy_matrix(model, s, theta, 1);
  const double lhs = dot(b1.apply(w), w - v) / nv;
  const double rhs = nw * gamma(model, theta_hat, 0) - nv * gamma(model, theta, 0);
  return lhs - rhs;
}

double young_residual(const AnisotropyModel& model, double theta, double sigma,
                      double eps, double ds_kappa) {
  return gamma(model, theta, 0) * std::cos(theta) -
         gamma(model, theta, 1) * std::sin(theta) - sigma -
         eps * eps * ds_kappa * std::sin(theta);
}

}  // namespace dewet
