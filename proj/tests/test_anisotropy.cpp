#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dewet/anisotropy.hpp"
#include "dewet/errors.hpp"
#include "s0_exact.hpp"

using namespace dewet;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracle for the minimal stabilizer: solve the per-pair
// inequality for alpha in closed form and take the sup over the hat grid.
double closed_form_s0(const AnisotropyModel& m, int q, double theta, int hats) {
  double alpha = 0.0;
  for (int j = 0; j < hats; ++j) {
    const double th = -kPi + 2.0 * kPi * j / hats;
    const double d = theta - th;
    const double sd2 = std::sin(d) * std::sin(d);
    const double g = gamma(m, theta, 0);
    const double gp = gamma(m, theta, 1);
    const double gh = gamma(m, th, 0);
    double need;
    if (q == 0) {
      const double base = g * std::cos(2 * d) - gp * std::sin(2 * d);
      const double deficit = gh * gh / g - base;  // alpha * sd2 >= deficit
      if (deficit <= 0.0) continue;
      if (sd2 < 1e-24) continue;  // tight only at roundoff level
      need = deficit / sd2;
    } else {
      const double qv = gh + g * std::cos(d) + gp * std::sin(d);
      if (qv <= 0.0) continue;  // P >= 0 always
      const double deficit = qv * qv / (4.0 * g) - g;  // alpha*sd2 >= deficit
      if (deficit <= 0.0) continue;
      if (sd2 < 1e-24) continue;
      need = deficit / sd2;
    }
    alpha = std::max(alpha, need);
  }
  return alpha;
}

}  // namespace

TEST_CASE("gamma closed forms") {
  CHECK(gamma({2, 0.5}, 0.0, 0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(gamma({4, 0.1}, kPi / 4.0, 0) == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(gamma({2, 0.5}, 0.0, 2) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(gamma({2, 0.0}, 1.234, 0) == 1.0);
  CHECK_THROWS_AS(gamma({2, 0.5}, 0.0, 3), std::invalid_argument);
}

TEST_CASE("classification thresholds") {
  CHECK(classify({2, 0.0}) == AnisotropyClass::Isotropic);
  CHECK(classify({2, 0.5}) == AnisotropyClass::Strong);
  CHECK(classify({4, 1.0 / 15.0}) == AnisotropyClass::Weak);  // boundary -> weak
  CHECK(classify({4, 1.0 / 15.0 + 1e-9}) == AnisotropyClass::Strong);
  CHECK(classify({2, 0.2}) == AnisotropyClass::Weak);
}

TEST_CASE("energy matrix values") {
  const auto s0 = StabilizingFunction::constant(0.0);
  AnisotropyModel iso{2, 0.0};
  for (double theta : {0.0, 0.7, -2.1}) {
    const Mat2 b = energy_matrix(iso, s0, theta, 1);
    CHECK(b.a == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b.d == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(b.b) < 1e-15);
    CHECK(std::abs(b.c) < 1e-15);
  }
  const Mat2 b0 = energy_matrix(iso, s0, 0.0, 0);
  CHECK(b0.a == doctest::Approx(1.0));
  CHECK(b0.d == doctest::Approx(-1.0));
  const Mat2 banis = energy_matrix({2, 0.5}, s0, 0.0, 1);
  CHECK(banis.a == doctest::Approx(1.5));
  CHECK(banis.d == doctest::Approx(1.5));
  CHECK(std::abs(banis.b) < 1e-15);
}

TEST_CASE("B0 symmetric; S-block is S n n^T") {
  const AnisotropyModel m{2, 0.5};
  const auto s = StabilizingFunction::constant(1.3);
  const auto z = StabilizingFunction::constant(0.0);
  for (int i = 0; i < 64; ++i) {
    const double theta = -kPi + 2 * kPi * i / 64.0;
    const Mat2 b0 = energy_matrix(m, s, theta, 0);
    CHECK(std::abs(b0.b - b0.c) < 1e-15);
    for (int q : {0, 1}) {
      const Mat2 block = energy_matrix(m, s, theta, q) - energy_matrix(m, z, theta, q);
      // rank <= 1, trace S, annihilates the tangent
      CHECK(block.a + block.d == doctest::Approx(1.3).epsilon(1e-13));
      CHECK(block.a * block.d - block.b * block.c ==
            doctest::Approx(0.0).epsilon(1e-13));
      const Vec2 tau{std::cos(theta), std::sin(theta)};
      CHECK(norm(block.apply(tau)) < 1e-14);
    }
  }
}

TEST_CASE("split of B1 reassembles the full matrix") {
  const AnisotropyModel m{2, 0.5};
  const auto z = StabilizingFunction::constant(0.0);
  const auto parts = split_b1(m, z, kPi / 4.0);
  CHECK(parts.antisymmetric.b == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(parts.antisymmetric.c == doctest::Approx(-1.0).epsilon(1e-14));
  const auto iso_parts = split_b1({2, 0.0}, z, 0.3);
  CHECK(iso_parts.symmetric.a == doctest::Approx(1.0));
  CHECK(std::abs(iso_parts.antisymmetric.b) < 1e-15);

  std::mt19937 rng(42);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  const auto s = StabilizingFunction::constant(0.7);
  for (int i = 0; i < 100; ++i) {
    const double theta = ang(rng);
    const auto p = split_b1(m, s, theta);
    const Mat2 sum = p.symmetric + p.antisymmetric;
    const Mat2 b1 = energy_matrix(m, s, theta, 1);
    CHECK(std::abs(sum.a - b1.a) < 1e-14);
    CHECK(std::abs(sum.b - b1.b) < 1e-14);
    CHECK(std::abs(sum.c - b1.c) < 1e-14);
    CHECK(std::abs(sum.d - b1.d) < 1e-14);
  }
}

TEST_CASE("minimal stabilizer: isotropic closed forms") {
  const AnisotropyModel iso{2, 0.0};
  const auto s1 = minimal_stabilizer(iso, 1, 256, 256);
  CHECK(s1.max_value() <= 1e-9);
  const auto s0 = minimal_stabilizer(iso, 0, 256, 256);
  for (double v : s0.samples()) CHECK(v == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("minimal stabilizer matches the closed-form per-pair oracle") {
  const AnisotropyModel m{2, 0.5};
  for (int q : {0, 1}) {
    const auto s = minimal_stabilizer(m, q, 256, 256);
    const auto& vals = s.samples();
    for (std::size_t i = 0; i < vals.size(); i += 17) {
      const double theta = -kPi + 2 * kPi * i / vals.size();
      const double expect = closed_form_s0(m, q, theta, 256);
      CHECK(vals[i] == doctest::Approx(expect).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("verify_stability on constants") {
  const AnisotropyModel iso{2, 0.0};
  const auto ok = verify_stability(iso, StabilizingFunction::constant(2.0), 0, 512);
  CHECK(ok.holds);
  CHECK(ok.worst_margin >= -1e-9);
  const auto bad = verify_stability(iso, StabilizingFunction::constant(1.9), 0, 512);
  CHECK_FALSE(bad.holds);
  // worst pair sits near |theta - theta_hat| = pi/2
  const double d = std::abs(std::remainder(bad.worst_theta - bad.worst_theta_hat, kPi));
  CHECK(std::abs(d - kPi / 2) < 0.1);
}

TEST_CASE("eigenvalues of B0 nonnegative for S >= S0 (even fold)") {
  for (const AnisotropyModel m : {AnisotropyModel{2, 0.5}, AnisotropyModel{4, 0.1}}) {
    const auto s0 = minimal_stabilizer(m, 0, 256, 256);
    for (int i = 0; i < 1024; ++i) {
      const double theta = -kPi + 2 * kPi * i / 1024.0;
      const Mat2 b = energy_matrix(m, s0, theta, 0);
      const double tr = b.a + b.d;
      const double det = b.a * b.d - b.b * b.c;
      const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
      CHECK(tr / 2 - disc >= -1e-9);
    }
  }
}

TEST_CASE("scaling S0 down breaks stability where it is active") {
  const AnisotropyModel m{2, 0.5};
  const auto s0 = minimal_stabilizer(m, 1, 512, 512);
  CHECK(verify_stability(m, s0, 1, 512).holds);
  const auto shaved = s0.scaled(0.95);
  const auto check = verify_stability(m, shaved, 1, 512);
  CHECK_FALSE(check.holds);
  CHECK(s0(check.worst_theta) > 1e-6);
}

TEST_CASE("key inequality: hand values and fuzz") {
  const AnisotropyModel iso{2, 0.0};
  const auto z = StabilizingFunction::constant(0.0);
  CHECK(key_inequality_margin(iso, z, {0, 1}, {0, 1}) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK(key_inequality_margin(iso, z, {0, 1}, {0, 2}) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(key_inequality_margin(iso, z, {0, 0}, {0, 1}),
                  std::invalid_argument);

  const AnisotropyModel m{2, 0.5};
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> len(0.05, 20.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);

  // against the exact minimal stabilizer (the theorem's hypothesis)
  double worst = 0.0;
  for (int i = 0; i < 5000; ++i) {
    const double av = ang(rng), aw = ang(rng);
    const Vec2 v = len(rng) * Vec2{std::cos(av), std::sin(av)};
    const Vec2 w = len(rng) * Vec2{std::cos(aw), std::sin(aw)};
    const auto s_at_v = StabilizingFunction::constant(
        testing_support::exact_minimal_stabilizer_q1(m, av));
    const double margin = key_inequality_margin(m, s_at_v, v, w);
    worst = std::min(worst, margin / (norm(v) + norm(w)));
  }
  CHECK(worst >= -1e-9);

  // against the tabulated minimal stabilizer with both angles on its grid,
  // where the table is exact up to the bisection tolerance
  const auto s0 = minimal_stabilizer(m, 1, 1024, 1024);
  std::uniform_int_distribution<int> node(0, 1023);
  double worst_grid = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double av = -kPi + 2 * kPi * node(rng) / 1024.0;
    const double aw = -kPi + 2 * kPi * node(rng) / 1024.0;
    const Vec2 v = len(rng) * Vec2{std::cos(av), std::sin(av)};
    const Vec2 w = len(rng) * Vec2{std::cos(aw), std::sin(aw)};
    const double margin = key_inequality_margin(m, s0, v, w);
    worst_grid = std::min(worst_grid, margin / (norm(v) + norm(w)));
  }
  CHECK(worst_grid >= -1e-8);

  // the table itself undershoots the exact function between nodes by no more
  // than its interpolation error
  double worst_under = 0.0;
  for (int i = 0; i < 400; ++i) {
    const double theta = -kPi + 2 * kPi * (i + 0.37) / 400.0;
    worst_under = std::max(worst_under,
                           testing_support::exact_minimal_stabilizer_q1(m, theta) -
                               s0(theta));
  }
  CHECK(worst_under <= 2e-4);
}

TEST_CASE("young residual") {
  const AnisotropyModel iso{2, 0.0};
  const double theta = std::acos(-0.6);
  CHECK(young_residual(iso, theta, -0.6) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(young_residual({2, 0.5}, kPi / 2, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(young_residual(iso, kPi / 2, 0.0, 0.1, 1.0) ==
        doctest::Approx(-0.01).epsilon(1e-14));
}

TEST_CASE("stabilizer table interpolation is periodic") {
  std::vector<double> vals(8);
  for (int i = 0; i < 8; ++i) vals[i] = 1.0 + 0.5 * std::sin(2.0 * kPi * i / 8.0);
  const auto s = StabilizingFunction::from_samples(vals);
  CHECK(s(-kPi) == doctest::Approx(s(kPi)).epsilon(1e-14));
  CHECK(s(0.3) == doctest::Approx(s(0.3 + 2 * kPi)).epsilon(1e-13));
  CHECK(s(-kPi) == doctest::Approx(vals[0]).epsilon(1e-14));
  CHECK_THROWS(StabilizingFunction::from_samples({1.0, -0.5}));
}

TEST_CASE("preconditions of the minimal stabilizer") {
  CHECK_THROWS_AS(minimal_stabilizer({3, 0.2}, 0, 256, 256), Error);  // odd fold
  CHECK_THROWS(minimal_stabilizer({2, 0.5}, 1, 128, 256));            // grid too small
}
