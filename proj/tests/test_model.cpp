#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chebplan/model.hpp"

using namespace chebplan;

TEST_CASE("dynamics_rhs basics") {
  const DynamicsParams unit{1.0, 1.0, 1.0};
  const Vec3 zero{0, 0, 0};
  const Vec3 r0 = dynamics_rhs(zero, zero, unit);
  CHECK(r0.x == 0.0);
  CHECK(r0.y == 0.0);
  CHECK(r0.z == 0.0);

  const Vec3 r1 = dynamics_rhs(zero, Vec3{1, 2, 3}, unit);
  CHECK(r1.x == doctest::Approx(1.0));
  CHECK(r1.y == doctest::Approx(2.0));
  CHECK(r1.z == doctest::Approx(3.0));

  const Vec3 r2 = dynamics_rhs(Vec3{1, 0, 0}, zero, DynamicsParams{2.0, 1.0, 1.0});
  CHECK(r2.x == doctest::Approx(-2.0));
  CHECK(r2.y == 0.0);
  CHECK(r2.z == 0.0);
}

TEST_CASE("dynamics_step_exact matches the closed form") {
  const DynamicsParams unit{1.0, 1.0, 1.0};
  const Vec3 x = dynamics_step_exact({0, 0, 0}, {1, 1, 1}, unit, std::log(2.0));
  CHECK(x.x == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(x.y == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(x.z == doctest::Approx(0.5).epsilon(1e-14));

  const Vec3 fp = dynamics_step_exact({0.3, -2, 1}, {0.3, -2, 1}, unit, 7.5);
  CHECK(fp.x == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(fp.y == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(fp.z == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(dynamics_step_exact({0, 0, 0}, {1, 1, 1}, unit, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(dynamics_step_exact({0, 0, 0}, {1, 1, 1}, unit, -0.1), std::invalid_argument);
}

// RK4 integration of the same ODE as an independent cross-check of the
// exponential update.
TEST_CASE("dynamics_step_exact agrees with high-resolution RK4") {
  const DynamicsParams p{1.0, 0.7, 2.3};
  const Vec3 x0{1.0, -0.5, 2.0};
  const Vec3 u{0.0, 0.25, -1.0};
  const double dt = 1.0;

  Vec3 x = x0;
  const int steps = 20000;
  const double h = dt / steps;
  for (int i = 0; i < steps; ++i) {
    const Vec3 k1 = dynamics_rhs(x, u, p);
    const Vec3 k2 = dynamics_rhs(x + k1 * (h / 2), u, p);
    const Vec3 k3 = dynamics_rhs(x + k2 * (h / 2), u, p);
    const Vec3 k4 = dynamics_rhs(x + k3 * h, u, p);
    x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
  }
  const Vec3 exact = dynamics_step_exact(x0, u, p, dt);
  CHECK(exact.x == doctest::Approx(x.x).epsilon(1e-10));
  CHECK(exact.y == doctest::Approx(x.y).epsilon(1e-10));
  CHECK(exact.z == doctest::Approx(x.z).epsilon(1e-10));
  CHECK(exact.x == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("exact flow has the semigroup property and geometric decay") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> kd(0.2, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3 x{u(rng), u(rng), u(rng)};
    const Vec3 cmd{u(rng), u(rng), u(rng)};
    const DynamicsParams p{kd(rng), kd(rng), kd(rng)};
    const double dt = 0.1 + 0.9 * kd(rng);

    const Vec3 two_half = dynamics_step_exact(dynamics_step_exact(x, cmd, p, dt / 2), cmd, p, dt / 2);
    const Vec3 one_full = dynamics_step_exact(x, cmd, p, dt);
    CHECK(norm(two_half - one_full) < 1e-12);

    // Per-axis distance to the command decays by exactly exp(-k dt).
    CHECK(std::abs(one_full.x - cmd.x) ==
          doctest::Approx(std::abs(x.x - cmd.x) * std::exp(-p.kx * dt)).epsilon(1e-12));
    CHECK(std::abs((one_full.y - cmd.y)) <= std::abs(x.y - cmd.y) + 1e-15);
  }
}

TEST_CASE("obstacle_position modes") {
  Obstacle circ;
  circ.trajectory = CircularOrbit{{0, 0, 0}, 0.5, 1.0, 0.75, 0.0};
  circ.safety_radius = 0.6;
  const Vec3 p0 = obstacle_position(circ, 0.0);
  CHECK(p0.x == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p0.y == doctest::Approx(0.0));
  CHECK(p0.z == doctest::Approx(0.75));
  const Vec3 ppi = obstacle_position(circ, std::acos(-1.0));
  CHECK(ppi.x == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(std::abs(ppi.y) < 1e-12);

  Obstacle fixed;
  fixed.trajectory = FixedPoint{{1, 1, 1}};
  fixed.safety_radius = 0.1;
  for (double t : {0.0, 3.7, 1e4}) {
    const Vec3 p = obstacle_position(fixed, t);
    CHECK(p.x == 1.0);
    CHECK(p.y == 1.0);
    CHECK(p.z == 1.0);
  }

  Obstacle samp;
  samp.trajectory = SampledPath{{0.0, 1.0, 3.0}, {{0, 0, 0}, {1, 0, 0}, {1, 2, 0}}};
  samp.safety_radius = 0.1;
  const Vec3 mid = obstacle_position(samp, 0.5);
  CHECK(mid.x == doctest::Approx(0.5));
  const Vec3 later = obstacle_position(samp, 2.0);
  CHECK(later.x == doctest::Approx(1.0));
  CHECK(later.y == doctest::Approx(1.0));
  CHECK_THROWS_AS(obstacle_position(samp, 3.5), std::out_of_range);
}

TEST_CASE("circular orbit stays on its circle") {
  Obstacle circ;
  circ.trajectory = CircularOrbit{{0.3, -0.2, 0.1}, 0.5, 1.3, 0.75, 0.4};
  circ.safety_radius = 0.6;
  const Vec3 axis_point{0.3, -0.2, 0.85};
  for (int i = 0; i <= 200; ++i) {
    const double t = 0.11 * i;
    CHECK(std::abs(norm(obstacle_position(circ, t) - axis_point) - 0.5) < 1e-12);
  }
}

TEST_CASE("scenario validation catches field-level issues") {
  ScenarioConfig scn;
  scn.start = {-1, 0, 1};
  scn.goal = {1, 0, 1};
  CHECK(validate(scn).empty());

  ScenarioConfig bad = scn;
  bad.grid_order = 3;
  bad.goal_threshold = 0.0;
  Obstacle o;
  o.trajectory = FixedPoint{{0, 0, 0}};
  o.safety_radius = -0.5;
  bad.obstacles.push_back(o);
  const auto issues = validate(bad);
  CHECK(issues.size() == 3);

  ScenarioConfig outside = scn;
  outside.start = {100, 0, 0};
  CHECK(validate(outside).size() == 1);
}
