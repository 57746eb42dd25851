#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chebplan/apf.hpp"

using namespace chebplan;

TEST_CASE("repulsive magnitude values") {
  ApfParams p;  // alpha = 1.875, eta = 0.029, clamped
  CHECK(repulsive_magnitude(p.alpha * 2.0, 2.0, p) == doctest::Approx(0.5 - 0.029).epsilon(1e-12));
  CHECK(repulsive_magnitude(0.471, 1.0, p) > 0.0);

  // Far field: clamped to zero; unclamped settles at -eta.
  CHECK(repulsive_magnitude(p.alpha * 1.0 + 25.0, 1.0, p) == 0.0);
  ApfParams raw = p;
  raw.clamp_nonnegative = false;
  CHECK(repulsive_magnitude(raw.alpha * 1.0 + 25.0, 1.0, raw) == doctest::Approx(-0.029).epsilon(1e-9));

  CHECK(repulsive_magnitude(0.0, 1.0, p) ==
        doctest::Approx(0.5 * (1.0 + std::tanh(1.875)) - 0.029).epsilon(1e-12));
  CHECK(repulsive_magnitude(0.0, 1.0, p) == doctest::Approx(0.948).epsilon(1e-3));
}

TEST_CASE("repulsive magnitude never increases with distance") {
  for (const bool clamp : {true, false}) {
    ApfParams p;
    p.clamp_nonnegative = clamp;
    double prev = 1e100;
    for (int i = 0; i <= 2000; ++i) {
      const double dist = 6.0 * i / 2000.0;
      const double f = repulsive_magnitude(dist, 1.2, p);
      CHECK(f <= prev + 1e-15);
      prev = f;
    }
  }
}

TEST_CASE("blend command directions") {
  ApfParams p;
  const Vec3 u_opt{0.3, -0.2, 1.0};

  CHECK(norm(blend_command(u_opt, {0, 0, 0}, {}, p) - u_opt) == 0.0);

  // Single obstacle along -x from the vehicle: correction is +x with the
  // sigmoid magnitude.
  const double dist = 0.9;
  const Vec3 uav{1, 2, 0.5};
  const std::vector<std::pair<Vec3, double>> one{{uav - Vec3{dist, 0, 0}, 1.0}};
  const Vec3 out = blend_command(u_opt, uav, one, p);
  CHECK((out - u_opt).x == doctest::Approx(repulsive_magnitude(dist, 1.0, p)).epsilon(1e-12));
  CHECK(std::abs((out - u_opt).y) < 1e-15);

  // Mirrored obstacles cancel laterally.
  const std::vector<std::pair<Vec3, double>> two{{uav - Vec3{0.7, 0, 0}, 1.0},
                                                 {uav + Vec3{0.7, 0, 0}, 1.0}};
  const Vec3 cancel = blend_command(u_opt, uav, two, p);
  CHECK(norm(cancel - u_opt) < 1e-15);
}

TEST_CASE("blend is equivariant under rigid translation") {
  ApfParams p;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Vec3 uav{u(rng), u(rng), u(rng)};
    const Vec3 u_opt{u(rng), u(rng), u(rng)};
    const Vec3 shift{u(rng), u(rng), u(rng)};
    std::vector<std::pair<Vec3, double>> obs{{{u(rng), u(rng), u(rng)}, 0.8},
                                             {{u(rng), u(rng), u(rng)}, 1.1}};
    const Vec3 base = blend_command(u_opt, uav, obs, p);
    for (auto& [pos, r] : obs) pos += shift;
    const Vec3 moved = blend_command(u_opt + shift, uav + shift, obs, p);
    CHECK(norm(moved - (base + shift)) < 1e-12);
  }
}

TEST_CASE("clamped correction never points toward the obstacle") {
  ApfParams p;
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 uav{u(rng), u(rng), u(rng)};
    const Vec3 obs{u(rng), u(rng), u(rng)};
    if (norm(uav - obs) < 1e-6) continue;
    const std::vector<std::pair<Vec3, double>> one{{obs, 1.0}};
    const Vec3 u_opt{u(rng), u(rng), u(rng)};
    const Vec3 delta = blend_command(u_opt, uav, one, p) - u_opt;
    CHECK(dot(delta, uav - obs) >= -1e-15);
  }
}

TEST_CASE("zero separation falls back to the last valid direction") {
  ApfParams p;
  ApfCorrector corrector(p, {0, 1, 0});
  const Vec3 uav{1, 0, 0};

  // First call with the obstacle to the -x side establishes the direction.
  std::vector<std::pair<Vec3, double>> obs{{{0.2, 0, 0}, 1.0}};
  corrector.blend({0, 0, 0}, uav, obs);
  CHECK(corrector.degenerate_events() == 0);

  // Obstacle right on top of the vehicle: previous +x direction is reused.
  obs[0].first = uav;
  const Vec3 out = corrector.blend({0, 0, 0}, uav, obs);
  CHECK(corrector.degenerate_events() == 1);
  CHECK(out.x == doctest::Approx(repulsive_magnitude(0.0, 1.0, p)).epsilon(1e-12));
  CHECK(std::abs(out.y) < 1e-15);

  // Without any history the configured fallback direction is used.
  ApfCorrector fresh(p, {0, 1, 0});
  const Vec3 fb = fresh.blend({0, 0, 0}, uav, obs);
  CHECK(fresh.degenerate_events() == 1);
  CHECK(fb.y == doctest::Approx(repulsive_magnitude(0.0, 1.0, p)).epsilon(1e-12));
}
