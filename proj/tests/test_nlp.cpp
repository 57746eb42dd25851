#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chebplan/autodiff.hpp"
#include "chebplan/nlp.hpp"

using namespace chebplan;

namespace {

ScenarioConfig basic_scenario(int grid_order, bool with_obstacle) {
  ScenarioConfig scn;
  scn.start = {-1.5, -1.5, 0.75};
  scn.goal = {1.5, 1.5, 0.75};
  scn.bounds.pos_lo = {-3, -3, 0};
  scn.bounds.pos_hi = {3, 3, 2.5};
  scn.bounds.cmd_lo = {-3, -3, 0};
  scn.bounds.cmd_hi = {3, 3, 2.5};
  scn.bounds.vel_lo = {-1, -1, -1};
  scn.bounds.vel_hi = {1, 1, 1};
  scn.grid_order = grid_order;
  if (with_obstacle) {
    Obstacle o;
    o.trajectory = FixedPoint{{0, 0, 0.75}};
    o.safety_radius = 0.6;
    scn.obstacles.push_back(o);
  }
  return scn;
}

std::vector<Vec3> snapshots_at_zero(const ScenarioConfig& scn) {
  std::vector<Vec3> s;
  for (const auto& o : scn.obstacles) s.push_back(obstacle_position(o, 0.0));
  return s;
}

}  // namespace

TEST_CASE("row and dimension counts for n=8 with one obstacle") {
  const auto scn = basic_scenario(8, true);
  const auto grid = make_grid(8);
  const auto p = assemble(scn, grid, snapshots_at_zero(scn));

  CHECK(p.layout.dim() == 55);
  CHECK(p.num_eq() == 27);
  CHECK(p.num_segment_rows() == 8);
  CHECK(p.num_node_rows() == 9);
  // Two-sided element-wise speed bounds: 2 sides x 3 axes x 9 nodes.
  CHECK(p.num_velocity_rows() == 54);
  CHECK(p.num_ineq() == 71);

  CHECK(p.layout.state_index(0, 0) == 0);
  CHECK(p.layout.control_index(0, 0) == 27);
  CHECK(p.layout.dt_index() == 54);
}

TEST_CASE("no obstacles still yields a well-posed problem") {
  const auto scn = basic_scenario(6, false);
  const auto grid = make_grid(6);
  const auto p = assemble(scn, grid, {});
  CHECK(p.num_ineq() == p.num_velocity_rows());

  const auto guess = make_initial_guess(scn, grid, {}, nullptr);
  std::vector<double> z(guess.z.data(), guess.z.data() + guess.z.size());
  std::vector<double> eq, ineq;
  p.eval_all(z, &eq, &ineq);
  CHECK(eq.size() == static_cast<std::size_t>(p.num_eq()));
  CHECK(ineq.size() == static_cast<std::size_t>(p.num_ineq()));
}

TEST_CASE("velocity rows sit inside symmetric bounds at a constant guess") {
  const auto scn = basic_scenario(5, false);
  const auto grid = make_grid(5);
  const auto p = assemble(scn, grid, {});

  std::vector<Vec3> states(6, Vec3{0.25, -0.5, 1.0});
  const Eigen::VectorXd zv = pack_decision(p.layout, states, states, 2.7);
  std::vector<double> z(zv.data(), zv.data() + zv.size());
  std::vector<double> ineq;
  p.ineq_constraints(z, ineq);
  for (const double row : ineq) CHECK(row < 0.0);
}

TEST_CASE("boundary states are pinned through the variable bounds") {
  const auto scn = basic_scenario(8, true);
  const auto grid = make_grid(8);
  const auto p = assemble(scn, grid, snapshots_at_zero(scn));
  for (int a = 0; a < 3; ++a) {
    CHECK(p.var_lo[p.layout.state_index(0, a)] == component(scn.start, a));
    CHECK(p.var_hi[p.layout.state_index(0, a)] == component(scn.start, a));
    CHECK(p.var_lo[p.layout.state_index(8, a)] == component(scn.goal, a));
    CHECK(p.var_hi[p.layout.state_index(8, a)] == component(scn.goal, a));
  }
  CHECK(p.var_lo[p.layout.dt_index()] == scn.solver.dt_min);
}

TEST_CASE("assemble rejects endpoints inside a safety sphere") {
  auto scn = basic_scenario(6, true);
  const auto grid = make_grid(6);
  scn.start = {0.1, 0, 0.75};  // inside the 0.6 m sphere at the origin
  CHECK_THROWS_AS(assemble(scn, grid, snapshots_at_zero(scn)), std::invalid_argument);
}

TEST_CASE("cold guess is a straight line when nothing blocks") {
  const auto scn = basic_scenario(6, false);
  const auto grid = make_grid(6);
  const auto g = make_initial_guess(scn, grid, {}, nullptr);
  const Layout layout{grid.order};
  for (int r = 0; r <= 6; ++r) {
    const Vec3 expect = scn.start + (scn.goal - scn.start) * grid.nodes[r];
    for (int a = 0; a < 3; ++a) {
      CHECK(g.z[layout.state_index(r, a)] == doctest::Approx(component(expect, a)).epsilon(1e-14));
      CHECK(g.z[layout.control_index(r, a)] ==
            doctest::Approx(component(expect, a)).epsilon(1e-14));
    }
  }
  const double dist = norm(scn.goal - scn.start);
  CHECK(g.z[layout.dt_index()] == doctest::Approx(dist / norm(scn.bounds.vel_hi)));
  CHECK(g.lambda_eq.size() == 0);
}

TEST_CASE("cold guess routes around a blocking sphere") {
  const auto scn = basic_scenario(8, true);
  const auto grid = make_grid(8);
  const auto snaps = snapshots_at_zero(scn);
  const auto g = make_initial_guess(scn, grid, snaps, nullptr);
  std::vector<Vec3> states, controls;
  double dt = 0;
  unpack_decision(Layout{8}, g.z, states, controls, dt);
  for (std::size_t i = 0; i + 1 < states.size(); ++i) {
    for (int s = 0; s <= 500; ++s) {
      const Vec3 pnt = states[i] + (states[i + 1] - states[i]) * (s / 500.0);
      CHECK(norm(pnt - snaps[0]) >= 0.6 - 1e-9);
    }
  }
}

TEST_CASE("warm guess shifts node 0 onto the current state") {
  auto scn = basic_scenario(6, false);
  const auto grid = make_grid(6);

  PlanSolution prev;
  prev.delta_t = 2.0;
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int r = 0; r <= 6; ++r) {
    prev.node_states.push_back({u(rng), u(rng), 0.5});
    prev.node_controls.push_back({u(rng), u(rng), 0.5});
  }
  prev.lambda_eq = Eigen::VectorXd::Constant(21, 0.25);
  prev.mu_ineq = Eigen::VectorXd::Constant(42, 0.125);

  scn.start = {0.9, -0.7, 0.6};  // current state, not the original start
  const auto g = make_initial_guess(scn, grid, {}, &prev);
  std::vector<Vec3> states, controls;
  double dt = 0;
  unpack_decision(Layout{6}, g.z, states, controls, dt);
  CHECK(norm(states[0] - scn.start) == 0.0);
  for (int r = 1; r <= 6; ++r)
    CHECK(norm(states[static_cast<std::size_t>(r)] - prev.node_states[static_cast<std::size_t>(r)]) == 0.0);
  for (int r = 0; r <= 6; ++r)
    CHECK(norm(controls[static_cast<std::size_t>(r)] - prev.node_controls[static_cast<std::size_t>(r)]) == 0.0);
  CHECK(dt == 2.0);
  CHECK(g.lambda_eq.size() == 21);
}

TEST_CASE("constraint Jacobian matches central finite differences") {
  const auto scn = basic_scenario(6, true);
  const auto grid = make_grid(6);
  const auto p = assemble(scn, grid, snapshots_at_zero(scn));
  const int dim = p.layout.dim();

  auto stacked = [&p](const std::vector<double>& z, std::vector<double>& out) {
    std::vector<double> eq, ineq;
    p.eval_all(z, &eq, &ineq);
    out = eq;
    out.insert(out.end(), ineq.begin(), ineq.end());
  };
  auto stacked_dual = [&p](const std::vector<Dual<16>>& z, std::vector<Dual<16>>& out) {
    std::vector<Dual<16>> eq, ineq;
    p.eval_all(z, &eq, &ineq);
    out = eq;
    out.insert(out.end(), ineq.begin(), ineq.end());
  };

  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int point = 0; point < 10; ++point) {
    Eigen::VectorXd z(dim);
    for (int i = 0; i < dim; ++i) {
      const double lo = p.var_lo[i];
      const double hi = std::isfinite(p.var_hi[i]) ? p.var_hi[i] : lo + 5.0;
      z[i] = lo + (hi - lo) * u01(rng);
    }
    const Eigen::MatrixXd jac = jacobian<16>(stacked_dual, z);

    const double h = 1e-6;
    std::vector<double> zp(z.data(), z.data() + dim), zm(zp), op, om;
    for (int col = 0; col < dim; ++col) {
      zp[static_cast<std::size_t>(col)] = z[col] + h;
      zm[static_cast<std::size_t>(col)] = z[col] - h;
      stacked(zp, op);
      stacked(zm, om);
      for (int row = 0; row < jac.rows(); ++row) {
        const double fd = (op[static_cast<std::size_t>(row)] - om[static_cast<std::size_t>(row)]) / (2 * h);
        const double ad = jac(row, col);
        CHECK(std::abs(ad - fd) <= 1e-6 * std::max(std::abs(ad), std::abs(fd)) + 1e-8);
      }
      zp[static_cast<std::size_t>(col)] = z[col];
      zm[static_cast<std::size_t>(col)] = z[col];
    }
  }
}
