#include "chebplan/nlp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace chebplan {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kMaxIter: return "max_iter";
    case SolveStatus::kInfeasibleDetected: return "infeasible_detected";
  }
  return "unknown";
}

Eigen::VectorXd pack_decision(const Layout& layout, const std::vector<Vec3>& states,
                              const std::vector<Vec3>& controls, double delta_t) {
  Eigen::VectorXd z(layout.dim());
  for (int r = 0; r < layout.num_nodes(); ++r) {
    const auto& x = states[static_cast<std::size_t>(r)];
    const auto& u = controls[static_cast<std::size_t>(r)];
    for (int a = 0; a < 3; ++a) {
      z[layout.state_index(r, a)] = component(x, a);
      z[layout.control_index(r, a)] = component(u, a);
    }
  }
  z[layout.dt_index()] = delta_t;
  return z;
}

void unpack_decision(const Layout& layout, const Eigen::VectorXd& z, std::vector<Vec3>& states,
                     std::vector<Vec3>& controls, double& delta_t) {
  const int nn = layout.num_nodes();
  states.resize(static_cast<std::size_t>(nn));
  controls.resize(static_cast<std::size_t>(nn));
  for (int r = 0; r < nn; ++r) {
    states[static_cast<std::size_t>(r)] = {z[layout.state_index(r, 0)], z[layout.state_index(r, 1)],
                                           z[layout.state_index(r, 2)]};
    controls[static_cast<std::size_t>(r)] = {z[layout.control_index(r, 0)],
                                             z[layout.control_index(r, 1)],
                                             z[layout.control_index(r, 2)]};
  }
  delta_t = z[layout.dt_index()];
}

NlpProblem assemble(const ScenarioConfig& scn, const CollocationGrid& grid,
                    const std::vector<Vec3>& obstacle_snapshots) {
  if (obstacle_snapshots.size() != scn.obstacles.size())
    throw std::invalid_argument("assemble: one snapshot per obstacle required");
  for (std::size_t k = 0; k < scn.obstacles.size(); ++k) {
    const double r = scn.obstacles[k].safety_radius;
    if (norm(scn.start - obstacle_snapshots[k]) < r)
      throw std::invalid_argument("assemble: start lies inside a safety sphere");
    if (norm(scn.goal - obstacle_snapshots[k]) < r)
      throw std::invalid_argument("assemble: goal lies inside a safety sphere");
  }

  NlpProblem p;
  p.layout.order = grid.order;
  p.grid = grid;
  p.dynamics = scn.dynamics;
  p.cparams = scn.constraint;
  p.solver = scn.solver;
  p.start = scn.start;
  p.goal = scn.goal;
  p.obstacle_positions = obstacle_snapshots;
  p.obstacle_radii.reserve(scn.obstacles.size());
  for (const auto& o : scn.obstacles) p.obstacle_radii.push_back(o.safety_radius);
  p.vel_lo = scn.bounds.vel_lo;
  p.vel_hi = scn.bounds.vel_hi;

  const int dim = p.layout.dim();
  p.var_lo.resize(dim);
  p.var_hi.resize(dim);
  const int n = grid.order;
  for (int r = 0; r <= n; ++r) {
    for (int a = 0; a < 3; ++a) {
      p.var_lo[p.layout.state_index(r, a)] = component(scn.bounds.pos_lo, a);
      p.var_hi[p.layout.state_index(r, a)] = component(scn.bounds.pos_hi, a);
      p.var_lo[p.layout.control_index(r, a)] = component(scn.bounds.cmd_lo, a);
      p.var_hi[p.layout.control_index(r, a)] = component(scn.bounds.cmd_hi, a);
    }
  }
  // Boundary conditions by bound pinning: exact, no extra equality rows.
  for (int a = 0; a < 3; ++a) {
    p.var_lo[p.layout.state_index(0, a)] = component(scn.start, a);
    p.var_hi[p.layout.state_index(0, a)] = component(scn.start, a);
    p.var_lo[p.layout.state_index(n, a)] = component(scn.goal, a);
    p.var_hi[p.layout.state_index(n, a)] = component(scn.goal, a);
  }
  p.var_lo[p.layout.dt_index()] = scn.solver.dt_min;
  p.var_hi[p.layout.dt_index()] = std::numeric_limits<double>::infinity();
  return p;
}

NlpGuess make_initial_guess(const ScenarioConfig& scn, const CollocationGrid& grid,
                            const std::vector<Vec3>& obstacle_snapshots,
                            const PlanSolution* previous) {
  const Layout layout{grid.order};
  NlpGuess g;
  const int nn = layout.num_nodes();

  if (previous && static_cast<int>(previous->node_states.size()) == nn) {
    std::vector<Vec3> states = previous->node_states;
    states[0] = scn.start;  // receding-horizon shift onto the current state
    g.z = pack_decision(layout, states, previous->node_controls,
                        std::max(previous->delta_t, scn.solver.dt_min));
    g.lambda_eq = previous->lambda_eq;
    g.mu_ineq = previous->mu_ineq;
    return g;
  }

  std::vector<Vec3> states(static_cast<std::size_t>(nn));
  for (int r = 0; r < nn; ++r)
    states[static_cast<std::size_t>(r)] = scn.start + (scn.goal - scn.start) * grid.nodes[r];

  std::vector<std::pair<Vec3, double>> spheres;
  spheres.reserve(scn.obstacles.size());
  for (std::size_t k = 0; k < scn.obstacles.size(); ++k)
    spheres.emplace_back(obstacle_snapshots[k], scn.obstacles[k].safety_radius);
  states = repair_guess(states, spheres);

  const double speed = norm(scn.bounds.vel_hi);
  const double dist = norm(scn.goal - scn.start);
  const double dt = std::max(speed > 0 ? dist / speed : scn.solver.dt_min, scn.solver.dt_min);
  g.z = pack_decision(layout, states, states, dt);
  return g;
}

}  // namespace chebplan
