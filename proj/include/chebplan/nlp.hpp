#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "chebplan/chebyshev.hpp"
#include "chebplan/geometry.hpp"
#include "chebplan/model.hpp"

namespace chebplan {

// Decision vector layout: node states (3 per node), node controls (3 per
// node), then the maneuver time. dim = 6(n+1) + 1.
struct Layout {
  int order = 0;

  int num_nodes() const { return order + 1; }
  int dim() const { return 6 * num_nodes() + 1; }
  int state_index(int node, int axis) const { return 3 * node + axis; }
  int control_index(int node, int axis) const { return 3 * num_nodes() + 3 * node + axis; }
  int dt_index() const { return 6 * num_nodes(); }
};

enum class SolveStatus { kConverged, kMaxIter, kInfeasibleDetected };

const char* to_string(SolveStatus s);

struct KktResiduals {
  double stationarity = 0.0;
  double eq_violation = 0.0;
  double ineq_violation = 0.0;
  double bound_violation = 0.0;
};

struct PlanSolution {
  std::vector<Vec3> node_states;
  std::vector<Vec3> node_controls;
  double delta_t = 0.0;  // maneuver time, s
  Eigen::VectorXd lambda_eq;
  Eigen::VectorXd mu_ineq;
  Eigen::VectorXd bound_duals;
  SolveStatus status = SolveStatus::kMaxIter;
  int iterations = 0;
  double solve_time = 0.0;  // wall seconds
  KktResiduals kkt;
  double epoch = 0.0;  // sim time the plan's tau = 0 refers to
};

// Minimum-time collocation NLP over one start->goal leg. Constraint
// conventions: equalities = 0, inequalities <= 0. Inequality row order is
// frozen: smooth segment rows (per obstacle, per segment), node clearance
// rows (per obstacle, per node), then velocity rows (per node, per axis,
// upper then lower).
struct NlpProblem {
  Layout layout;
  CollocationGrid grid;
  DynamicsParams dynamics;
  SmoothConstraintParams cparams;
  SolverParams solver;
  Vec3 start;
  Vec3 goal;
  std::vector<Vec3> obstacle_positions;  // snapshot per obstacle for this solve
  std::vector<double> obstacle_radii;
  Vec3 vel_lo;
  Vec3 vel_hi;
  Eigen::VectorXd var_lo;
  Eigen::VectorXd var_hi;

  int num_obstacles() const { return static_cast<int>(obstacle_radii.size()); }
  int num_eq() const { return 3 * layout.num_nodes(); }
  int num_segment_rows() const { return layout.order * num_obstacles(); }
  int num_node_rows() const { return layout.num_nodes() * num_obstacles(); }
  int num_velocity_rows() const { return 6 * layout.num_nodes(); }
  int num_ineq() const { return num_segment_rows() + num_node_rows() + num_velocity_rows(); }

  template <class S>
  Vec3T<S> state_at(const std::vector<S>& z, int node) const {
    return {z[static_cast<std::size_t>(layout.state_index(node, 0))],
            z[static_cast<std::size_t>(layout.state_index(node, 1))],
            z[static_cast<std::size_t>(layout.state_index(node, 2))]};
  }
  template <class S>
  Vec3T<S> control_at(const std::vector<S>& z, int node) const {
    return {z[static_cast<std::size_t>(layout.control_index(node, 0))],
            z[static_cast<std::size_t>(layout.control_index(node, 1))],
            z[static_cast<std::size_t>(layout.control_index(node, 2))]};
  }

  template <class S>
  S cost(const std::vector<S>& z) const {
    return z[static_cast<std::size_t>(layout.dt_index())];
  }

  // Single pass over the decision vector filling whichever outputs are
  // requested; D*X is shared between the collocation and velocity rows.
  template <class S>
  void eval_all(const std::vector<S>& z, std::vector<S>* eq_out, std::vector<S>* ineq_out) const {
    if (!eq_out && !ineq_out) return;
    const int nn = layout.num_nodes();
    const S dt = z[static_cast<std::size_t>(layout.dt_index())];

    std::vector<S> dx(static_cast<std::size_t>(3 * nn));
    for (int r = 0; r < nn; ++r) {
      for (int a = 0; a < 3; ++a) {
        S acc(0.0);
        for (int c = 0; c < nn; ++c)
          acc = acc + grid.diff_matrix(r, c) * z[static_cast<std::size_t>(layout.state_index(c, a))];
        dx[static_cast<std::size_t>(3 * r + a)] = acc;
      }
    }

    if (eq_out) {
      eq_out->resize(static_cast<std::size_t>(num_eq()));
      for (int r = 0; r < nn; ++r) {
        const Vec3T<S> x = state_at(z, r);
        const Vec3T<S> u = control_at(z, r);
        const Vec3T<S> f = dynamics_rhs(x, u, dynamics);
        (*eq_out)[static_cast<std::size_t>(3 * r + 0)] = dx[static_cast<std::size_t>(3 * r + 0)] - dt * f.x;
        (*eq_out)[static_cast<std::size_t>(3 * r + 1)] = dx[static_cast<std::size_t>(3 * r + 1)] - dt * f.y;
        (*eq_out)[static_cast<std::size_t>(3 * r + 2)] = dx[static_cast<std::size_t>(3 * r + 2)] - dt * f.z;
      }
    }

    if (ineq_out) {
      ineq_out->resize(static_cast<std::size_t>(num_ineq()));
      std::size_t idx = 0;
      for (int o = 0; o < num_obstacles(); ++o) {
        const Vec3T<S> obs{S(obstacle_positions[static_cast<std::size_t>(o)].x),
                           S(obstacle_positions[static_cast<std::size_t>(o)].y),
                           S(obstacle_positions[static_cast<std::size_t>(o)].z)};
        for (int r = 0; r < layout.order; ++r)
          (*ineq_out)[idx++] = smooth_constraint(state_at(z, r), state_at(z, r + 1), obs,
                                                 obstacle_radii[static_cast<std::size_t>(o)], cparams);
      }
      for (int o = 0; o < num_obstacles(); ++o) {
        const Vec3T<S> obs{S(obstacle_positions[static_cast<std::size_t>(o)].x),
                           S(obstacle_positions[static_cast<std::size_t>(o)].y),
                           S(obstacle_positions[static_cast<std::size_t>(o)].z)};
        for (int r = 0; r < nn; ++r)
          (*ineq_out)[idx++] =
              node_clearance(state_at(z, r), obs, obstacle_radii[static_cast<std::size_t>(o)]);
      }
      for (int r = 0; r < nn; ++r) {
        for (int a = 0; a < 3; ++a) {
          const S vel = dx[static_cast<std::size_t>(3 * r + a)] / dt;
          (*ineq_out)[idx++] = vel - component(vel_hi, a);
          (*ineq_out)[idx++] = component(vel_lo, a) - vel;
        }
      }
    }
  }

  template <class S>
  void eq_constraints(const std::vector<S>& z, std::vector<S>& out) const {
    eval_all<S>(z, &out, nullptr);
  }
  template <class S>
  void ineq_constraints(const std::vector<S>& z, std::vector<S>& out) const {
    eval_all<S>(z, nullptr, &out);
  }
};

// Initial point plus optional multiplier estimates for warm starting.
struct NlpGuess {
  Eigen::VectorXd z;
  Eigen::VectorXd lambda_eq;  // empty when cold
  Eigen::VectorXd mu_ineq;    // empty when cold
};

Eigen::VectorXd pack_decision(const Layout& layout, const std::vector<Vec3>& states,
                              const std::vector<Vec3>& controls, double delta_t);
void unpack_decision(const Layout& layout, const Eigen::VectorXd& z, std::vector<Vec3>& states,
                     std::vector<Vec3>& controls, double& delta_t);

// Build the minimum-time NLP for one leg with the given obstacle position
// snapshots. Boundary conditions are imposed by pinning the node-0 and node-n
// state bounds. Throws if start or goal lies inside a safety sphere.
NlpProblem assemble(const ScenarioConfig& scn, const CollocationGrid& grid,
                    const std::vector<Vec3>& obstacle_snapshots);

// Warm path: reuse the previous solution's nodes and multipliers with node 0
// overwritten by the current state (scn.start). Cold path: straight-line
// nodes repaired around the snapshots, controls equal to states,
// dt = distance / |speed bound|.
NlpGuess make_initial_guess(const ScenarioConfig& scn, const CollocationGrid& grid,
                            const std::vector<Vec3>& obstacle_snapshots,
                            const PlanSolution* previous);

}  // namespace chebplan
