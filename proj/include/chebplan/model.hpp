#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "chebplan/vec3.hpp"

namespace chebplan {

// Per-axis command-tracking gains of the first-order vehicle model
// xdot = diag(kx, ky, kz) * (u_cmd - x). All gains in 1/s, > 0.
struct DynamicsParams {
  double kx = 1.0;
  double ky = 1.0;
  double kz = 1.0;

  double axis(int i) const { return i == 0 ? kx : (i == 1 ? ky : kz); }
};

// Element-wise box bounds on position, commanded position and velocity.
struct Bounds {
  Vec3 pos_lo{-10.0, -10.0, 0.0};
  Vec3 pos_hi{10.0, 10.0, 10.0};
  Vec3 cmd_lo{-10.0, -10.0, 0.0};
  Vec3 cmd_hi{10.0, 10.0, 10.0};
  Vec3 vel_lo{-1.0, -1.0, -1.0};
  Vec3 vel_hi{1.0, 1.0, 1.0};
};

// Obstacle trajectory models. An enumerated set keeps scenarios serializable.
struct FixedPoint {
  Vec3 point;
};

struct CircularOrbit {
  Vec3 center;           // m; orbit plane is horizontal through center + height
  double radius = 0.5;   // m
  double angular_speed = 1.0;  // rad/s
  double height = 0.0;   // m, offset above center
  double phase = 0.0;    // rad
};

struct SampledPath {
  std::vector<double> times;   // strictly increasing, seconds
  std::vector<Vec3> points;    // same length as times
};

struct Obstacle {
  std::variant<FixedPoint, CircularOrbit, SampledPath> trajectory;
  double safety_radius = 0.5;  // m, > 0
};

// Sigmoid repulsion parameters, see apf.hpp for the field itself.
struct ApfParams {
  double alpha = 1.875;  // dimensionless range scale
  double eta = 0.029;    // offset
  bool clamp_nonnegative = true;
};

// Parameters of the smooth segment-clearance constraint, see geometry.hpp.
struct SmoothConstraintParams {
  double delta = 0.05;        // sigmoid sharpness
  double epsilon_seg = 1e-12; // m^2, degenerate-segment guard on |b-a|^2
};

// Knobs of the augmented-Lagrangian NLP solver, see solver.hpp.
struct SolverParams {
  double tol_eq = 1e-6;
  double tol_ineq = 1e-6;
  double tol_bound = 1e-9;
  double tol_stationarity = 1e-5;
  int max_outer_iters = 40;
  int max_inner_iters = 200;
  double initial_penalty = 10.0;
  double penalty_growth = 10.0;
  double dt_min = 0.1;  // s, lower bound on the maneuver time
};

struct ScenarioConfig {
  Vec3 start;
  Vec3 goal;
  std::vector<Vec3> waypoints;  // interior waypoints, flown as chained legs
  DynamicsParams dynamics;
  Bounds bounds;
  std::vector<Obstacle> obstacles;
  ApfParams apf;
  SmoothConstraintParams constraint;
  SolverParams solver;
  int grid_order = 12;
  double controller_rate_hz = 60.0;
  double planner_rate_hz = 10.0;
  double goal_threshold = 0.1;  // m
  double sim_duration = 150.0;  // s
  bool boundary_switching = false;
  bool predict_obstacles = false;    // constant-velocity snapshot extrapolation
  bool interpolate_commands = false; // sample the plan's control polynomial over time
};

// Field-level invariant checks; returns one message per violation.
std::vector<std::string> validate(const ScenarioConfig& scn);

// Right-hand side of the tracking model, Vec3 per-axis k*(u - x).
template <class S>
Vec3T<S> dynamics_rhs(const Vec3T<S>& x, const Vec3T<S>& u_cmd, const DynamicsParams& p) {
  return {p.kx * (u_cmd.x - x.x), p.ky * (u_cmd.y - x.y), p.kz * (u_cmd.z - x.z)};
}

// Exact flow of the linear model over dt under a constant command:
// per axis, u + (x - u) * exp(-k dt). Throws on dt <= 0.
Vec3 dynamics_step_exact(const Vec3& x, const Vec3& u_cmd, const DynamicsParams& p, double dt);

// Obstacle position at time t >= 0. Sampled mode throws outside the recorded range.
Vec3 obstacle_position(const Obstacle& o, double t);

// Finite-difference velocity of the trajectory model, used for prediction.
Vec3 obstacle_velocity(const Obstacle& o, double t);

}  // namespace chebplan
