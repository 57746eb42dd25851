#include "chebplan/model.hpp"

#include <algorithm>

namespace chebplan {

Vec3 dynamics_step_exact(const Vec3& x, const Vec3& u_cmd, const DynamicsParams& p, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dynamics_step_exact: dt must be > 0");
  auto step = [dt](double xi, double ui, double k) { return ui + (xi - ui) * std::exp(-k * dt); };
  return {step(x.x, u_cmd.x, p.kx), step(x.y, u_cmd.y, p.ky), step(x.z, u_cmd.z, p.kz)};
}

Vec3 obstacle_position(const Obstacle& o, double t) {
  if (const auto* f = std::get_if<FixedPoint>(&o.trajectory)) {
    return f->point;
  }
  if (const auto* c = std::get_if<CircularOrbit>(&o.trajectory)) {
    const double a = c->angular_speed * t + c->phase;
    return {c->center.x + c->radius * std::cos(a), c->center.y + c->radius * std::sin(a),
            c->center.z + c->height};
  }
  const auto& s = std::get<SampledPath>(o.trajectory);
  if (s.times.empty()) throw std::invalid_argument("obstacle_position: empty sampled path");
  if (t < s.times.front() || t > s.times.back())
    throw std::out_of_range("obstacle_position: t outside recorded range");
  const auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
  if (it == s.times.begin()) return s.points.front();
  if (it == s.times.end()) return s.points.back();
  const std::size_t i = static_cast<std::size_t>(it - s.times.begin());
  const double t0 = s.times[i - 1], t1 = s.times[i];
  const double w = (t - t0) / (t1 - t0);
  return s.points[i - 1] * (1.0 - w) + s.points[i] * w;
}

Vec3 obstacle_velocity(const Obstacle& o, double t) {
  const double h = 1e-3;
  double lo = t - h, hi = t + h;
  if (const auto* s = std::get_if<SampledPath>(&o.trajectory)) {
    lo = std::max(lo, s->times.front());
    hi = std::min(hi, s->times.back());
  } else {
    lo = std::max(lo, 0.0);
  }
  if (!(hi > lo)) return {0.0, 0.0, 0.0};
  return (obstacle_position(o, hi) - obstacle_position(o, lo)) / (hi - lo);
}

namespace {

bool inside_box(const Vec3& v, const Vec3& lo, const Vec3& hi) {
  return v.x >= lo.x && v.x <= hi.x && v.y >= lo.y && v.y <= hi.y && v.z >= lo.z && v.z <= hi.z;
}

void check_pair(std::vector<std::string>& out, const std::string& name, const Vec3& lo,
                const Vec3& hi) {
  if (lo.x > hi.x || lo.y > hi.y || lo.z > hi.z)
    out.push_back("bounds." + name + ": lower bound exceeds upper bound");
}

}  // namespace

std::vector<std::string> validate(const ScenarioConfig& scn) {
  std::vector<std::string> out;
  if (!is_finite(scn.start)) out.push_back("start: components must be finite");
  if (!is_finite(scn.goal)) out.push_back("goal: components must be finite");
  if (!(scn.dynamics.kx > 0 && scn.dynamics.ky > 0 && scn.dynamics.kz > 0))
    out.push_back("dynamics.gains: all gains must be > 0");
  check_pair(out, "pos", scn.bounds.pos_lo, scn.bounds.pos_hi);
  check_pair(out, "cmd", scn.bounds.cmd_lo, scn.bounds.cmd_hi);
  check_pair(out, "vel", scn.bounds.vel_lo, scn.bounds.vel_hi);
  if (!inside_box(scn.start, scn.bounds.pos_lo, scn.bounds.pos_hi))
    out.push_back("start: outside position bounds");
  if (!inside_box(scn.goal, scn.bounds.pos_lo, scn.bounds.pos_hi))
    out.push_back("goal: outside position bounds");
  for (std::size_t i = 0; i < scn.obstacles.size(); ++i) {
    const auto& o = scn.obstacles[i];
    const std::string key = "obstacles[" + std::to_string(i) + "]";
    if (!(o.safety_radius > 0)) out.push_back(key + ".safety_radius: must be > 0");
    if (const auto* s = std::get_if<SampledPath>(&o.trajectory)) {
      if (s->times.size() < 2 || s->times.size() != s->points.size())
        out.push_back(key + ".samples: need >= 2 samples with matching times/points");
      else if (!std::is_sorted(s->times.begin(), s->times.end()))
        out.push_back(key + ".samples: times must be increasing");
    }
    if (const auto* c = std::get_if<CircularOrbit>(&o.trajectory)) {
      if (!(c->radius >= 0)) out.push_back(key + ".circular.radius: must be >= 0");
    }
  }
  if (scn.grid_order < 4) out.push_back("grid_order: must be >= 4");
  if (!(scn.controller_rate_hz > 0)) out.push_back("controller_rate_hz: must be > 0");
  if (!(scn.planner_rate_hz > 0)) out.push_back("planner_rate_hz: must be > 0");
  if (!(scn.goal_threshold > 0)) out.push_back("goal_threshold: must be > 0");
  if (!(scn.sim_duration > 0)) out.push_back("sim_duration: must be > 0");
  if (!(scn.apf.alpha > 0)) out.push_back("apf.alpha: must be > 0");
  if (!(scn.apf.eta >= 0)) out.push_back("apf.eta: must be >= 0");
  if (!(scn.constraint.delta > 0)) out.push_back("constraint.delta: must be > 0");
  if (!(scn.constraint.epsilon_seg > 0)) out.push_back("constraint.epsilon_seg: must be > 0");
  const auto& sp = scn.solver;
  if (!(sp.tol_eq > 0 && sp.tol_ineq > 0 && sp.tol_bound > 0 && sp.tol_stationarity > 0))
    out.push_back("solver: all tolerances must be > 0");
  if (!(sp.penalty_growth > 1)) out.push_back("solver.penalty_growth: must be > 1");
  if (!(sp.initial_penalty > 0)) out.push_back("solver.initial_penalty: must be > 0");
  if (!(sp.dt_min > 0)) out.push_back("solver.dt_min: must be > 0");
  if (sp.max_outer_iters < 1 || sp.max_inner_iters < 1)
    out.push_back("solver: iteration limits must be >= 1");
  return out;
}

}  // namespace chebplan
