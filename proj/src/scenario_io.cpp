#include "chebplan/scenario_io.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "chebplan/format.hpp"

namespace chebplan {

namespace {

using Issues = std::vector<std::string>;

void check_keys(const YAML::Node& node, const std::string& prefix,
                const std::set<std::string>& allowed, Issues& issues) {
  if (!node.IsMap()) return;
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) issues.push_back(prefix + key + ": unknown key");
  }
}

double get_double(const YAML::Node& node, const std::string& path, double fallback,
                  Issues& issues) {
  if (!node) return fallback;
  try {
    return node.as<double>();
  } catch (const YAML::Exception&) {
    issues.push_back(path + ": expected a number");
    return fallback;
  }
}

int get_int(const YAML::Node& node, const std::string& path, int fallback, Issues& issues) {
  if (!node) return fallback;
  try {
    return node.as<int>();
  } catch (const YAML::Exception&) {
    issues.push_back(path + ": expected an integer");
    return fallback;
  }
}

bool get_bool(const YAML::Node& node, const std::string& path, bool fallback, Issues& issues) {
  if (!node) return fallback;
  try {
    return node.as<bool>();
  } catch (const YAML::Exception&) {
    issues.push_back(path + ": expected true/false");
    return fallback;
  }
}

Vec3 get_vec3(const YAML::Node& node, const std::string& path, const Vec3& fallback,
              Issues& issues) {
  if (!node) return fallback;
  if (!node.IsSequence() || node.size() != 3) {
    issues.push_back(path + ": expected a sequence of 3 numbers");
    return fallback;
  }
  try {
    return {node[0].as<double>(), node[1].as<double>(), node[2].as<double>()};
  } catch (const YAML::Exception&) {
    issues.push_back(path + ": expected a sequence of 3 numbers");
    return fallback;
  }
}

Obstacle parse_obstacle(const YAML::Node& node, const std::string& path, Issues& issues) {
  Obstacle o;
  check_keys(node, path + ".", {"safety_radius", "fixed", "circular", "sampled"}, issues);
  o.safety_radius = get_double(node["safety_radius"], path + ".safety_radius", 0.5, issues);
  const int modes = int(bool(node["fixed"])) + int(bool(node["circular"])) + int(bool(node["sampled"]));
  if (modes != 1) {
    issues.push_back(path + ": exactly one of fixed/circular/sampled required");
    return o;
  }
  if (const auto f = node["fixed"]) {
    check_keys(f, path + ".fixed.", {"point"}, issues);
    o.trajectory = FixedPoint{get_vec3(f["point"], path + ".fixed.point", {}, issues)};
  } else if (const auto c = node["circular"]) {
    check_keys(c, path + ".circular.",
               {"center", "radius", "angular_speed", "height", "phase"}, issues);
    CircularOrbit orbit;
    orbit.center = get_vec3(c["center"], path + ".circular.center", {}, issues);
    orbit.radius = get_double(c["radius"], path + ".circular.radius", 0.5, issues);
    orbit.angular_speed = get_double(c["angular_speed"], path + ".circular.angular_speed", 1.0, issues);
    orbit.height = get_double(c["height"], path + ".circular.height", 0.0, issues);
    orbit.phase = get_double(c["phase"], path + ".circular.phase", 0.0, issues);
    o.trajectory = orbit;
  } else {
    const auto s = node["sampled"];
    check_keys(s, path + ".sampled.", {"times", "points"}, issues);
    SampledPath sp;
    const auto times = s["times"];
    const auto points = s["points"];
    if (!times || !times.IsSequence() || !points || !points.IsSequence() ||
        times.size() != points.size()) {
      issues.push_back(path + ".sampled: times and points must be sequences of equal length");
    } else {
      for (std::size_t i = 0; i < times.size(); ++i) {
        sp.times.push_back(get_double(times[i], path + ".sampled.times", 0.0, issues));
        sp.points.push_back(get_vec3(points[i], path + ".sampled.points", {}, issues));
      }
    }
    o.trajectory = sp;
  }
  return o;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& yaml_text) {
  Issues issues;
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& ex) {
    throw ScenarioError({std::string("YAML parse error: ") + ex.what()});
  }
  if (!root.IsMap()) throw ScenarioError({"document root must be a map"});

  check_keys(root, "",
             {"start", "goal", "waypoints", "dynamics", "bounds", "obstacles", "apf",
              "constraint", "solver", "grid_order", "controller_rate_hz", "planner_rate_hz",
              "goal_threshold", "sim_duration", "boundary_switching", "predict_obstacles",
              "interpolate_commands"},
             issues);

  ScenarioConfig scn;
  if (!root["start"]) issues.push_back("start: required");
  if (!root["goal"]) issues.push_back("goal: required");
  scn.start = get_vec3(root["start"], "start", {}, issues);
  scn.goal = get_vec3(root["goal"], "goal", {}, issues);

  if (const auto w = root["waypoints"]) {
    if (!w.IsSequence()) {
      issues.push_back("waypoints: expected a sequence");
    } else {
      for (std::size_t i = 0; i < w.size(); ++i)
        scn.waypoints.push_back(
            get_vec3(w[i], "waypoints[" + std::to_string(i) + "]", {}, issues));
    }
  }

  if (const auto d = root["dynamics"]) {
    check_keys(d, "dynamics.", {"gains"}, issues);
    const Vec3 k = get_vec3(d["gains"], "dynamics.gains", {1.0, 1.0, 1.0}, issues);
    scn.dynamics = {k.x, k.y, k.z};
  }

  if (const auto b = root["bounds"]) {
    check_keys(b, "bounds.", {"pos_lo", "pos_hi", "cmd_lo", "cmd_hi", "vel_lo", "vel_hi"},
               issues);
    Bounds def;
    scn.bounds.pos_lo = get_vec3(b["pos_lo"], "bounds.pos_lo", def.pos_lo, issues);
    scn.bounds.pos_hi = get_vec3(b["pos_hi"], "bounds.pos_hi", def.pos_hi, issues);
    scn.bounds.cmd_lo = get_vec3(b["cmd_lo"], "bounds.cmd_lo", def.cmd_lo, issues);
    scn.bounds.cmd_hi = get_vec3(b["cmd_hi"], "bounds.cmd_hi", def.cmd_hi, issues);
    scn.bounds.vel_lo = get_vec3(b["vel_lo"], "bounds.vel_lo", def.vel_lo, issues);
    scn.bounds.vel_hi = get_vec3(b["vel_hi"], "bounds.vel_hi", def.vel_hi, issues);
  }

  if (const auto obs = root["obstacles"]) {
    if (!obs.IsSequence()) {
      issues.push_back("obstacles: expected a sequence");
    } else {
      for (std::size_t i = 0; i < obs.size(); ++i)
        scn.obstacles.push_back(
            parse_obstacle(obs[i], "obstacles[" + std::to_string(i) + "]", issues));
    }
  }

  if (const auto a = root["apf"]) {
    check_keys(a, "apf.", {"alpha", "eta", "clamp_nonnegative"}, issues);
    scn.apf.alpha = get_double(a["alpha"], "apf.alpha", scn.apf.alpha, issues);
    scn.apf.eta = get_double(a["eta"], "apf.eta", scn.apf.eta, issues);
    scn.apf.clamp_nonnegative =
        get_bool(a["clamp_nonnegative"], "apf.clamp_nonnegative", true, issues);
  }

  if (const auto c = root["constraint"]) {
    check_keys(c, "constraint.", {"delta", "epsilon_seg"}, issues);
    scn.constraint.delta = get_double(c["delta"], "constraint.delta", scn.constraint.delta, issues);
    scn.constraint.epsilon_seg =
        get_double(c["epsilon_seg"], "constraint.epsilon_seg", scn.constraint.epsilon_seg, issues);
  }

  if (const auto s = root["solver"]) {
    check_keys(s, "solver.",
               {"tol_eq", "tol_ineq", "tol_bound", "tol_stationarity", "max_outer_iters",
                "max_inner_iters", "initial_penalty", "penalty_growth", "dt_min"},
               issues);
    auto& sp = scn.solver;
    sp.tol_eq = get_double(s["tol_eq"], "solver.tol_eq", sp.tol_eq, issues);
    sp.tol_ineq = get_double(s["tol_ineq"], "solver.tol_ineq", sp.tol_ineq, issues);
    sp.tol_bound = get_double(s["tol_bound"], "solver.tol_bound", sp.tol_bound, issues);
    sp.tol_stationarity =
        get_double(s["tol_stationarity"], "solver.tol_stationarity", sp.tol_stationarity, issues);
    sp.max_outer_iters = get_int(s["max_outer_iters"], "solver.max_outer_iters", sp.max_outer_iters, issues);
    sp.max_inner_iters = get_int(s["max_inner_iters"], "solver.max_inner_iters", sp.max_inner_iters, issues);
    sp.initial_penalty = get_double(s["initial_penalty"], "solver.initial_penalty", sp.initial_penalty, issues);
    sp.penalty_growth = get_double(s["penalty_growth"], "solver.penalty_growth", sp.penalty_growth, issues);
    sp.dt_min = get_double(s["dt_min"], "solver.dt_min", sp.dt_min, issues);
  }

  scn.grid_order = get_int(root["grid_order"], "grid_order", scn.grid_order, issues);
  scn.controller_rate_hz =
      get_double(root["controller_rate_hz"], "controller_rate_hz", scn.controller_rate_hz, issues);
  scn.planner_rate_hz =
      get_double(root["planner_rate_hz"], "planner_rate_hz", scn.planner_rate_hz, issues);
  scn.goal_threshold = get_double(root["goal_threshold"], "goal_threshold", scn.goal_threshold, issues);
  scn.sim_duration = get_double(root["sim_duration"], "sim_duration", scn.sim_duration, issues);
  scn.boundary_switching =
      get_bool(root["boundary_switching"], "boundary_switching", scn.boundary_switching, issues);
  scn.predict_obstacles =
      get_bool(root["predict_obstacles"], "predict_obstacles", scn.predict_obstacles, issues);
  scn.interpolate_commands =
      get_bool(root["interpolate_commands"], "interpolate_commands", scn.interpolate_commands, issues);

  for (auto& msg : validate(scn)) issues.push_back(std::move(msg));
  if (!issues.empty()) throw ScenarioError(std::move(issues));
  return scn;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError({"cannot open scenario file: " + path});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

namespace {

std::string vec3_str(const Vec3& v) {
  return "[" + format_double(v.x) + ", " + format_double(v.y) + ", " + format_double(v.z) + "]";
}

}  // namespace

std::string normalize_scenario(const ScenarioConfig& scn) {
  std::ostringstream out;
  out << "# positions/velocities in meters and meters/second, times in seconds\n";
  out << "start: " << vec3_str(scn.start) << "\n";
  out << "goal: " << vec3_str(scn.goal) << "\n";
  if (!scn.waypoints.empty()) {
    out << "waypoints:\n";
    for (const auto& w : scn.waypoints) out << "  - " << vec3_str(w) << "\n";
  }
  out << "dynamics:\n  gains: "
      << vec3_str({scn.dynamics.kx, scn.dynamics.ky, scn.dynamics.kz}) << "\n";
  out << "bounds:\n";
  out << "  pos_lo: " << vec3_str(scn.bounds.pos_lo) << "\n";
  out << "  pos_hi: " << vec3_str(scn.bounds.pos_hi) << "\n";
  out << "  cmd_lo: " << vec3_str(scn.bounds.cmd_lo) << "\n";
  out << "  cmd_hi: " << vec3_str(scn.bounds.cmd_hi) << "\n";
  out << "  vel_lo: " << vec3_str(scn.bounds.vel_lo) << "\n";
  out << "  vel_hi: " << vec3_str(scn.bounds.vel_hi) << "\n";
  if (!scn.obstacles.empty()) {
    out << "obstacles:\n";
    for (const auto& o : scn.obstacles) {
      out << "  - safety_radius: " << format_double(o.safety_radius) << "\n";
      if (const auto* f = std::get_if<FixedPoint>(&o.trajectory)) {
        out << "    fixed:\n      point: " << vec3_str(f->point) << "\n";
      } else if (const auto* c = std::get_if<CircularOrbit>(&o.trajectory)) {
        out << "    circular:\n";
        out << "      center: " << vec3_str(c->center) << "\n";
        out << "      radius: " << format_double(c->radius) << "\n";
        out << "      angular_speed: " << format_double(c->angular_speed) << "\n";
        out << "      height: " << format_double(c->height) << "\n";
        out << "      phase: " << format_double(c->phase) << "\n";
      } else {
        const auto& s = std::get<SampledPath>(o.trajectory);
        out << "    sampled:\n      times: [";
        for (std::size_t i = 0; i < s.times.size(); ++i)
          out << (i ? ", " : "") << format_double(s.times[i]);
        out << "]\n      points: [";
        for (std::size_t i = 0; i < s.points.size(); ++i)
          out << (i ? ", " : "") << vec3_str(s.points[i]);
        out << "]\n";
      }
    }
  }
  out << "apf:\n";
  out << "  alpha: " << format_double(scn.apf.alpha) << "\n";
  out << "  eta: " << format_double(scn.apf.eta) << "\n";
  out << "  clamp_nonnegative: " << (scn.apf.clamp_nonnegative ? "true" : "false") << "\n";
  out << "constraint:\n";
  out << "  delta: " << format_double(scn.constraint.delta) << "\n";
  out << "  epsilon_seg: " << format_double(scn.constraint.epsilon_seg) << "\n";
  out << "solver:\n";
  out << "  tol_eq: " << format_double(scn.solver.tol_eq) << "\n";
  out << "  tol_ineq: " << format_double(scn.solver.tol_ineq) << "\n";
  out << "  tol_bound: " << format_double(scn.solver.tol_bound) << "\n";
  out << "  tol_stationarity: " << format_double(scn.solver.tol_stationarity) << "\n";
  out << "  max_outer_iters: " << scn.solver.max_outer_iters << "\n";
  out << "  max_inner_iters: " << scn.solver.max_inner_iters << "\n";
  out << "  initial_penalty: " << format_double(scn.solver.initial_penalty) << "\n";
  out << "  penalty_growth: " << format_double(scn.solver.penalty_growth) << "\n";
  out << "  dt_min: " << format_double(scn.solver.dt_min) << "\n";
  out << "grid_order: " << scn.grid_order << "\n";
  out << "controller_rate_hz: " << format_double(scn.controller_rate_hz) << "\n";
  out << "planner_rate_hz: " << format_double(scn.planner_rate_hz) << "\n";
  out << "goal_threshold: " << format_double(scn.goal_threshold) << "\n";
  out << "sim_duration: " << format_double(scn.sim_duration) << "\n";
  out << "boundary_switching: " << (scn.boundary_switching ? "true" : "false") << "\n";
  out << "predict_obstacles: " << (scn.predict_obstacles ? "true" : "false") << "\n";
  out << "interpolate_commands: " << (scn.interpolate_commands ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace chebplan
