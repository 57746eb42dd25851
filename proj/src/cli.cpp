#include "chebplan/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "chebplan/chebyshev.hpp"
#include "chebplan/executor.hpp"
#include "chebplan/metrics.hpp"
#include "chebplan/nlp.hpp"
#include "chebplan/scenario_io.hpp"
#include "chebplan/solver.hpp"

namespace chebplan {

namespace {

int report_config_error(const ScenarioError& ex) {
  std::cerr << "configuration error:\n";
  for (const auto& issue : ex.issues) std::cerr << "  " << issue << "\n";
  return 2;
}

nlohmann::json vec3_json(const Vec3& v) { return {v.x, v.y, v.z}; }

}  // namespace

int cmd_run(const RunArgs& args) {
  ScenarioConfig scn;
  try {
    scn = load_scenario(args.scenario_path);
  } catch (const ScenarioError& ex) {
    return report_config_error(ex);
  }
  RunOptions opt;
  if (args.mode == "lockstep") {
    opt.mode = RunMode::kLockstep;
  } else if (args.mode == "realtime") {
    opt.mode = RunMode::kRealtime;
  } else {
    std::cerr << "configuration error:\n  --mode: expected lockstep or realtime, got '"
              << args.mode << "'\n";
    return 2;
  }
  opt.solve_ticks = args.solve_ticks;
  opt.disable_planner_after_first = args.disable_planner;

  SimLog log;
  try {
    log = run(scn, opt);
  } catch (const std::invalid_argument& ex) {
    std::cerr << "configuration error:\n  " << ex.what() << "\n";
    return 2;
  }

  std::filesystem::create_directories(args.out_dir);
  const RunMetrics metrics = compute_metrics(log, scn);
  write_csv(log, args.out_dir + "/log.csv");
  write_sidecar_json(log, normalize_scenario(scn), args.seed, args.out_dir + "/solves.json");
  write_metrics_json(metrics, args.out_dir + "/metrics.json");

  std::cout << "ticks=" << log.ticks.size() << " solves=" << log.solves.size()
            << " legs=" << metrics.legs_completed << " min_separation=" << metrics.min_separation
            << " collisions=" << metrics.collision_count
            << " degraded_events=" << log.degraded_events << "\n";
  if (metrics.collision_count > 0) {
    std::cerr << "collision detected (" << metrics.collision_count << " ticks)\n";
    return 1;
  }
  if (!log.completed) {
    std::cerr << "run did not complete\n";
    return 1;
  }
  return 0;
}

int cmd_plan(const std::string& scenario_path, const std::string& out_path) {
  ScenarioConfig scn;
  try {
    scn = load_scenario(scenario_path);
  } catch (const ScenarioError& ex) {
    return report_config_error(ex);
  }

  const CollocationGrid grid = make_grid(scn.grid_order);
  std::vector<Vec3> snapshots;
  for (const auto& o : scn.obstacles) snapshots.push_back(obstacle_position(o, 0.0));

  // Interior waypoints become chained two-point phases, each starting from
  // the previous phase's terminal state; total cost is the sum of phase times.
  std::vector<Vec3> route{scn.start};
  for (const auto& w : scn.waypoints) route.push_back(w);
  route.push_back(scn.goal);

  nlohmann::json j;
  auto& phases = j["phases"] = nlohmann::json::array();
  std::vector<PlanSolution> plans;
  double total_time = 0.0;
  bool all_converged = true;
  for (std::size_t leg = 0; leg + 1 < route.size(); ++leg) {
    ScenarioConfig leg_scn = scn;
    leg_scn.start = route[leg];
    leg_scn.goal = route[leg + 1];
    leg_scn.waypoints.clear();
    PlanSolution plan;
    try {
      const NlpProblem problem = assemble(leg_scn, grid, snapshots);
      const NlpGuess guess = make_initial_guess(leg_scn, grid, snapshots, nullptr);
      plan = solve(problem, guess, false);
    } catch (const std::invalid_argument& ex) {
      std::cerr << "configuration error:\n  " << ex.what() << "\n";
      return 2;
    }
    total_time += plan.delta_t;
    all_converged = all_converged && plan.status == SolveStatus::kConverged;

    nlohmann::json ph;
    ph["start"] = vec3_json(leg_scn.start);
    ph["goal"] = vec3_json(leg_scn.goal);
    ph["delta_t"] = plan.delta_t;
    ph["status"] = to_string(plan.status);
    ph["iterations"] = plan.iterations;
    ph["solve_time"] = plan.solve_time;
    ph["kkt"] = {{"stationarity", plan.kkt.stationarity},
                 {"eq_violation", plan.kkt.eq_violation},
                 {"ineq_violation", plan.kkt.ineq_violation},
                 {"bound_violation", plan.kkt.bound_violation}};
    auto& nodes = ph["nodes"] = nlohmann::json::array();
    for (int r = 0; r < grid.num_nodes(); ++r) {
      nodes.push_back({{"tau", grid.nodes[r]},
                       {"state", vec3_json(plan.node_states[static_cast<std::size_t>(r)])},
                       {"control", vec3_json(plan.node_controls[static_cast<std::size_t>(r)])}});
    }
    phases.push_back(std::move(ph));
    plans.push_back(std::move(plan));
  }
  j["total_time"] = total_time;

  // Dense preview of the interpolated trajectory, 200 samples over all phases.
  auto& dense = j["dense_trajectory"] = nlohmann::json::array();
  const int samples = 200;
  double t_base = 0.0;
  std::size_t leg = 0;
  for (int i = 0; i < samples; ++i) {
    const double t = total_time * static_cast<double>(i) / (samples - 1);
    while (leg + 1 < plans.size() && t > t_base + plans[leg].delta_t) t_base += plans[leg++].delta_t;
    const auto& plan = plans[leg];
    const double tau = plan.delta_t > 0 ? std::clamp((t - t_base) / plan.delta_t, 0.0, 1.0) : 0.0;
    dense.push_back({{"t", t},
                     {"pos", vec3_json(interpolate(grid, plan.node_states, tau))},
                     {"cmd", vec3_json(interpolate(grid, plan.node_controls, tau))}});
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open for writing: " << out_path << "\n";
    return 1;
  }
  out << j.dump(2) << "\n";

  if (!all_converged) {
    std::cerr << "solver did not converge; see " << out_path << " for diagnostics\n";
    for (const auto& plan : plans)
      if (plan.status != SolveStatus::kConverged)
        std::cerr << "  status=" << to_string(plan.status) << " eq=" << plan.kkt.eq_violation
                  << " ineq=" << plan.kkt.ineq_violation
                  << " stationarity=" << plan.kkt.stationarity << "\n";
    return 1;
  }
  std::cout << "total_time=" << total_time << " phases=" << plans.size() << "\n";
  return 0;
}

int cmd_validate(const std::string& scenario_path) {
  try {
    const ScenarioConfig scn = load_scenario(scenario_path);
    std::cout << normalize_scenario(scn);
    return 0;
  } catch (const ScenarioError& ex) {
    return report_config_error(ex);
  }
}

}  // namespace chebplan
