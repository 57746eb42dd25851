#include "chebplan/executor.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include "chebplan/apf.hpp"
#include "chebplan/chebyshev.hpp"
#include "chebplan/geometry.hpp"
#include "chebplan/nlp.hpp"
#include "chebplan/solver.hpp"

namespace chebplan {

namespace {

// sleep_until alone can be milliseconds coarse under virtualized kernels;
// finish the final stretch with a spin so controller ticks hold their slots.
void precise_sleep_until(std::chrono::steady_clock::time_point target) {
  std::this_thread::sleep_until(target - std::chrono::microseconds(2000));
  while (std::chrono::steady_clock::now() < target) {
  }
}

struct LoopState {
  Vec3 uav_pos;
  std::shared_ptr<const PlanSolution> current_plan;
  bool planner_busy = false;
  double sim_time = 0.0;
  std::vector<Vec3> route;  // start, waypoints..., goal
  std::size_t target = 1;   // index of the active goal in route
  bool forward = true;
  int leg_count = 0;
};

class Loop {
 public:
  Loop(const ScenarioConfig& scn, const RunOptions& opt)
      : scn_(scn), opt_(opt), grid_(make_grid(scn.grid_order)),
        corrector_(scn.apf, repair_fallback_direction(scn.start, scn.goal)) {
    state_.uav_pos = scn.start;
    state_.route.push_back(scn.start);
    for (const auto& w : scn.waypoints) state_.route.push_back(w);
    state_.route.push_back(scn.goal);
  }

  std::vector<Vec3> obstacle_positions(double t) const {
    std::vector<Vec3> out;
    out.reserve(scn_.obstacles.size());
    for (const auto& o : scn_.obstacles) out.push_back(obstacle_position(o, t));
    return out;
  }

  // Snapshot handed to the planner: frozen by default, optionally
  // extrapolated by the obstacle velocity over one replanning interval.
  std::vector<Vec3> planning_snapshots(double t) const {
    std::vector<Vec3> out = obstacle_positions(t);
    if (scn_.predict_obstacles) {
      const double lead = 1.0 / scn_.planner_rate_hz;
      for (std::size_t k = 0; k < out.size(); ++k)
        out[k] += obstacle_velocity(scn_.obstacles[k], t) * lead;
    }
    return out;
  }

  // One full solve from the given state toward the active goal. Failures to
  // even pose the problem (state momentarily inside a safety sphere) are
  // reported as infeasible rather than thrown: the loop degrades to APF-only.
  SolveRecord do_solve(const Vec3& from, const Vec3& to, double t,
                       std::shared_ptr<const PlanSolution> incumbent, bool post_switch) {
    SolveRecord rec;
    rec.request_time = t;
    rec.request_state = from;
    rec.request_goal = to;
    rec.post_switch_first = post_switch;
    rec.snapshots = planning_snapshots(t);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      ScenarioConfig leg = scn_;
      leg.start = from;
      leg.goal = to;
      leg.waypoints.clear();
      const NlpProblem problem = assemble(leg, grid_, rec.snapshots);
      const NlpGuess guess = make_initial_guess(leg, grid_, rec.snapshots, incumbent.get());
      PlanSolution plan = solve(problem, guess, incumbent != nullptr);
      plan.epoch = t;
      rec.plan = std::move(plan);
      rec.status = rec.plan.status;
      rec.iterations = rec.plan.iterations;
      rec.delta_t = rec.plan.delta_t;
      rec.kkt = rec.plan.kkt;
    } catch (const std::invalid_argument&) {
      rec.status = SolveStatus::kInfeasibleDetected;
    }
    rec.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
  }

  Vec3 command_from_plan(const PlanSolution& plan, double t) const {
    if (!scn_.interpolate_commands || plan.delta_t <= 0.0)
      return plan.node_controls.front();
    const double tau = std::clamp((t - plan.epoch) / plan.delta_t, 0.0, 1.0);
    return interpolate(grid_, plan.node_controls, tau);
  }

  // Applies the APF correction, clips to the command bounds, steps the
  // vehicle and logs the tick. Returns false once the run should stop.
  bool controller_tick(SimLog& log, double t, double dt) {
    const PlanSolution& plan = *state_.current_plan;
    const Vec3 u_opt = command_from_plan(plan, t);
    const auto obs = obstacle_positions(t);
    std::vector<std::pair<Vec3, double>> spheres;
    spheres.reserve(obs.size());
    for (std::size_t k = 0; k < obs.size(); ++k)
      spheres.emplace_back(obs[k], scn_.obstacles[k].safety_radius);
    const Vec3 u_cmd =
        clamp(corrector_.blend(u_opt, state_.uav_pos, spheres), scn_.bounds.cmd_lo,
              scn_.bounds.cmd_hi);

    TickRecord tick;
    tick.t = t;
    tick.uav = state_.uav_pos;
    tick.u_opt = u_opt;
    tick.u_cmd = u_cmd;
    tick.obstacle_positions = obs;
    tick.separations.reserve(obs.size());
    for (const auto& p : obs) tick.separations.push_back(norm(state_.uav_pos - p));
    tick.goal = state_.route[state_.target];
    tick.plan_epoch = plan.epoch;
    log.ticks.push_back(std::move(tick));

    state_.uav_pos = dynamics_step_exact(state_.uav_pos, u_cmd, scn_.dynamics, dt);
    state_.sim_time = t + dt;

    // Arrival handling; consecutive coincident route points collapse.
    while (norm(state_.route[state_.target] - state_.uav_pos) <= scn_.goal_threshold) {
      const bool at_end =
          state_.forward ? state_.target + 1 == state_.route.size() : state_.target == 0;
      if (!at_end) {
        state_.target += state_.forward ? 1 : -1;
        continue;
      }
      ++state_.leg_count;
      log.arrival_times.push_back(state_.sim_time);
      if (!scn_.boundary_switching) {
        log.completed = true;
        return false;
      }
      state_.forward = !state_.forward;
      if (state_.route.size() > 1) state_.target += state_.forward ? 1 : -1;
      post_switch_pending_ = true;
    }
    return true;
  }

  SimLog run_lockstep() {
    SimLog log;
    const double dt = 1.0 / scn_.controller_rate_hz;
    int solve_ticks = opt_.solve_ticks;
    if (solve_ticks <= 0)
      solve_ticks = std::max(1, static_cast<int>(
                                    std::lround(scn_.controller_rate_hz / scn_.planner_rate_hz)));

    // Initial synchronous solve, published immediately.
    SolveRecord first = do_solve(state_.uav_pos, state_.route[state_.target], 0.0, nullptr, false);
    if (first.status == SolveStatus::kInfeasibleDetected)
      throw std::invalid_argument("run: scenario infeasible at start");
    state_.current_plan = std::make_shared<PlanSolution>(first.plan);
    log.solves.push_back(std::move(first));
    bool planner_enabled = !opt_.disable_planner_after_first;

    std::optional<std::pair<long, PlanSolution>> pending;  // publish tick, plan
    for (long k = 0;; ++k) {
      const double t = static_cast<double>(k) * dt;
      if (t > scn_.sim_duration + 1e-9) break;
      if (pending && k >= pending->first) {
        state_.current_plan = std::make_shared<PlanSolution>(std::move(pending->second));
        pending.reset();
      }
      if (!pending && planner_enabled) {
        SolveRecord rec = do_solve(state_.uav_pos, state_.route[state_.target], t,
                                   state_.current_plan, post_switch_pending_);
        post_switch_pending_ = false;
        rec.completion_time = static_cast<double>(k + solve_ticks) * dt;
        if (rec.status == SolveStatus::kInfeasibleDetected) {
          ++log.degraded_events;  // keep the incumbent plan
          log.solves.push_back(std::move(rec));
        } else {
          pending = {k + solve_ticks, rec.plan};
          log.solves.push_back(std::move(rec));
        }
      }
      if (!controller_tick(log, t, dt)) break;
    }
    if (!log.completed && scn_.boundary_switching) log.completed = true;  // ran to duration
    finalize(log);
    return log;
  }

  SimLog run_realtime() {
    SimLog log;
    const double dt = 1.0 / scn_.controller_rate_hz;
    log.ticks.reserve(static_cast<std::size_t>(scn_.sim_duration / dt) + 16);
    log.solves.reserve(log.ticks.capacity());

    SolveRecord first = do_solve(state_.uav_pos, state_.route[state_.target], 0.0, nullptr, false);
    if (first.status == SolveStatus::kInfeasibleDetected)
      throw std::invalid_argument("run: scenario infeasible at start");
    state_.current_plan = std::make_shared<PlanSolution>(first.plan);
    log.solves.push_back(std::move(first));
    const bool planner_enabled = !opt_.disable_planner_after_first;

    struct Request {
      Vec3 from;
      Vec3 to;
      double t;
      std::shared_ptr<const PlanSolution> incumbent;
      bool post_switch;
    };
    std::mutex mtx;
    std::condition_variable cv;
    std::optional<Request> inbox;
    std::atomic<bool> stop{false};
    std::shared_ptr<const PlanSolution> shared_plan = state_.current_plan;

    const auto wall_start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start)
          .count();
    };

    std::thread planner([&] {
      while (true) {
        Request req;
        {
          std::unique_lock lk(mtx);
          cv.wait(lk, [&] { return stop.load() || inbox.has_value(); });
          if (stop.load() && !inbox) return;
          req = std::move(*inbox);
          inbox.reset();
        }
        SolveRecord rec = do_solve(req.from, req.to, req.t, req.incumbent, req.post_switch);
        rec.completion_time = elapsed();
        std::lock_guard lk(mtx);
        if (rec.status == SolveStatus::kInfeasibleDetected) {
          ++log.degraded_events;
        } else {
          shared_plan = std::make_shared<PlanSolution>(rec.plan);
        }
        log.solves.push_back(std::move(rec));
        state_.planner_busy = false;
      }
    });

    for (long k = 0;; ++k) {
      const double t = elapsed();
      if (t > scn_.sim_duration) break;
      bool launch = false;
      {
        std::lock_guard lk(mtx);
        state_.current_plan = shared_plan;
        if (!state_.planner_busy && planner_enabled) {
          state_.planner_busy = true;
          launch = true;
        }
      }
      if (launch) {
        std::lock_guard lk(mtx);
        inbox = Request{state_.uav_pos, state_.route[state_.target], t, state_.current_plan,
                        post_switch_pending_};
        post_switch_pending_ = false;
        cv.notify_one();
      }
      if (!controller_tick(log, t, dt)) break;
      precise_sleep_until(wall_start +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(static_cast<double>(k + 1) * dt)));
    }
    {
      std::lock_guard lk(mtx);
      stop = true;
    }
    cv.notify_one();
    planner.join();
    if (!log.completed && scn_.boundary_switching) log.completed = true;
    finalize(log);
    return log;
  }

 private:
  void finalize(SimLog& log) {
    log.leg_count = state_.leg_count;
    log.apf_degenerate_events = corrector_.degenerate_events();
  }

  ScenarioConfig scn_;
  RunOptions opt_;
  CollocationGrid grid_;
  ApfCorrector corrector_;
  LoopState state_;
  bool post_switch_pending_ = false;
};

}  // namespace

SimLog run(const ScenarioConfig& scn, const RunOptions& opt) {
  auto issues = validate(scn);
  if (!issues.empty()) throw std::invalid_argument("run: invalid scenario: " + issues.front());
  Loop loop(scn, opt);
  return opt.mode == RunMode::kLockstep ? loop.run_lockstep() : loop.run_realtime();
}

}  // namespace chebplan
