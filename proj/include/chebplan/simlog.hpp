#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chebplan/nlp.hpp"
#include "chebplan/vec3.hpp"

namespace chebplan {

struct TickRecord {
  double t = 0.0;
  Vec3 uav;
  Vec3 u_opt;
  Vec3 u_cmd;
  std::vector<Vec3> obstacle_positions;
  std::vector<double> separations;
  Vec3 goal;
  double plan_epoch = 0.0;
};

struct SolveRecord {
  double request_time = 0.0;     // sim time the solve was launched
  double completion_time = 0.0;  // sim time the plan became visible
  double wall_time = 0.0;        // measured solver wall seconds
  int iterations = 0;
  SolveStatus status = SolveStatus::kMaxIter;
  double delta_t = 0.0;
  KktResiduals kkt;
  bool post_switch_first = false;
  Vec3 request_state;
  Vec3 request_goal;
  std::vector<Vec3> snapshots;  // obstacle positions the solve used
  PlanSolution plan;            // kept for independent re-checking
};

struct SimLog {
  std::vector<TickRecord> ticks;
  std::vector<SolveRecord> solves;
  int leg_count = 0;
  std::vector<double> arrival_times;
  bool completed = false;
  int degraded_events = 0;       // solver returned infeasible, last plan kept
  int apf_degenerate_events = 0; // zero-separation fallback directions used
};

// One row per tick: t, uav x/y/z, u_opt x/y/z, u_cmd x/y/z, then per obstacle
// x/y/z and separation, goal x/y/z, plan epoch. Deterministic formatting.
void write_csv(const SimLog& log, std::ostream& out);
void write_csv(const SimLog& log, const std::string& path);

// Per-solve diagnostics plus the normalized scenario echo, as JSON.
void write_sidecar_json(const SimLog& log, const std::string& scenario_echo, unsigned seed,
                        const std::string& path);

}  // namespace chebplan
