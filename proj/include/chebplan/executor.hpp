#pragma once

#include "chebplan/model.hpp"
#include "chebplan/simlog.hpp"

namespace chebplan {

// Lockstep: single-threaded and deterministic; a launched solve is computed
// synchronously but published a fixed number of controller ticks later.
// Realtime: wall-clock controller ticks with the solver on a background
// thread; the controller never waits on it.
enum class RunMode { kLockstep, kRealtime };

struct RunOptions {
  RunMode mode = RunMode::kLockstep;
  int solve_ticks = 0;  // lockstep publish delay; <= 0 derives from the two rates
  bool disable_planner_after_first = false;  // degraded-mode experiments
};

// Closed loop per the dual-rate architecture: every controller tick applies
// the APF-corrected node-0 control of the newest completed plan and steps the
// vehicle; whenever no solve is in flight a new one starts from the current
// state, warm-started from the incumbent plan. Reaching the goal either stops
// the run or (boundary_switching) swaps the endpoints and continues.
SimLog run(const ScenarioConfig& scn, const RunOptions& opt = {});

}  // namespace chebplan
