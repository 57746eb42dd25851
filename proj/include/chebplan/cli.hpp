#pragma once

#include <string>

namespace chebplan {

struct RunArgs {
  std::string scenario_path;
  std::string out_dir;
  std::string mode = "lockstep";  // lockstep | realtime
  int solve_ticks = 0;            // <= 0 derives from the configured rates
  unsigned seed = 0;              // echoed into the sidecar
  bool disable_planner = false;   // degraded-mode experiments
};

// Exit codes: 0 clean run (no collisions, run completed), 1 collision or
// degraded failure or non-convergence, 2 configuration errors.
int cmd_run(const RunArgs& args);
int cmd_plan(const std::string& scenario_path, const std::string& out_path);
int cmd_validate(const std::string& scenario_path);

}  // namespace chebplan
