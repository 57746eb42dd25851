#pragma once

#include <string>
#include <vector>

#include "chebplan/model.hpp"
#include "chebplan/simlog.hpp"

namespace chebplan {

struct RunMetrics {
  double min_separation = 0.0;  // m, min over ticks and obstacles
  std::vector<double> arrival_times;
  int legs_completed = 0;
  double solve_time_median = 0.0;  // s
  double solve_time_p95 = 0.0;     // s
  double solver_success_rate = 1.0;
  int collision_count = 0;  // ticks with any separation below that obstacle's radius
};

RunMetrics compute_metrics(const SimLog& log, const ScenarioConfig& scn);
void write_metrics_json(const RunMetrics& m, const std::string& path);

}  // namespace chebplan
