#include "chebplan/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace chebplan {

namespace {

// Nearest-rank quantile on a sorted copy.
double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto idx = std::min(v.size() - 1, static_cast<std::size_t>(q * static_cast<double>(v.size())));
  return v[idx];
}

}  // namespace

RunMetrics compute_metrics(const SimLog& log, const ScenarioConfig& scn) {
  RunMetrics m;
  m.arrival_times = log.arrival_times;
  m.legs_completed = log.leg_count;

  m.min_separation = std::numeric_limits<double>::infinity();
  for (const auto& tick : log.ticks) {
    bool collided = false;
    for (std::size_t k = 0; k < tick.separations.size(); ++k) {
      m.min_separation = std::min(m.min_separation, tick.separations[k]);
      if (tick.separations[k] < scn.obstacles[k].safety_radius) collided = true;
    }
    if (collided) ++m.collision_count;
  }
  if (!std::isfinite(m.min_separation)) m.min_separation = 0.0;

  std::vector<double> times;
  int converged = 0;
  for (const auto& s : log.solves) {
    times.push_back(s.wall_time);
    if (s.status == SolveStatus::kConverged) ++converged;
  }
  m.solve_time_median = quantile(times, 0.5);
  m.solve_time_p95 = quantile(times, 0.95);
  m.solver_success_rate =
      log.solves.empty() ? 1.0 : static_cast<double>(converged) / static_cast<double>(log.solves.size());
  return m;
}

void write_metrics_json(const RunMetrics& m, const std::string& path) {
  nlohmann::json j;
  j["min_separation"] = m.min_separation;
  j["arrival_times"] = m.arrival_times;
  j["legs_completed"] = m.legs_completed;
  j["solve_time_median"] = m.solve_time_median;
  j["solve_time_p95"] = m.solve_time_p95;
  j["solver_success_rate"] = m.solver_success_rate;
  j["collision_count"] = m.collision_count;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace chebplan
