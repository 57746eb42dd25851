#include "chebplan/simlog.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "chebplan/format.hpp"

namespace chebplan {

void write_csv(const SimLog& log, std::ostream& out) {
  const std::size_t n_obs = log.ticks.empty() ? 0 : log.ticks.front().obstacle_positions.size();
  out << "t,uav_x,uav_y,uav_z,u_opt_x,u_opt_y,u_opt_z,u_cmd_x,u_cmd_y,u_cmd_z";
  for (std::size_t k = 0; k < n_obs; ++k) {
    const std::string p = "obs" + std::to_string(k);
    out << "," << p << "_x," << p << "_y," << p << "_z," << p << "_sep";
  }
  out << ",goal_x,goal_y,goal_z,plan_epoch\n";
  auto put3 = [&](const Vec3& v) {
    out << "," << format_double(v.x) << "," << format_double(v.y) << "," << format_double(v.z);
  };
  for (const auto& r : log.ticks) {
    out << format_double(r.t);
    put3(r.uav);
    put3(r.u_opt);
    put3(r.u_cmd);
    for (std::size_t k = 0; k < n_obs; ++k) {
      put3(r.obstacle_positions[k]);
      out << "," << format_double(r.separations[k]);
    }
    put3(r.goal);
    out << "," << format_double(r.plan_epoch) << "\n";
  }
}

void write_csv(const SimLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_csv(log, out);
}

void write_sidecar_json(const SimLog& log, const std::string& scenario_echo, unsigned seed,
                        const std::string& path) {
  nlohmann::json j;
  j["scenario_echo"] = scenario_echo;
  j["seed"] = seed;
  j["leg_count"] = log.leg_count;
  j["arrival_times"] = log.arrival_times;
  j["completed"] = log.completed;
  j["degraded_events"] = log.degraded_events;
  j["apf_degenerate_events"] = log.apf_degenerate_events;
  auto& solves = j["solves"] = nlohmann::json::array();
  for (const auto& s : log.solves) {
    nlohmann::json e;
    e["request_time"] = s.request_time;
    e["completion_time"] = s.completion_time;
    e["wall_time"] = s.wall_time;
    e["iterations"] = s.iterations;
    e["status"] = to_string(s.status);
    e["delta_t"] = s.delta_t;
    e["post_switch_first"] = s.post_switch_first;
    e["kkt"] = {{"stationarity", s.kkt.stationarity},
                {"eq_violation", s.kkt.eq_violation},
                {"ineq_violation", s.kkt.ineq_violation},
                {"bound_violation", s.kkt.bound_violation}};
    solves.push_back(std::move(e));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace chebplan
