#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "chebplan/model.hpp"
#include "chebplan/vec3.hpp"

namespace chebplan {

// Sigmoid repulsion magnitude: F = 0.5 * (1 + tanh(alpha*R - dist)) - eta,
// optionally clamped at zero so the far field carries no residual attraction.
inline double repulsive_magnitude(double dist, double R, const ApfParams& p) {
  const double f = 0.5 * (1.0 + std::tanh(p.alpha * R - dist)) - p.eta;
  return p.clamp_nonnegative ? std::max(f, 0.0) : f;
}

// Adds the per-obstacle repulsion F_k * r_k/|r_k| to the optimizer command,
// r_k pointing from the obstacle to the vehicle. Keeps the last valid push
// direction per obstacle for the (degenerate) case of zero separation;
// callers clip the result to the command bounds.
class ApfCorrector {
 public:
  ApfCorrector(const ApfParams& params, const Vec3& fallback_direction)
      : params_(params), fallback_(fallback_direction) {}

  Vec3 blend(const Vec3& u_opt, const Vec3& uav_pos,
             const std::vector<std::pair<Vec3, double>>& obstacles) {
    if (last_dir_.size() != obstacles.size()) last_dir_.assign(obstacles.size(), fallback_);
    Vec3 cmd = u_opt;
    for (std::size_t k = 0; k < obstacles.size(); ++k) {
      const auto& [obs_pos, radius] = obstacles[k];
      const Vec3 r = uav_pos - obs_pos;
      const double dist = norm(r);
      Vec3 dir = last_dir_[k];
      if (dist >= 1e-9) {
        dir = r / dist;
        last_dir_[k] = dir;
      } else {
        ++degenerate_events_;
      }
      cmd += dir * repulsive_magnitude(dist, radius, params_);
    }
    return cmd;
  }

  int degenerate_events() const { return degenerate_events_; }

 private:
  ApfParams params_;
  Vec3 fallback_;
  std::vector<Vec3> last_dir_;
  int degenerate_events_ = 0;
};

// Stateless convenience wrapper for one-shot blending.
inline Vec3 blend_command(const Vec3& u_opt, const Vec3& uav_pos,
                          const std::vector<std::pair<Vec3, double>>& obstacles,
                          const ApfParams& params,
                          const Vec3& fallback_direction = Vec3{1.0, 0.0, 0.0}) {
  ApfCorrector corrector(params, fallback_direction);
  return corrector.blend(u_opt, uav_pos, obstacles);
}

}  // namespace chebplan
