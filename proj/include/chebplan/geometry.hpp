#pragma once

#include <utility>
#include <vector>

#include "chebplan/model.hpp"
#include "chebplan/vec3.hpp"

namespace chebplan {

struct Segment {
  Vec3 a;
  Vec3 b;
};

// Projection parameter of p onto the line through (a, b): t < 0 or t > 1 means
// the foot of the perpendicular falls on the segment's extension. Segments
// shorter than sqrt(epsilon_seg) are regularized by adding epsilon_seg to the
// squared length, which keeps the expression defined (and t near zero).
template <class S>
S projection_param(const Vec3T<S>& a, const Vec3T<S>& b, const Vec3T<S>& p,
                   double epsilon_seg) {
  const Vec3T<S> ab = b - a;
  S len2 = dot(ab, ab);
  if (value_of(len2) < epsilon_seg) len2 = len2 + epsilon_seg;
  return dot(p - a, ab) / len2;
}

// Distance from p to the infinite line through (a, b); the point distance
// |p - a| in the degenerate limit.
template <class S>
S perpendicular_distance(const Vec3T<S>& a, const Vec3T<S>& b, const Vec3T<S>& p,
                         double epsilon_seg) {
  const S t = projection_param(a, b, p, epsilon_seg);
  return norm(p - a - (b - a) * t);
}

// Sigmoid segment-clearance constraint: f = 0.5 * Gamma * (R - d) with
// Gamma = tanh(t/delta) - tanh((t-1)/delta). Satisfied iff f <= 0; inside the
// segment Gamma saturates near 2, so f tracks R - d; far outside it vanishes.
template <class S>
S smooth_constraint(const Vec3T<S>& a, const Vec3T<S>& b, const Vec3T<S>& obs_pos, double R,
                    const SmoothConstraintParams& params) {
  using std::tanh;
  const S t = projection_param(a, b, obs_pos, params.epsilon_seg);
  const S d = perpendicular_distance(a, b, obs_pos, params.epsilon_seg);
  const S gamma = tanh(t / params.delta) - tanh((t - 1.0) / params.delta);
  return 0.5 * gamma * (R - d);
}

// Sphere-clearance constraint at a single point: R - |p - obs|, satisfied iff <= 0.
template <class S>
S node_clearance(const Vec3T<S>& p, const Vec3T<S>& obs_pos, double R) {
  return R - norm(p - obs_pos);
}

inline double projection_param(const Segment& s, const Vec3& p, double epsilon_seg = 1e-12) {
  return projection_param<double>(s.a, s.b, p, epsilon_seg);
}
inline double perpendicular_distance(const Segment& s, const Vec3& p,
                                     double epsilon_seg = 1e-12) {
  return perpendicular_distance<double>(s.a, s.b, p, epsilon_seg);
}
inline double smooth_constraint(const Segment& s, const Vec3& obs_pos, double R,
                                const SmoothConstraintParams& params) {
  return smooth_constraint<double>(s.a, s.b, obs_pos, R, params);
}

// Distance from point c to the segment [a, b] (projection clamped to the
// endpoints). Plain geometry, used by the repair and the clearance oracles.
double segment_point_distance(const Vec3& a, const Vec3& b, const Vec3& c);

// Push a polyline out of the given safety spheres: (1) points inside a sphere
// move radially to (1+margin)*R, (2) segments whose perpendicular foot lies
// inside a sphere shift sideways until the line clears (1+margin)*R, (3) runs
// of points whose direct chord already clears are straightened. First and
// last points never move. Throws if either of them starts inside a sphere.
std::vector<Vec3> repair_guess(const std::vector<Vec3>& points,
                               const std::vector<std::pair<Vec3, double>>& obstacles,
                               double margin = 0.05);

// Deterministic lateral direction used when a radial push-out is undefined
// (point exactly at a sphere center): perpendicular to the start->goal chord,
// horizontal when possible.
Vec3 repair_fallback_direction(const Vec3& start, const Vec3& goal);

}  // namespace chebplan
