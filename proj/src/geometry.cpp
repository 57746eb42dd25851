#include "chebplan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chebplan {

double segment_point_distance(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 < 1e-30) return norm(c - a);
  const double t = std::clamp(dot(c - a, ab) / len2, 0.0, 1.0);
  return norm(c - (a + ab * t));
}

Vec3 repair_fallback_direction(const Vec3& start, const Vec3& goal) {
  const Vec3 chord = goal - start;
  const Vec3 horizontal = cross(chord, Vec3{0.0, 0.0, 1.0});
  if (norm(horizontal) > 1e-12) return normalized(horizontal);
  // Vertical (or zero) chord: any horizontal unit vector is perpendicular.
  return {1.0, 0.0, 0.0};
}

namespace {

using Sphere = std::pair<Vec3, double>;

bool push_point_out(Vec3& p, const std::vector<Sphere>& spheres, double margin,
                    const Vec3& fallback) {
  bool moved = false;
  for (int round = 0; round < 32; ++round) {
    bool moved_this_round = false;
    for (const auto& [c, r] : spheres) {
      const double d = norm(p - c);
      if (d >= r) continue;
      const Vec3 dir = d < 1e-9 ? fallback : (p - c) / d;
      p = c + dir * ((1.0 + margin) * r);
      moved = moved_this_round = true;
    }
    if (!moved_this_round) break;
  }
  return moved;
}

bool chord_clears(const Vec3& a, const Vec3& b, const std::vector<Sphere>& spheres,
                  double margin) {
  for (const auto& [c, r] : spheres)
    if (segment_point_distance(a, b, c) < (1.0 + margin) * r) return false;
  return true;
}

}  // namespace

std::vector<Vec3> repair_guess(const std::vector<Vec3>& points,
                               const std::vector<Sphere>& obstacles, double margin) {
  if (points.size() < 2) return points;
  for (const auto& [c, r] : obstacles) {
    if (norm(points.front() - c) < r)
      throw std::invalid_argument("repair_guess: start lies inside a safety sphere");
    if (norm(points.back() - c) < r)
      throw std::invalid_argument("repair_guess: goal lies inside a safety sphere");
  }
  std::vector<Vec3> pts = points;
  if (obstacles.empty()) return pts;

  const std::size_t last = pts.size() - 1;
  const Vec3 fallback = repair_fallback_direction(pts.front(), pts.back());
  auto movable = [&](std::size_t i) { return i != 0 && i != last; };

  // Passes 1 and 2 interact (a lateral shift can land a point inside another
  // sphere), so they repeat to a fixed point before the shortening pass.
  for (int round = 0; round < 16; ++round) {
    bool changed = false;

    // Pass 1: radial push-out of interior points.
    for (std::size_t i = 1; i < last; ++i)
      changed |= push_point_out(pts[i], obstacles, margin, fallback);

    // Pass 2: segments whose perpendicular foot lies inside a sphere shift
    // sideways. With both endpoints movable the segment translates rigidly
    // and clears in one move; next to a fixed endpoint it tilts, so sweeps
    // repeat until the line distance leaves the sphere.
    for (int sweep = 0; sweep < 64; ++sweep) {
      bool shifted = false;
      for (std::size_t i = 0; i < last; ++i) {
        if (!movable(i) && !movable(i + 1)) continue;
        for (const auto& [c, r] : obstacles) {
          const double t = projection_param(Segment{pts[i], pts[i + 1]}, c);
          if (t <= 0.0 || t >= 1.0) continue;
          const Vec3 foot = pts[i] + (pts[i + 1] - pts[i]) * t;
          const double d = norm(foot - c);
          if (d >= r) continue;
          const Vec3 dir = d < 1e-9 ? fallback : (foot - c) / d;
          const Vec3 shift = dir * ((1.0 + margin) * r - d);
          if (movable(i)) pts[i] += shift;
          if (movable(i + 1)) pts[i + 1] += shift;
          shifted = true;
        }
      }
      changed |= shifted;
      if (!shifted) break;
    }
    if (!changed) break;
  }

  // Pass 3: shortening. For each point, find the farthest later point whose
  // direct chord clears every sphere and actually shortens the path, then
  // respace the points in between onto the chord.
  std::size_t i = 0;
  while (i + 1 < last) {
    std::size_t best = i;
    for (std::size_t j = last; j > i + 1; --j) {
      if (!chord_clears(pts[i], pts[j], obstacles, margin)) continue;
      double path_len = 0.0;
      for (std::size_t k = i; k < j; ++k) path_len += norm(pts[k + 1] - pts[k]);
      if (norm(pts[j] - pts[i]) < path_len - 1e-12) best = j;
      break;
    }
    if (best > i + 1) {
      const Vec3 a = pts[i];
      const Vec3 step = (pts[best] - a) / static_cast<double>(best - i);
      for (std::size_t k = i + 1; k < best; ++k) pts[k] = a + step * static_cast<double>(k - i);
      i = best;
    } else {
      ++i;
    }
  }
  return pts;
}

}  // namespace chebplan
