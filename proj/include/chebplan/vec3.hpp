#pragma once

#include <cmath>
#include <ostream>

namespace chebplan {

// Plain value of a scalar; overloaded for dual numbers in autodiff.hpp.
inline double value_of(double x) { return x; }

// 3-component vector templated on the scalar type so the same expressions
// evaluate on plain doubles and on forward-mode duals.
template <class S>
struct Vec3T {
  S x{};
  S y{};
  S z{};

  Vec3T() = default;
  Vec3T(S xv, S yv, S zv) : x(xv), y(yv), z(zv) {}

  Vec3T operator+(const Vec3T& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3T operator-(const Vec3T& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3T operator-() const { return {-x, -y, -z}; }
  Vec3T& operator+=(const Vec3T& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3T& operator-=(const Vec3T& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
};

using Vec3 = Vec3T<double>;

template <class S, class T>
Vec3T<S> operator*(const Vec3T<S>& v, const T& s) {
  return {v.x * s, v.y * s, v.z * s};
}

template <class S, class T>
Vec3T<S> operator*(const T& s, const Vec3T<S>& v) {
  return v * s;
}

template <class S, class T>
Vec3T<S> operator/(const Vec3T<S>& v, const T& s) {
  return {v.x / s, v.y / s, v.z / s};
}

template <class S>
S dot(const Vec3T<S>& a, const Vec3T<S>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class S>
Vec3T<S> cross(const Vec3T<S>& a, const Vec3T<S>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// sqrt is picked up by ADL for dual scalars (guarded there).
template <class S>
S norm(const Vec3T<S>& v) {
  using std::sqrt;
  return sqrt(dot(v, v));
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline bool is_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

inline Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  return {v.x / n, v.y / n, v.z / n};
}

inline Vec3 clamp(const Vec3& v, const Vec3& lo, const Vec3& hi) {
  auto c = [](double a, double l, double h) { return a < l ? l : (a > h ? h : a); };
  return {c(v.x, lo.x, hi.x), c(v.y, lo.y, hi.y), c(v.z, lo.z, hi.z)};
}

inline double component(const Vec3& v, int axis) {
  return axis == 0 ? v.x : (axis == 1 ? v.y : v.z);
}

inline std::ostream& operator<<(std::ostream& os, const Vec3& v) {
  return os << "(" << v.x << ", " << v.y << ", " << v.z << ")";
}

}  // namespace chebplan
