#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "chebplan/vec3.hpp"

namespace chebplan {

// Raised when a derivative rule is evaluated outside its domain (divide by
// zero, sqrt at a nonpositive point with a live derivative, ...). Faults are
// reported instead of letting NaNs propagate silently.
struct EvalFault : std::runtime_error {
  explicit EvalFault(const std::string& primitive)
      : std::runtime_error("autodiff evaluation fault in primitive '" + primitive + "'") {}
};

// Forward-mode dual number carrying K derivative lanes. Lanes never interact,
// so a sweep over lanes 0..w-1 computes w independent directional
// derivatives; unseeded lanes stay zero and are harmless.
template <int K = 16>
struct Dual {
  static_assert(K >= 1);
  static constexpr int kLanes = K;

  double v = 0.0;
  std::array<double, K> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit by design, constants promote

  static Dual seeded(double value, int lane) {
    Dual r(value);
    r.d[static_cast<std::size_t>(lane)] = 1.0;
    return r;
  }

  bool differentiated() const {
    for (int i = 0; i < K; ++i)
      if (d[static_cast<std::size_t>(i)] != 0.0) return true;
    return false;
  }
};

template <int K>
Dual<K> operator+(const Dual<K>& a, const Dual<K>& b) {
  Dual<K> r(a.v + b.v);
  for (int i = 0; i < K; ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}

template <int K>
Dual<K> operator-(const Dual<K>& a, const Dual<K>& b) {
  Dual<K> r(a.v - b.v);
  for (int i = 0; i < K; ++i) r.d[i] = a.d[i] - b.d[i];
  return r;
}

template <int K>
Dual<K> operator-(const Dual<K>& a) {
  Dual<K> r(-a.v);
  for (int i = 0; i < K; ++i) r.d[i] = -a.d[i];
  return r;
}

template <int K>
Dual<K> operator*(const Dual<K>& a, const Dual<K>& b) {
  Dual<K> r(a.v * b.v);
  for (int i = 0; i < K; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}

template <int K>
Dual<K> operator/(const Dual<K>& a, const Dual<K>& b) {
  if (b.v == 0.0) throw EvalFault("divide");
  const double inv = 1.0 / b.v;
  Dual<K> r(a.v * inv);
  for (int i = 0; i < K; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) * inv;
  return r;
}

// Mixed double operands.
template <int K> Dual<K> operator+(const Dual<K>& a, double b) { return a + Dual<K>(b); }
template <int K> Dual<K> operator+(double a, const Dual<K>& b) { return Dual<K>(a) + b; }
template <int K> Dual<K> operator-(const Dual<K>& a, double b) { return a - Dual<K>(b); }
template <int K> Dual<K> operator-(double a, const Dual<K>& b) { return Dual<K>(a) - b; }
template <int K> Dual<K> operator*(const Dual<K>& a, double b) {
  Dual<K> r(a.v * b);
  for (int i = 0; i < K; ++i) r.d[i] = a.d[i] * b;
  return r;
}
template <int K> Dual<K> operator*(double a, const Dual<K>& b) { return b * a; }
template <int K> Dual<K> operator/(const Dual<K>& a, double b) {
  if (b == 0.0) throw EvalFault("divide");
  return a * (1.0 / b);
}
template <int K> Dual<K> operator/(double a, const Dual<K>& b) { return Dual<K>(a) / b; }

template <int K> bool operator<(const Dual<K>& a, const Dual<K>& b) { return a.v < b.v; }
template <int K> bool operator>(const Dual<K>& a, const Dual<K>& b) { return a.v > b.v; }
template <int K> bool operator<(const Dual<K>& a, double b) { return a.v < b; }
template <int K> bool operator>(const Dual<K>& a, double b) { return a.v > b; }
template <int K> bool operator<(double a, const Dual<K>& b) { return a < b.v; }
template <int K> bool operator>(double a, const Dual<K>& b) { return a > b.v; }

template <int K>
Dual<K> sqrt(const Dual<K>& a) {
  if (a.v < 0.0) throw EvalFault("sqrt");
  if (a.v == 0.0) {
    if (a.differentiated()) throw EvalFault("sqrt");
    return Dual<K>(0.0);
  }
  Dual<K> r(std::sqrt(a.v));
  const double half_inv = 0.5 / r.v;
  for (int i = 0; i < K; ++i) r.d[i] = a.d[i] * half_inv;
  return r;
}

template <int K>
Dual<K> tanh(const Dual<K>& a) {
  Dual<K> r(std::tanh(a.v));
  const double sech2 = 1.0 - r.v * r.v;
  for (int i = 0; i < K; ++i) r.d[i] = a.d[i] * sech2;
  return r;
}

template <int K>
Dual<K> exp(const Dual<K>& a) {
  Dual<K> r(std::exp(a.v));
  for (int i = 0; i < K; ++i) r.d[i] = a.d[i] * r.v;
  return r;
}

template <int K>
Dual<K> pow(const Dual<K>& a, double p) {
  const double val = std::pow(a.v, p);
  if (!std::isfinite(val)) throw EvalFault("pow");
  Dual<K> r(val);
  if (a.differentiated()) {
    const double slope = p * std::pow(a.v, p - 1.0);
    if (!std::isfinite(slope)) throw EvalFault("pow");
    for (int i = 0; i < K; ++i) r.d[i] = a.d[i] * slope;
  }
  return r;
}

// Branch-selected min/max; ties take the first argument.
template <int K>
Dual<K> min(const Dual<K>& a, const Dual<K>& b) { return a.v <= b.v ? a : b; }
template <int K>
Dual<K> max(const Dual<K>& a, const Dual<K>& b) { return a.v >= b.v ? a : b; }

template <int K>
double value_of(const Dual<K>& x) { return x.v; }

// The squared norm at the zero vector has an identically zero dual even when
// the components carry seeds (chain rule through x*x), so the generic sqrt
// guard cannot see the lost derivative; check the vector argument itself.
template <int K>
Dual<K> norm(const Vec3T<Dual<K>>& v) {
  const Dual<K> sq = dot(v, v);
  if (sq.v == 0.0 && (v.x.differentiated() || v.y.differentiated() || v.z.differentiated()))
    throw EvalFault("norm");
  return sqrt(sq);
}

// Dense Jacobian of f at x by forward sweeps. f is called as
// f(const std::vector<Dual<K>>&, std::vector<Dual<K>>&); batch_width in
// [1, K] selects how many directions each sweep seeds. The result does not
// depend on batch_width (lanes are independent).
template <int K, class F>
Eigen::MatrixXd jacobian(F&& f, const Eigen::VectorXd& x, int batch_width = K) {
  if (batch_width < 1 || batch_width > K)
    throw std::invalid_argument("jacobian: batch_width must be in [1, lane count]");
  const int m = static_cast<int>(x.size());
  std::vector<Dual<K>> in(static_cast<std::size_t>(m));
  std::vector<Dual<K>> out;
  Eigen::MatrixXd jac;
  for (int base = 0; base < m; base += batch_width) {
    const int w = std::min(batch_width, m - base);
    for (int i = 0; i < m; ++i) in[static_cast<std::size_t>(i)] = Dual<K>(x[i]);
    for (int lane = 0; lane < w; ++lane)
      in[static_cast<std::size_t>(base + lane)] = Dual<K>::seeded(x[base + lane], lane);
    out.clear();
    f(in, out);
    if (jac.size() == 0) jac.resize(static_cast<int>(out.size()), m);
    for (int r = 0; r < jac.rows(); ++r)
      for (int lane = 0; lane < w; ++lane)
        jac(r, base + lane) = out[static_cast<std::size_t>(r)].d[static_cast<std::size_t>(lane)];
  }
  return jac;
}

}  // namespace chebplan
