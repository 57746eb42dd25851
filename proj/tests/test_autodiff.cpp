#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chebplan/autodiff.hpp"
#include "chebplan/chebyshev.hpp"
#include "chebplan/model.hpp"
#include "chebplan/vec3.hpp"

using namespace chebplan;
using D4 = Dual<4>;

TEST_CASE("primitive values and derivatives") {
  const D4 t = tanh(D4::seeded(0.0, 0));
  CHECK(t.v == 0.0);
  CHECK(t.d[0] == 1.0);

  const D4 x = D4::seeded(3.0, 0);
  const D4 sq = x * x;
  CHECK(sq.v == 9.0);
  CHECK(sq.d[0] == 6.0);

  const D4 p = pow(D4::seeded(2.0, 0), 3.0);
  CHECK(p.v == doctest::Approx(8.0));
  CHECK(p.d[0] == doctest::Approx(12.0));

  const D4 s = sqrt(D4::seeded(4.0, 0));
  CHECK(s.v == 2.0);
  CHECK(s.d[0] == 0.25);

  const D4 q = D4::seeded(1.0, 0) / D4(4.0);
  CHECK(q.v == 0.25);
  CHECK(q.d[0] == 0.25);

  const D4 lo = min(D4::seeded(1.0, 0), D4(2.0));
  CHECK(lo.v == 1.0);
  CHECK(lo.d[0] == 1.0);
  const D4 hi = max(D4::seeded(1.0, 0), D4(2.0));
  CHECK(hi.v == 2.0);
  CHECK(hi.d[0] == 0.0);
}

TEST_CASE("norm derivative matches the finite difference") {
  auto len = [](double x) { return norm(Vec3{x, 4.0, 0.0}); };
  Vec3T<D4> v{D4::seeded(3.0, 0), D4(4.0), D4(0.0)};
  const D4 n = norm(v);
  CHECK(n.v == doctest::Approx(5.0));
  CHECK(n.d[0] == doctest::Approx(0.6).epsilon(1e-12));
  const double h = 1e-6;
  const double fd = (len(3.0 + h) - len(3.0 - h)) / (2 * h);
  CHECK(n.d[0] == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("domain faults are reported, not silent") {
  CHECK_THROWS_AS(D4::seeded(1.0, 0) / D4(0.0), EvalFault);
  CHECK_THROWS_AS(sqrt(D4::seeded(0.0, 0)), EvalFault);
  CHECK_THROWS_AS(sqrt(D4(-1.0)), EvalFault);
  CHECK_NOTHROW(sqrt(D4(0.0)));  // not differentiated: plain zero
  CHECK_THROWS_AS(pow(D4::seeded(-1.0, 0), 0.5), EvalFault);

  Vec3T<D4> zero{D4::seeded(0.0, 0), D4(0.0), D4(0.0)};
  CHECK_THROWS_AS(norm(zero), EvalFault);
}

TEST_CASE("jacobian of simple maps") {
  auto identity = [](const std::vector<D4>& in, std::vector<D4>& out) { out = in; };
  const Eigen::MatrixXd ji = jacobian<4>(identity, Eigen::Vector3d{1.0, -2.0, 0.5});
  CHECK(ji.rows() == 3);
  CHECK((ji - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);

  auto prod_sum = [](const std::vector<D4>& in, std::vector<D4>& out) {
    out = {in[0] * in[1], in[0] + in[1]};
  };
  const Eigen::MatrixXd jp = jacobian<4>(prod_sum, Eigen::Vector2d{2.0, 3.0});
  CHECK(jp(0, 0) == 3.0);
  CHECK(jp(0, 1) == 2.0);
  CHECK(jp(1, 0) == 1.0);
  CHECK(jp(1, 1) == 1.0);
}

namespace {

// Collocation residual of a 2-node minimum-time toy problem: unknowns are
// the two node states on one axis plus the maneuver time.
template <class S>
void toy_residual(const CollocationGrid& grid, const std::vector<S>& in, std::vector<S>& out) {
  const DynamicsParams p{1.5, 1.0, 1.0};
  out.resize(2);
  for (int r = 0; r < 2; ++r) {
    S acc(0.0);
    for (int c = 0; c < 2; ++c) acc = acc + grid.diff_matrix(r, c) * in[static_cast<std::size_t>(c)];
    const Vec3T<S> x{in[static_cast<std::size_t>(r)], S(0.0), S(0.0)};
    const Vec3T<S> u{S(0.8), S(0.0), S(0.0)};
    out[static_cast<std::size_t>(r)] = acc - in[2] * dynamics_rhs(x, u, p).x;
  }
}

}  // namespace

TEST_CASE("toy collocation residual matches central finite differences") {
  const auto grid = make_grid(1);
  auto f = [&](const std::vector<Dual<8>>& in, std::vector<Dual<8>>& out) {
    toy_residual(grid, in, out);
  };
  Eigen::Vector3d x{0.2, 0.9, 1.3};
  const Eigen::MatrixXd jac = jacobian<8>(f, x);

  const double h = 1e-6;
  for (int col = 0; col < 3; ++col) {
    for (int row = 0; row < 2; ++row) {
      std::vector<double> zp{x[0], x[1], x[2]}, zm{x[0], x[1], x[2]};
      zp[static_cast<std::size_t>(col)] += h;
      zm[static_cast<std::size_t>(col)] -= h;
      std::vector<double> op, om;
      toy_residual(grid, zp, op);
      toy_residual(grid, zm, om);
      const double fd = (op[static_cast<std::size_t>(row)] - om[static_cast<std::size_t>(row)]) / (2 * h);
      const double ad = jac(row, col);
      CHECK(std::abs(ad - fd) <= 1e-6 * std::max(std::abs(ad), std::abs(fd)) + 1e-8);
    }
  }
}

TEST_CASE("jacobian is linear in the function") {
  auto f = [](const std::vector<D4>& in, std::vector<D4>& out) {
    out = {in[0] * in[1] + sqrt(in[2]), tanh(in[0]) - in[2] * in[2]};
  };
  auto g = [](const std::vector<D4>& in, std::vector<D4>& out) {
    out = {in[2] / in[0], in[1] * in[1] * in[0]};
  };
  const double alpha = 1.7, beta = -0.4;
  auto combo = [&](const std::vector<D4>& in, std::vector<D4>& out) {
    std::vector<D4> fo, go;
    f(in, fo);
    g(in, go);
    out = {alpha * fo[0] + beta * go[0], alpha * fo[1] + beta * go[1]};
  };
  const Eigen::Vector3d x{1.2, -0.7, 2.5};
  const Eigen::MatrixXd jf = jacobian<4>(f, x);
  const Eigen::MatrixXd jg = jacobian<4>(g, x);
  const Eigen::MatrixXd jc = jacobian<4>(combo, x);
  CHECK((jc - alpha * jf - beta * jg).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("batch width does not change the result") {
  auto f = [](const std::vector<Dual<8>>& in, std::vector<Dual<8>>& out) {
    out.resize(3);
    out[0] = in[0] * in[1] * in[2] + sqrt(in[3]);
    out[1] = tanh(in[0] - in[4]) / (in[2] + 2.0);
    out[2] = pow(in[5], 2.0) - in[1] / in[3];
  };
  Eigen::VectorXd x(6);
  x << 0.3, -1.1, 0.9, 2.2, 0.05, -0.4;
  const Eigen::MatrixXd full = jacobian<8>(f, x, 8);
  const Eigen::MatrixXd narrow = jacobian<8>(f, x, 1);
  const Eigen::MatrixXd mid = jacobian<8>(f, x, 3);
  CHECK((full - narrow).cwiseAbs().maxCoeff() == 0.0);
  CHECK((full - mid).cwiseAbs().maxCoeff() == 0.0);
}
