#include "chebplan/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chebplan {

CollocationGrid make_grid(int n) {
  if (n < 1) throw std::invalid_argument("make_grid: order must be >= 1");
  CollocationGrid g;
  g.order = n;
  const int m = n + 1;
  g.nodes.resize(m);
  g.bary_weights.resize(m);
  for (int i = 0; i <= n; ++i) {
    // (1 - cos(pi i / n)) / 2 written as sin^2 for exact endpoints.
    const double s = std::sin(0.5 * std::numbers::pi * i / n);
    g.nodes[i] = s * s;
    g.bary_weights[i] = (i % 2 == 0 ? 1.0 : -1.0) * (i == 0 || i == n ? 0.5 : 1.0);
  }
  g.nodes[0] = 0.0;
  g.nodes[n] = 1.0;

  // Barycentric differentiation matrix with the negative-sum trick on the
  // diagonal so every row annihilates constants.
  g.diff_matrix.resize(m, m);
  for (int r = 0; r < m; ++r) {
    double row_sum = 0.0;
    for (int c = 0; c < m; ++c) {
      if (c == r) continue;
      const double v = (g.bary_weights[c] / g.bary_weights[r]) / (g.nodes[r] - g.nodes[c]);
      g.diff_matrix(r, c) = v;
      row_sum += v;
    }
    g.diff_matrix(r, r) = -row_sum;
  }
  return g;
}

std::vector<Vec3> differentiate_nodes(const CollocationGrid& grid,
                                      std::span<const Vec3> node_values) {
  const int m = grid.num_nodes();
  std::vector<Vec3> out(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) {
    Vec3 acc{0.0, 0.0, 0.0};
    for (int c = 0; c < m; ++c) acc += node_values[static_cast<std::size_t>(c)] * grid.diff_matrix(r, c);
    out[static_cast<std::size_t>(r)] = acc;
  }
  return out;
}

Eigen::VectorXd differentiate_nodes(const CollocationGrid& grid,
                                    const Eigen::VectorXd& node_values) {
  return grid.diff_matrix * node_values;
}

}  // namespace chebplan
