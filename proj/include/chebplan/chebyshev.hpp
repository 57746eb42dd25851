#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "chebplan/vec3.hpp"

namespace chebplan {

// Chebyshev-Gauss-Lobatto collocation grid on [0, 1]: nodes, barycentric
// weights and the spectral differentiation matrix D with D(r, c) the
// derivative of the c-th Lagrange basis polynomial at node r.
struct CollocationGrid {
  int order = 0;                 // polynomial order n; n+1 nodes
  Eigen::VectorXd nodes;         // increasing, nodes[0] = 0 and nodes[n] = 1 exactly
  Eigen::VectorXd bary_weights;  // barycentric weights (common scale factored out)
  Eigen::MatrixXd diff_matrix;   // (n+1) x (n+1), rows sum to zero

  int num_nodes() const { return order + 1; }
};

// CGL extrema cos(pi k / n) shifted to [0, 1] and reordered increasing so node
// index runs forward in time. Throws on n < 1.
CollocationGrid make_grid(int n);

// Barycentric Lagrange evaluation at tau in [0, 1]. Returns the stored node
// value exactly when tau hits a node. Throws on tau outside [0, 1].
// T needs T+T and T*double (double and Vec3 both qualify).
template <class T>
T interpolate(const CollocationGrid& grid, std::span<const T> node_values, double tau) {
  if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("interpolate: tau outside [0, 1]");
  const int m = grid.num_nodes();
  for (int i = 0; i < m; ++i)
    if (tau == grid.nodes[i]) return node_values[static_cast<std::size_t>(i)];
  T num{};
  double den = 0.0;
  for (int i = 0; i < m; ++i) {
    const double w = grid.bary_weights[i] / (tau - grid.nodes[i]);
    num = num + node_values[static_cast<std::size_t>(i)] * w;
    den += w;
  }
  return num * (1.0 / den);
}

inline Vec3 interpolate(const CollocationGrid& grid, const std::vector<Vec3>& node_values,
                        double tau) {
  return interpolate<Vec3>(grid, std::span<const Vec3>(node_values), tau);
}

// Derivative of the interpolant at every node, d/dtau units: D * node_values
// applied per axis.
std::vector<Vec3> differentiate_nodes(const CollocationGrid& grid,
                                      std::span<const Vec3> node_values);
Eigen::VectorXd differentiate_nodes(const CollocationGrid& grid,
                                    const Eigen::VectorXd& node_values);

}  // namespace chebplan
