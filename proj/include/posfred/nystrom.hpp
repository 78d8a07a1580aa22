#pragma once

// Nystrom discretization of u -> int K(., y) u(y) dy: the integral is replaced
// by a quadrature rule, which gives the operator
//   (K^n u)(x) = sum_j w_j K(x, eta_j) u(eta_j).
// Restricted to the nodes it is the d*N x d*N matrix whose (i1, i2) block is
//   w_{j2} k_{i1 i2}(eta_{j1}, eta_{j2}).
// Vectors over the nodes are stored component-major: u[i * N + j] is
// component i at node eta_j.

#include "posfred/cone.hpp"
#include "posfred/kernels.hpp"
#include "posfred/linalg.hpp"
#include "posfred/quadrature.hpp"

#include <Eigen/Dense>

#include <optional>
#include <utility>

namespace posfred {

struct NystromOperator {
  QuadratureRule rule;
  MatrixKernel kernel;
  Eigen::MatrixXd matrix;

  int dim() const { return kernel.dim(); }
  int nodes() const { return static_cast<int>(rule.size()); }
};

NystromOperator assemble_nystrom(const MatrixKernel& kernel, const QuadratureRule& rule);

/// sum_j w_j K(x, eta_j) u(eta_j) for arbitrary x in [a, b].
Eigen::VectorXd apply_at(const NystromOperator& op, const Eigen::VectorXd& u_nodes, double x);

/// u*(x) = (1/lambda) sum_j w_j K(x, eta_j) v_j; reproduces v at the nodes.
Eigen::VectorXd nystrom_interpolate(const NystromOperator& op, const EigenPair& pair, double x);

struct DiscretePositivity {
  bool passes = true;
  /// First negative weight, if any.
  std::optional<std::size_t> weight_index;
  double weight = 0.0;
  /// First node pair (j1, j2) whose kernel matrix is not cone-positive.
  std::optional<std::pair<std::size_t, std::size_t>> node_pair;
};

/// Weights >= 0 and K(eta_j1, eta_j2) positive for the cone at every node pair.
DiscretePositivity discrete_positivity_check(const NystromOperator& op, const OrthantCone& cone);

}  // namespace posfred
