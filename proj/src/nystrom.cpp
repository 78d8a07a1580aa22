#include "posfred/nystrom.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace posfred {

NystromOperator assemble_nystrom(const MatrixKernel& kernel, const QuadratureRule& rule) {
  const int d = kernel.dim();
  const auto big_n = static_cast<Eigen::Index>(rule.size());
  Eigen::MatrixXd m(d * big_n, d * big_n);
  for (int i1 = 0; i1 < d; ++i1) {
    for (int i2 = 0; i2 < d; ++i2) {
      const ScalarKernel& k = kernel.entry(i1, i2);
      for (Eigen::Index j1 = 0; j1 < big_n; ++j1) {
        const double x = rule.nodes[static_cast<std::size_t>(j1)];
        for (Eigen::Index j2 = 0; j2 < big_n; ++j2) {
          const double y = rule.nodes[static_cast<std::size_t>(j2)];
          const double kv = k(x, y);
          if (!std::isfinite(kv)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "assemble_nystrom: kernel entry (" << i1 << "," << i2 << ") is not finite at (" << x << ", "
                << y << ")";
            throw std::domain_error(msg.str());
          }
          m(i1 * big_n + j1, i2 * big_n + j2) = rule.weights[static_cast<std::size_t>(j2)] * kv;
        }
      }
    }
  }
  return NystromOperator{rule, kernel, std::move(m)};
}

Eigen::VectorXd apply_at(const NystromOperator& op, const Eigen::VectorXd& u_nodes, double x) {
  const int d = op.dim();
  const int big_n = op.nodes();
  if (u_nodes.size() != static_cast<Eigen::Index>(d) * big_n) {
    throw std::invalid_argument("apply_at: expected a vector of length d*N");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  for (int j = 0; j < big_n; ++j) {
    const double w = op.rule.weights[static_cast<std::size_t>(j)];
    const double eta = op.rule.nodes[static_cast<std::size_t>(j)];
    for (int i1 = 0; i1 < d; ++i1) {
      for (int i2 = 0; i2 < d; ++i2) {
        out[i1] += w * op.kernel(i1, i2, x, eta) * u_nodes[i2 * big_n + j];
      }
    }
  }
  return out;
}

Eigen::VectorXd nystrom_interpolate(const NystromOperator& op, const EigenPair& pair, double x) {
  if (pair.value == 0.0) throw std::invalid_argument("nystrom_interpolate: eigenvalue is zero");
  return apply_at(op, pair.vector, x) / pair.value;
}

DiscretePositivity discrete_positivity_check(const NystromOperator& op, const OrthantCone& cone) {
  if (cone.dim() != op.dim()) throw std::invalid_argument("discrete_positivity_check: cone/kernel dimension mismatch");
  DiscretePositivity result;
  for (std::size_t j = 0; j < op.rule.size(); ++j) {
    if (op.rule.weights[j] < 0.0) {
      result.passes = false;
      result.weight_index = j;
      result.weight = op.rule.weights[j];
      return result;
    }
  }
  for (std::size_t j1 = 0; j1 < op.rule.size(); ++j1) {
    for (std::size_t j2 = 0; j2 < op.rule.size(); ++j2) {
      const Eigen::MatrixXd k = op.kernel.eval(op.rule.nodes[j1], op.rule.nodes[j2]);
      if (matrix_positivity_class(cone, k, false) == PositivityClass::NotPositive) {
        result.passes = false;
        result.node_pair = std::make_pair(j1, j2);
        return result;
      }
    }
  }
  return result;
}

}  // namespace posfred
