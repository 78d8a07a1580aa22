#include "posfred/cone.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace posfred {

std::string_view to_string(PositivityClass c) {
  switch (c) {
    case PositivityClass::NotPositive: return "not-positive";
    case PositivityClass::Positive: return "positive";
    case PositivityClass::StrictlyPositive: return "strictly-positive";
    case PositivityClass::StronglyPositive: return "strongly-positive";
  }
  return "?";
}

std::string_view to_string(OrderRelation r) {
  switch (r) {
    case OrderRelation::None: return "none";
    case OrderRelation::Leq: return "leq";
    case OrderRelation::Lt: return "lt";
    case OrderRelation::Ll: return "ll";
  }
  return "?";
}

OrthantCone::OrthantCone(std::vector<int> signs) : signs_(std::move(signs)) {
  if (signs_.empty()) throw std::invalid_argument("OrthantCone: dimension must be >= 1");
  for (int s : signs_) {
    if (s != 1 && s != -1) throw std::invalid_argument("OrthantCone: signs must be +1 or -1");
  }
}

OrthantCone OrthantCone::positive(int d) {
  if (d < 1) throw std::invalid_argument("OrthantCone: dimension must be >= 1");
  return OrthantCone(std::vector<int>(static_cast<std::size_t>(d), 1));
}

Eigen::MatrixXd OrthantCone::sign_matrix() const {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i) s(i, i) = sign(i);
  return s;
}

GeneratedCone::GeneratedCone(Eigen::MatrixXd generators) : generators_(std::move(generators)) {
  if (generators_.rows() != generators_.cols() || generators_.rows() == 0) {
    throw std::invalid_argument("GeneratedCone: generator matrix must be square and nonempty");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> check(generators_);
  if (!check.isInvertible()) throw std::invalid_argument("GeneratedCone: generators are linearly dependent");
  lu_.compute(generators_);
}

Eigen::VectorXd GeneratedCone::coordinates(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw std::invalid_argument("GeneratedCone: dimension mismatch");
  return lu_.solve(x);
}

Eigen::MatrixXd GeneratedCone::to_orthant_frame(const Eigen::MatrixXd& m) const {
  if (m.rows() != dim() || m.cols() != dim()) throw std::invalid_argument("GeneratedCone: shape mismatch");
  return lu_.solve(m * generators_);
}

namespace {

void require_dim(const OrthantCone& cone, Eigen::Index n) {
  if (n != cone.dim()) {
    throw std::invalid_argument("cone dimension " + std::to_string(cone.dim()) +
                                " does not match vector length " + std::to_string(n));
  }
}

}  // namespace

bool cone_contains(const OrthantCone& cone, const Eigen::VectorXd& x, double tol) {
  require_dim(cone, x.size());
  for (int i = 0; i < cone.dim(); ++i) {
    if (cone.sign(i) * x[i] < -tol) return false;
  }
  return true;
}

bool cone_contains(const GeneratedCone& cone, const Eigen::VectorXd& x, double tol) {
  return cone_contains(OrthantCone::positive(cone.dim()), cone.coordinates(x), tol);
}

OrderRelation cone_relate(const OrthantCone& cone, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y, double tol) {
  require_dim(cone, x.size());
  require_dim(cone, y.size());
  bool all_strict = true;
  bool any_nonzero = false;
  for (int i = 0; i < cone.dim(); ++i) {
    const double diff = cone.sign(i) * (y[i] - x[i]);
    if (diff < -tol) return OrderRelation::None;
    if (diff <= tol) all_strict = false;
    if (y[i] != x[i]) any_nonzero = true;
  }
  if (all_strict) return OrderRelation::Ll;
  return any_nonzero ? OrderRelation::Lt : OrderRelation::Leq;
}

bool is_orthant_injective(const Eigen::MatrixXd& m) {
  const Eigen::Index d = m.cols();
  if (d == 0) return true;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const double scale = svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
  const double threshold = 1e-12 * scale;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()[i] > threshold) ++rank;
  }
  if (rank == d) return true;
  if (d > 16) throw std::invalid_argument("is_orthant_injective: rank-deficient test limited to d <= 16");

  // N(m) meets R^d_+ \ {0} iff {x >= 0 : m x = 0, sum x = 1} is nonempty.
  // Such a polytope has a vertex, i.e. a solution supported on a set of
  // linearly independent columns, so enumerating supports is exhaustive.
  Eigen::MatrixXd a(m.rows() + 1, d);
  a.topRows(m.rows()) = m;
  a.bottomRows(1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m.rows() + 1);
  rhs[m.rows()] = 1.0;
  const double residual_tol = 1e-10 * (1.0 + scale);

  for (unsigned mask = 1; mask < (1u << d); ++mask) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (mask & (1u << j)) cols.push_back(j);
    }
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sub);
    const Eigen::VectorXd x = cod.solve(rhs);
    if ((sub * x - rhs).lpNorm<Eigen::Infinity>() > residual_tol) continue;
    if (x.minCoeff() >= -1e-12) return false;
  }
  return true;
}

PositivityClass matrix_positivity_class(const OrthantCone& cone, const Eigen::MatrixXd& m,
                                        bool injectivity_check, double tol) {
  if (m.rows() != cone.dim() || m.cols() != cone.dim()) {
    throw std::invalid_argument("matrix_positivity_class: matrix must be " + std::to_string(cone.dim()) +
                                "x" + std::to_string(cone.dim()));
  }
  bool positive = true;
  bool strong = true;
  for (int i = 0; i < cone.dim(); ++i) {
    for (int j = 0; j < cone.dim(); ++j) {
      const double v = cone.sign(i) * cone.sign(j) * m(i, j);
      if (v < -tol) positive = false;
      if (v <= tol) strong = false;
    }
  }
  if (!positive) return PositivityClass::NotPositive;
  if (strong) return PositivityClass::StronglyPositive;
  if (injectivity_check) {
    const Eigen::MatrixXd s = cone.sign_matrix();
    if (is_orthant_injective(s * m * s)) return PositivityClass::StrictlyPositive;
  }
  return PositivityClass::Positive;
}

PositivityClass matrix_positivity_class(const GeneratedCone& cone, const Eigen::MatrixXd& m,
                                        bool injectivity_check, double tol) {
  return matrix_positivity_class(OrthantCone::positive(cone.dim()), cone.to_orthant_frame(m),
                                 injectivity_check, tol);
}

}  // namespace posfred
