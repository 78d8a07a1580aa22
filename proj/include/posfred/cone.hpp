#pragma once

// Orthant cones in R^d, the orders they induce, and positivity classes of
// d x d matrices with respect to such a cone.

#include <Eigen/Dense>

#include <string_view>
#include <vector>

namespace posfred {

enum class PositivityClass { NotPositive, Positive, StrictlyPositive, StronglyPositive };

enum class OrderRelation { None, Leq, Lt, Ll };

std::string_view to_string(PositivityClass c);
std::string_view to_string(OrderRelation r);

/// Cone of vectors x with signs[i] * x[i] >= 0 for every component.
class OrthantCone {
 public:
  explicit OrthantCone(std::vector<int> signs);

  /// The standard cone R^d_+.
  static OrthantCone positive(int d);

  int dim() const { return static_cast<int>(signs_.size()); }
  int sign(int i) const { return signs_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& signs() const { return signs_; }

  /// diag(signs); maps the cone onto R^d_+ and is its own inverse.
  Eigen::MatrixXd sign_matrix() const;

 private:
  std::vector<int> signs_;
};

/// Cone generated by the columns of an invertible matrix. Every query is
/// answered by changing coordinates so that the cone becomes R^d_+.
class GeneratedCone {
 public:
  explicit GeneratedCone(Eigen::MatrixXd generators);

  int dim() const { return static_cast<int>(generators_.cols()); }
  const Eigen::MatrixXd& generators() const { return generators_; }

  /// Coordinates of x in the generator basis.
  Eigen::VectorXd coordinates(const Eigen::VectorXd& x) const;
  /// Matrix of the same linear map in generator coordinates.
  Eigen::MatrixXd to_orthant_frame(const Eigen::MatrixXd& m) const;

 private:
  Eigen::MatrixXd generators_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

// `tol` is an absolute slack on every sign test; the default 0 keeps the
// tests exact.

bool cone_contains(const OrthantCone& cone, const Eigen::VectorXd& x, double tol = 0.0);
bool cone_contains(const GeneratedCone& cone, const Eigen::VectorXd& x, double tol = 0.0);

/// Strongest relation among x << y, x < y, x <= y that holds.
OrderRelation cone_relate(const OrthantCone& cone, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y, double tol = 0.0);

/// Positivity class of m with respect to the cone.
///
/// StronglyPositive when every s_i s_j m_ij > 0. Positive when every
/// s_i s_j m_ij >= 0. StrictlyPositive is only reported when
/// `injectivity_check` is set and no nonzero cone vector lies in the null
/// space of m; without the check a positive, non-strong matrix is reported
/// as Positive.
PositivityClass matrix_positivity_class(const OrthantCone& cone, const Eigen::MatrixXd& m,
                                        bool injectivity_check, double tol = 0.0);

PositivityClass matrix_positivity_class(const GeneratedCone& cone, const Eigen::MatrixXd& m,
                                        bool injectivity_check, double tol = 0.0);

/// True when N(m) meets R^d_+ only in 0.
bool is_orthant_injective(const Eigen::MatrixXd& m);

}  // namespace posfred
