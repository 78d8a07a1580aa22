#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace posfred {

/// Tridiagonal matrix with diagonal a_1..a_n, superdiagonal b_1..b_{n-1}
/// and subdiagonal c_1..c_{n-1}. Every b_j must be nonzero.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> super;
  std::vector<double> sub;

  Tridiagonal(std::vector<double> diag, std::vector<double> super, std::vector<double> sub);

  int size() const { return static_cast<int>(diag.size()); }
  Eigen::MatrixXd dense() const;
};

class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, int index) : std::runtime_error(what), index_(index) {}
  /// 1-based index of the vanishing pivot.
  int index() const { return index_; }

 private:
  int index_;
};

/// Entry (i, j) of T^{-1}, 1-based, from the closed-form product
/// representation: with d_n = a_n, d_{t-1} = a_{t-1} - b_{t-1}c_{t-1}/d_t and
/// delta_1 = a_1, delta_{t+1} = a_{t+1} - b_t c_t / delta_t,
///
///   (T^{-1})_ij = (-1)^{i+j} b_i..b_{j-1} d_{j+1}..d_n / (delta_i..delta_n),  i <= j
///   (T^{-1})_ij = (-1)^{i+j} c_j..c_{i-1} d_{i+1}..d_n / (delta_j..delta_n),  j <  i
///
/// Throws SingularMatrixError when a pivot of either recursion vanishes.
double tridiag_inverse_entry(const Tridiagonal& t, int i, int j);

/// Full inverse from the same representation, sharing prefix products.
Eigen::MatrixXd tridiag_inverse(const Tridiagonal& t);

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;  // max-magnitude entry is +1
  int iterations = 0;
  double residual = 0.0;   // ||M v - value v||_inf
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double last_estimate)
      : std::runtime_error(what), last_estimate_(last_estimate) {}
  double last_estimate() const { return last_estimate_; }

 private:
  double last_estimate_;
};

struct PowerIterationOptions {
  double tol = 1e-10;
  int max_iter = 10000;
  /// Upper bound on repeated squarings used to separate clustered
  /// eigenvalues before iterating with M itself.
  int max_squarings = 48;
  std::uint64_t seed = 12345;
};

/// Dominant eigenpair by power iteration.
///
/// The start vector is the all-ones vector plus a seeded perturbation in
/// [0, 1e-2), so it stays in the interior of R^n_+. The iteration first runs
/// on the normalized powers M^(2^s) until they stabilize, then continues with
/// M. The eigenvalue estimate is v.Mv / v.v; convergence requires successive
/// estimates to differ by less than tol and ||Mv - lambda v||_inf <= tol ||M||_inf.
/// Throws NonConvergenceError (carrying the last estimate) otherwise, which
/// happens when no eigenvalue strictly dominates in modulus.
EigenPair dominant_eigenpair(const Eigen::MatrixXd& m, const PowerIterationOptions& options = {});
EigenPair dominant_eigenpair(const Eigen::MatrixXd& m, double tol, int max_iter);

/// Root of f in [lo, hi] by bisection; requires f(lo) f(hi) < 0. Stops when
/// the bracket is no wider than tol (or cannot shrink further).
double bisection_root(const std::function<double(double)>& f, double lo, double hi, double tol);

/// Dense solve with partial pivoting.
Eigen::MatrixXd dense_inverse(const Eigen::MatrixXd& m);

}  // namespace posfred
