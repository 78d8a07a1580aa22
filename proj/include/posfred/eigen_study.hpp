#pragma once

// Dominant eigenvalues of discretized Fredholm operators u -> int K(., y) u(y) dy
// on [a, b], and the convergence / sign-change experiments built on them.
//
// Every method produces a square matrix K^n of size d * d_n with block
// (i1, i2) acting from component i2 to component i1; vectors are stored
// component-major like the Nystrom module.

#include "posfred/cone.hpp"
#include "posfred/kernels.hpp"
#include "posfred/linalg.hpp"
#include "posfred/quadrature.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace posfred {

enum class MethodKind { Nystrom, CollocationHat, CollocationLagrange, CollocationCubicPP, GalerkinPC };

struct MethodSpec {
  MethodKind kind = MethodKind::Nystrom;
  /// Quadrature family of a Nystrom method.
  RuleFamily rule = RuleFamily::Trapezoid;
  /// Nystrom: number of nodes. Projection methods: number of grid cells.
  int n = 0;
  /// Rule for the inner integrals of projection methods, applied with
  /// inner_factor sub-cells per grid cell.
  RuleFamily inner_rule = RuleFamily::Midpoint;
  int inner_factor = 4;
};

/// "nystrom-<rule>", "collocation-hat", "collocation-lagrange",
/// "collocation-cubic", "galerkin-pc".
std::string method_name(const MethodSpec& method);
std::optional<MethodSpec> parse_method(std::string_view name);

/// Quadrature rule of a Nystrom method on [a, b] with method.n nodes.
/// Midpoint uses n cells, Trapezoid n - 1 cells, Milne and Gauss6 n / 3 cells
/// (n must be a multiple of 3).
QuadratureRule nystrom_rule(const MethodSpec& method, double a, double b);

/// Abscissae attached to the entries of one component of the eigenvector:
/// quadrature nodes, grid points, or cell midpoints (GalerkinPC).
std::vector<double> method_abscissae(const MethodSpec& method, double a, double b);

struct LaplaceExact {
  double nu = 0.0;
  double lambda = 0.0;
};

/// Dominant eigenvalue of the Laplace kernel of rate alpha on an interval of
/// length L: nu is the smallest positive root of tan(L nu / (2 alpha)) = 1/nu
/// and lambda = 1 / (1 + nu^2).
LaplaceExact exact_laplace_dominant(double L, double alpha);

Eigen::MatrixXd assemble_eigen_matrix(const MethodSpec& method, const MatrixKernel& kernel, double a, double b);

struct EigenReport {
  MethodSpec method;
  double lambda_hat = 0.0;
  /// Normalized so that the cone-signed entry of largest magnitude is +1.
  Eigen::VectorXd eigvec;
  std::vector<double> abscissae;
  std::optional<double> error_vs_exact;
  /// Entries whose cone-signed value is below -1e-8 max|eigvec|.
  int sign_changes = 0;
  bool positivity_pass = false;
  int iterations = 0;
  double residual = 0.0;
};

/// Cone-signed count of negative entries (see EigenReport::sign_changes).
int count_sign_changes(const Eigen::VectorXd& v, const OrthantCone& cone, double tol_sign = 1e-8);

/// Assembles K^n, computes its dominant eigenpair and runs the positivity
/// check of the method: nonnegative weights plus kernel audit at the nodes
/// for Nystrom; sigma-function audit plus kernel audit at the grid points for
/// projection methods. The cone defaults to R^d_+.
EigenReport run_eigen(const MethodSpec& method, const MatrixKernel& kernel, double a, double b, double tol = 1e-10,
                      std::optional<OrthantCone> cone = std::nullopt, std::optional<double> exact = std::nullopt);

struct ConvergenceRow {
  int n = 0;
  std::optional<EigenReport> report;
  double error = 0.0;   // NaN when the row failed
  std::string failure;  // solver message of a failed row
  std::optional<double> last_estimate;  // eigenvalue estimate when the solver gave up
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  /// Least-squares slope of log(error) against log(1/n) over the rows that
  /// succeeded; empty when fewer than two usable rows remain.
  std::optional<double> slope;
};

/// Runs `method` for every n of n_list (ascending, >= 3 entries). Solver
/// failures are recorded in their row and excluded from the fit.
ConvergenceStudy convergence_study(const MethodSpec& method, const MatrixKernel& kernel, double a, double b,
                                   double exact_lambda, std::span<const int> n_list, double tol = 1e-10,
                                   std::optional<OrthantCone> cone = std::nullopt);

}  // namespace posfred
