#pragma once

// Projection methods on [a, b]: basis families, collocation and Galerkin
// schemes, and the associated sigma functions
//
//   sigma_i(x) = sum_j C_ij phi_j(x),
//
// which satisfy (Pi u)(x) = sum_i l_i(u) sigma_i(x) for the defining
// functionals l_i (point values for collocation, inner products for
// Galerkin). Nonnegative sigma functions make Pi positivity preserving.
//
// Collocation matrices are stored point-major: P(i, j) = phi_j(x_i). The
// coefficients of Pi u solve P c = u(x), so C = P^{-T}.

#include "posfred/linalg.hpp"
#include "posfred/quadrature.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace posfred {

enum class BasisFamily { Hat, LagrangePoly, QuadBSpline, Sinc, PiecewiseConstant, CubicBlend };

std::string_view to_string(BasisFamily f);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// A finite family of real functions phi_0..phi_{count-1} on [a, b].
///
/// Index conventions: QuadBSpline index i is the B-spline with support
/// [a + (i-2)h, a + (i+1)h]; Sinc index 0 and count-1 are the boundary ramps
/// (b-x)/(b-a) and (x-a)/(b-a), index i in between is the sinc function
/// centered at (i - n - 1) h in transformed coordinates; PiecewiseConstant
/// index i is the indicator of grid cell [x_i, x_{i+1}) (last cell closed).
class Basis {
 public:
  static Basis hat(std::vector<double> grid);
  static Basis lagrange(std::vector<double> points);
  static Basis quad_bspline(double a, double b, int n);
  static Basis sinc(double a, double b, int n, double step);
  static Basis piecewise_constant(std::vector<double> grid);
  /// Zero-slope cubic Hermite blending functions on a grid: 1-3t^2+2t^3 to
  /// the right of a node and 3t^2-2t^3 to its left.
  static Basis cubic_blend(std::vector<double> grid);

  BasisFamily family() const { return family_; }
  int count() const { return count_; }
  double a() const { return a_; }
  double b() const { return b_; }
  /// Breakpoints (Hat, PiecewiseConstant, CubicBlend) or interpolation points
  /// (LagrangePoly); empty for the other families.
  const std::vector<double>& grid() const { return grid_; }
  /// Knot spacing (QuadBSpline) or sinc step (Sinc).
  double step() const { return step_; }

  double eval(int i, double x) const;
  Eigen::VectorXd eval_all(double x) const;
  /// For grid families: all basis values at x using the polynomial pieces of
  /// grid cell `cell` (closed at both ends), so quadrature nodes on cell
  /// boundaries are attributed to the cell being integrated. Other families
  /// ignore `cell`.
  Eigen::VectorXd eval_all_on_cell(int cell, double x) const;
  /// Number of grid cells (0 for families without a grid).
  int cells() const;
  Interval support(int i) const;

 private:
  Basis() = default;

  BasisFamily family_ = BasisFamily::Hat;
  int count_ = 0;
  double a_ = 0.0;
  double b_ = 1.0;
  int n_ = 0;
  double step_ = 0.0;
  std::vector<double> grid_;
};

Basis hat_basis(std::vector<double> grid);
Basis lagrange_basis(std::vector<double> points);

/// Function expanded in a basis: x -> sum_j coeffs_j phi_j(x).
struct BasisExpansion {
  Basis basis;
  Eigen::VectorXd coeffs;

  double operator()(double x) const { return coeffs.dot(basis.eval_all(x)); }
};

struct CollocationScheme {
  Basis basis;
  std::vector<double> points;
  Eigen::MatrixXd P;      // P(i, j) = phi_j(points[i])
  Eigen::MatrixXd P_inv;
};

/// Generic collocation scheme; P_inv by partial-pivot elimination.
CollocationScheme collocation_scheme(Basis basis, std::vector<double> points);
/// Hat functions collocated at their own grid (P = I).
CollocationScheme hat_scheme(std::vector<double> grid);
/// Lagrange polynomials collocated at their nodes (P = I).
CollocationScheme lagrange_scheme(std::vector<double> points);
/// Quadratic B-splines on n uniform cells, collocated at a, the cell
/// midpoints and b. P is tridiagonal and P_inv comes from the closed-form
/// tridiagonal inverse. Requires n >= 3.
CollocationScheme quad_bspline_scheme(double a, double b, int n);
/// Sinc collocation with boundary ramps: 2n+3 functions, step
/// h = sqrt(pi delta / (alpha_growth n)), points a, phi(jh) for |j| <= n, b,
/// where phi(t) = (a+b)/2 + (b-a)/2 tanh(t/2). Requires delta in (0, pi).
CollocationScheme sinc_scheme(double a, double b, int n, double delta, double alpha_growth);

struct GalerkinScheme {
  Basis basis;
  Eigen::MatrixXd gramian;      // (phi_j, phi_i) in L^2(a, b)
  Eigen::MatrixXd gramian_inv;
};

/// Indicators of the grid cells; Gramian diag(h_0, ..., h_{n-1}).
GalerkinScheme pc_galerkin_scheme(std::vector<double> grid);
/// Hat functions; tridiagonal Gramian (1/6)[h_{j-1}, 2(h_{j-1}+h_j), h_j],
/// inverted in closed form. Requires n >= 2 cells.
GalerkinScheme pl_galerkin_scheme(std::vector<double> grid);

struct SigmaFunctions {
  Basis basis;
  Eigen::MatrixXd coeffs;  // sigma_i = sum_j coeffs(i, j) phi_j

  int count() const { return static_cast<int>(coeffs.rows()); }
  double operator()(int i, double x) const { return coeffs.row(i).dot(basis.eval_all(x)); }
  Eigen::VectorXd eval_all(double x) const { return coeffs * basis.eval_all(x); }
};

SigmaFunctions sigma_functions(const CollocationScheme& scheme);
SigmaFunctions sigma_functions(const GalerkinScheme& scheme);

struct SigmaAudit {
  double min_value = 0.0;
  double argmin = 0.0;
  int min_index = 0;  // sigma attaining the minimum
  bool passes = false;
};

/// Minimum of min_i sigma_i over `samples` uniform points of [a, b]
/// (endpoints included); passes iff that minimum is >= -tol.
SigmaAudit positivity_audit(const SigmaFunctions& sigma, int samples, double tol);
SigmaAudit positivity_audit(const CollocationScheme& scheme, int samples, double tol);
SigmaAudit positivity_audit(const GalerkinScheme& scheme, int samples, double tol);

/// Pi u = sum_i u(x_i) sigma_i from values at the collocation points.
BasisExpansion collocation_project(const CollocationScheme& scheme, std::span<const double> u_values);

/// Galerkin projection of f; inner products (f, phi_i) are integrated cell
/// by cell of the basis grid with `sub_cells` cells of the given family.
BasisExpansion galerkin_project(const GalerkinScheme& scheme, const std::function<double(double)>& f,
                                RuleFamily family = RuleFamily::Gauss6, int sub_cells = 4);

/// Cell means of f, i.e. the piecewise-constant Galerkin projection.
BasisExpansion pc_galerkin_project(const GalerkinScheme& scheme, const std::function<double(double)>& f,
                                   RuleFamily family = RuleFamily::Gauss6, int sub_cells = 4);

/// Positivity-preserving C^1 cubic interpolant with zero slope at every node:
/// on [x_i, x_{i+1}] with t = (x - x_i)/h_i,
///   (1 - 3t^2 + 2t^3) u_i + (3t^2 - 2t^3) u_{i+1}.
class CubicPPInterpolant {
 public:
  CubicPPInterpolant(std::vector<double> grid, std::vector<double> values);
  double operator()(double x) const;
  const std::vector<double>& grid() const { return grid_; }

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

CubicPPInterpolant cubic_pp_project(std::vector<double> grid, std::vector<double> u_values);

/// x_j = a + j (b - a) / n, j = 0..n, with x_n = b exactly.
std::vector<double> uniform_grid(double a, double b, int n);

}  // namespace posfred
