#include "posfred/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace posfred {

std::string_view to_string(BasisFamily f) {
  switch (f) {
    case BasisFamily::Hat: return "hat";
    case BasisFamily::LagrangePoly: return "lagrange";
    case BasisFamily::QuadBSpline: return "quad-bspline";
    case BasisFamily::Sinc: return "sinc";
    case BasisFamily::PiecewiseConstant: return "piecewise-constant";
    case BasisFamily::CubicBlend: return "cubic-blend";
  }
  return "?";
}

namespace {

void require_ascending(const std::vector<double>& g, const char* who) {
  if (g.size() < 2) throw std::invalid_argument(std::string(who) + ": need at least 2 grid points");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) throw std::invalid_argument(std::string(who) + ": grid has non-finite entries");
    if (i > 0 && !(g[i] > g[i - 1])) {
      throw std::invalid_argument(std::string(who) + ": grid must be strictly ascending");
    }
  }
}

double sinc_fn(double u) {
  if (u == 0.0) return 1.0;
  const double pu = std::numbers::pi * u;
  return std::sin(pu) / pu;
}

// Piece of the quadratic B-spline in local coordinate s = (x - xi_j)/h.
double bspline_piece(double s) {
  if (s >= 0.0 && s < 1.0) return 0.5 * s * s;
  if (s >= 1.0 && s < 2.0) return 0.5 * (-2.0 * s * s + 6.0 * s - 3.0);
  if (s >= 2.0 && s < 3.0) return 0.5 * (3.0 - s) * (3.0 - s);
  return 0.0;
}

double blend_left(double t) { return 1.0 - t * t * (3.0 - 2.0 * t); }  // 1 - 3t^2 + 2t^3
double blend_right(double t) { return t * t * (3.0 - 2.0 * t); }       // 3t^2 - 2t^3

// Index of the grid cell containing x (clamped to the last cell at b).
int locate_cell(const std::vector<double>& g, double x) {
  auto it = std::upper_bound(g.begin(), g.end(), x);
  int k = static_cast<int>(it - g.begin()) - 1;
  return std::clamp(k, 0, static_cast<int>(g.size()) - 2);
}

bool is_identity(const Eigen::MatrixXd& m) {
  return m.rows() == m.cols() && m == Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

}  // namespace

Basis Basis::hat(std::vector<double> grid) {
  require_ascending(grid, "hat_basis");
  Basis basis;
  basis.family_ = BasisFamily::Hat;
  basis.n_ = static_cast<int>(grid.size()) - 1;
  basis.count_ = basis.n_ + 1;
  basis.a_ = grid.front();
  basis.b_ = grid.back();
  basis.grid_ = std::move(grid);
  return basis;
}

Basis Basis::lagrange(std::vector<double> points) {
  if (points.size() < 2) throw std::invalid_argument("lagrange_basis: need at least 2 points");
  std::vector<double> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!std::isfinite(sorted[i])) throw std::invalid_argument("lagrange_basis: non-finite point");
    if (i > 0 && sorted[i] == sorted[i - 1]) throw std::invalid_argument("lagrange_basis: duplicate points");
  }
  Basis basis;
  basis.family_ = BasisFamily::LagrangePoly;
  basis.count_ = static_cast<int>(points.size());
  basis.n_ = basis.count_ - 1;
  basis.a_ = sorted.front();
  basis.b_ = sorted.back();
  basis.grid_ = std::move(points);
  return basis;
}

Basis Basis::quad_bspline(double a, double b, int n) {
  if (n < 1) throw std::invalid_argument("quad_bspline: n must be >= 1");
  if (!(a < b)) throw std::invalid_argument("quad_bspline: requires a < b");
  Basis basis;
  basis.family_ = BasisFamily::QuadBSpline;
  basis.n_ = n;
  basis.count_ = n + 2;
  basis.a_ = a;
  basis.b_ = b;
  basis.step_ = (b - a) / n;
  return basis;
}

Basis Basis::sinc(double a, double b, int n, double step) {
  if (n < 1) throw std::invalid_argument("sinc basis: n must be >= 1");
  if (!(a < b)) throw std::invalid_argument("sinc basis: requires a < b");
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("sinc basis: step must be positive");
  Basis basis;
  basis.family_ = BasisFamily::Sinc;
  basis.n_ = n;
  basis.count_ = 2 * n + 3;
  basis.a_ = a;
  basis.b_ = b;
  basis.step_ = step;
  return basis;
}

Basis Basis::piecewise_constant(std::vector<double> grid) {
  require_ascending(grid, "piecewise_constant basis");
  Basis basis;
  basis.family_ = BasisFamily::PiecewiseConstant;
  basis.n_ = static_cast<int>(grid.size()) - 1;
  basis.count_ = basis.n_;
  basis.a_ = grid.front();
  basis.b_ = grid.back();
  basis.grid_ = std::move(grid);
  return basis;
}

Basis Basis::cubic_blend(std::vector<double> grid) {
  require_ascending(grid, "cubic_blend basis");
  Basis basis = hat(std::move(grid));
  basis.family_ = BasisFamily::CubicBlend;
  return basis;
}

int Basis::cells() const {
  switch (family_) {
    case BasisFamily::Hat:
    case BasisFamily::PiecewiseConstant:
    case BasisFamily::CubicBlend:
      return n_;
    default:
      return 0;
  }
}

double Basis::eval(int i, double x) const {
  if (i < 0 || i >= count_) throw std::out_of_range("Basis::eval: index out of range");
  if (x < a_ || x > b_) return 0.0;
  const auto& g = grid_;
  const auto ui = static_cast<std::size_t>(i);
  switch (family_) {
    case BasisFamily::Hat:
      if (i > 0 && x >= g[ui - 1] && x <= g[ui]) return (x - g[ui - 1]) / (g[ui] - g[ui - 1]);
      if (i < n_ && x >= g[ui] && x <= g[ui + 1]) return (g[ui + 1] - x) / (g[ui + 1] - g[ui]);
      return 0.0;
    case BasisFamily::CubicBlend:
      if (i > 0 && x >= g[ui - 1] && x <= g[ui]) return blend_right((x - g[ui - 1]) / (g[ui] - g[ui - 1]));
      if (i < n_ && x >= g[ui] && x <= g[ui + 1]) return blend_left((x - g[ui]) / (g[ui + 1] - g[ui]));
      return 0.0;
    case BasisFamily::PiecewiseConstant:
      if (x >= g[ui] && (x < g[ui + 1] || (i == n_ - 1 && x == g[ui + 1]))) return 1.0;
      return 0.0;
    case BasisFamily::LagrangePoly: {
      double v = 1.0;
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (k != ui) v *= (x - g[k]) / (g[ui] - g[k]);
      }
      return v;
    }
    case BasisFamily::QuadBSpline: {
      double t = (x - a_) / step_;
      const double r = std::round(t);
      if (std::abs(t - r) <= 1e-12 * std::max(1.0, std::abs(t))) t = r;
      return bspline_piece(t - static_cast<double>(i - 2));
    }
    case BasisFamily::Sinc: {
      if (i == 0) return (b_ - x) / (b_ - a_);
      if (i == count_ - 1) return (x - a_) / (b_ - a_);
      if (x <= a_ || x >= b_) return 0.0;
      const int k = i - n_ - 1;
      const double t = std::log((x - a_) / (b_ - x));
      return sinc_fn(t / step_ - static_cast<double>(k));
    }
  }
  return 0.0;
}

Eigen::VectorXd Basis::eval_all(double x) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(count_);
  if (cells() > 0) {
    if (x < a_ || x > b_) return v;
    // Hat and blend functions agree on shared nodes; indicators use [x_k, x_{k+1}).
    return eval_all_on_cell(locate_cell(grid_, x), x);
  }
  for (int i = 0; i < count_; ++i) v[i] = eval(i, x);
  return v;
}

Eigen::VectorXd Basis::eval_all_on_cell(int cell, double x) const {
  if (cells() == 0) return eval_all(x);
  if (cell < 0 || cell >= n_) throw std::out_of_range("Basis::eval_all_on_cell: cell out of range");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(count_);
  const auto k = static_cast<std::size_t>(cell);
  const double lo = grid_[k];
  const double hi = grid_[k + 1];
  if (x < lo || x > hi) return v;
  switch (family_) {
    case BasisFamily::Hat:
      v[cell] = (hi - x) / (hi - lo);
      v[cell + 1] = (x - lo) / (hi - lo);
      break;
    case BasisFamily::CubicBlend: {
      const double t = (x - lo) / (hi - lo);
      v[cell] = blend_left(t);
      v[cell + 1] = blend_right(t);
      break;
    }
    case BasisFamily::PiecewiseConstant:
      v[cell] = 1.0;
      break;
    default:
      break;
  }
  return v;
}

Interval Basis::support(int i) const {
  if (i < 0 || i >= count_) throw std::out_of_range("Basis::support: index out of range");
  const auto ui = static_cast<std::size_t>(i);
  switch (family_) {
    case BasisFamily::Hat:
    case BasisFamily::CubicBlend:
      return {grid_[i > 0 ? ui - 1 : 0], grid_[i < n_ ? ui + 1 : ui]};
    case BasisFamily::PiecewiseConstant:
      return {grid_[ui], grid_[ui + 1]};
    case BasisFamily::QuadBSpline:
      return {std::max(a_, a_ + (i - 2) * step_), std::min(b_, a_ + (i + 1) * step_)};
    case BasisFamily::LagrangePoly:
    case BasisFamily::Sinc:
      return {a_, b_};
  }
  return {a_, b_};
}

Basis hat_basis(std::vector<double> grid) { return Basis::hat(std::move(grid)); }
Basis lagrange_basis(std::vector<double> points) { return Basis::lagrange(std::move(points)); }

std::vector<double> uniform_grid(double a, double b, int n) {
  if (n < 1) throw std::invalid_argument("uniform_grid: n must be >= 1");
  if (!(a < b)) throw std::invalid_argument("uniform_grid: requires a < b");
  std::vector<double> g(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) g[static_cast<std::size_t>(j)] = a + j * (b - a) / n;
  g.back() = b;
  return g;
}

CollocationScheme collocation_scheme(Basis basis, std::vector<double> points) {
  const int d = basis.count();
  if (static_cast<int>(points.size()) != d) {
    throw std::invalid_argument("collocation_scheme: number of points must equal the basis size");
  }
  std::vector<double> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("collocation_scheme: points must be pairwise distinct");
  }
  Eigen::MatrixXd p(d, d);
  for (int i = 0; i < d; ++i) p.row(i) = basis.eval_all(points[static_cast<std::size_t>(i)]).transpose();
  Eigen::MatrixXd p_inv = is_identity(p) ? p : dense_inverse(p);
  return CollocationScheme{std::move(basis), std::move(points), std::move(p), std::move(p_inv)};
}

CollocationScheme hat_scheme(std::vector<double> grid) {
  Basis basis = Basis::hat(grid);
  return collocation_scheme(std::move(basis), std::move(grid));
}

CollocationScheme lagrange_scheme(std::vector<double> points) {
  Basis basis = Basis::lagrange(points);
  return collocation_scheme(std::move(basis), std::move(points));
}

CollocationScheme quad_bspline_scheme(double a, double b, int n) {
  if (n < 3) throw std::invalid_argument("quad_bspline_scheme: n must be >= 3");
  Basis basis = Basis::quad_bspline(a, b, n);
  const double h = basis.step();
  std::vector<double> points;
  points.reserve(static_cast<std::size_t>(n) + 2);
  points.push_back(a);
  for (int i = 1; i <= n; ++i) points.push_back(a + (i - 0.5) * h);
  points.push_back(b);

  const int d = n + 2;
  Eigen::MatrixXd p(d, d);
  for (int i = 0; i < d; ++i) p.row(i) = basis.eval_all(points[static_cast<std::size_t>(i)]).transpose();

  std::vector<double> diag(static_cast<std::size_t>(d));
  std::vector<double> up(static_cast<std::size_t>(d - 1));
  std::vector<double> lo(static_cast<std::size_t>(d - 1));
  for (int i = 0; i < d; ++i) diag[static_cast<std::size_t>(i)] = p(i, i);
  for (int i = 0; i + 1 < d; ++i) {
    up[static_cast<std::size_t>(i)] = p(i, i + 1);
    lo[static_cast<std::size_t>(i)] = p(i + 1, i);
  }
  const Tridiagonal t(std::move(diag), std::move(up), std::move(lo));
  if ((t.dense() - p).cwiseAbs().maxCoeff() != 0.0) {
    throw std::logic_error("quad_bspline_scheme: collocation matrix is not tridiagonal");
  }
  Eigen::MatrixXd p_inv = tridiag_inverse(t);
  return CollocationScheme{std::move(basis), std::move(points), std::move(p), std::move(p_inv)};
}

CollocationScheme sinc_scheme(double a, double b, int n, double delta, double alpha_growth) {
  if (!(delta > 0.0 && delta < std::numbers::pi)) throw std::invalid_argument("sinc_scheme: delta must lie in (0, pi)");
  if (!(alpha_growth > 0.0) || !std::isfinite(alpha_growth)) {
    throw std::invalid_argument("sinc_scheme: alpha_growth must be positive");
  }
  if (n < 1) throw std::invalid_argument("sinc_scheme: n must be >= 1");
  const double h = std::sqrt(std::numbers::pi * delta / (alpha_growth * n));
  Basis basis = Basis::sinc(a, b, n, h);
  std::vector<double> points;
  points.reserve(static_cast<std::size_t>(2 * n + 3));
  points.push_back(a);
  for (int j = -n; j <= n; ++j) points.push_back(0.5 * (a + b) + 0.5 * (b - a) * std::tanh(0.5 * j * h));
  points.push_back(b);
  return collocation_scheme(std::move(basis), std::move(points));
}

GalerkinScheme pc_galerkin_scheme(std::vector<double> grid) {
  Basis basis = Basis::piecewise_constant(std::move(grid));
  const int n = basis.count();
  Eigen::VectorXd h(n);
  for (int j = 0; j < n; ++j) {
    h[j] = basis.grid()[static_cast<std::size_t>(j) + 1] - basis.grid()[static_cast<std::size_t>(j)];
  }
  Eigen::MatrixXd g = h.asDiagonal();
  Eigen::MatrixXd g_inv = h.cwiseInverse().asDiagonal();
  return GalerkinScheme{std::move(basis), std::move(g), std::move(g_inv)};
}

GalerkinScheme pl_galerkin_scheme(std::vector<double> grid) {
  Basis basis = Basis::hat(std::move(grid));
  const auto& x = basis.grid();
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<double> diag(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> off(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const double hj = x[uj + 1] - x[uj];
    diag[uj] += hj / 3.0;
    diag[uj + 1] += hj / 3.0;
    off[uj] = hj / 6.0;
  }
  const Tridiagonal t(diag, off, off);
  Eigen::MatrixXd g = t.dense();
  Eigen::MatrixXd g_inv = tridiag_inverse(t);
  return GalerkinScheme{std::move(basis), std::move(g), std::move(g_inv)};
}

SigmaFunctions sigma_functions(const CollocationScheme& scheme) {
  return SigmaFunctions{scheme.basis, scheme.P_inv.transpose()};
}

SigmaFunctions sigma_functions(const GalerkinScheme& scheme) { return SigmaFunctions{scheme.basis, scheme.gramian_inv}; }

SigmaAudit positivity_audit(const SigmaFunctions& sigma, int samples, double tol) {
  if (samples < 2) throw std::invalid_argument("positivity_audit: samples must be >= 2");
  const double a = sigma.basis.a();
  const double b = sigma.basis.b();
  SigmaAudit audit;
  audit.min_value = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double x = k == samples - 1 ? b : a + k * (b - a) / (samples - 1);
    const Eigen::VectorXd s = sigma.eval_all(x);
    Eigen::Index arg = 0;
    const double m = s.minCoeff(&arg);
    if (m < audit.min_value) {
      audit.min_value = m;
      audit.argmin = x;
      audit.min_index = static_cast<int>(arg);
    }
  }
  audit.passes = audit.min_value >= -tol;
  return audit;
}

SigmaAudit positivity_audit(const CollocationScheme& scheme, int samples, double tol) {
  return positivity_audit(sigma_functions(scheme), samples, tol);
}

SigmaAudit positivity_audit(const GalerkinScheme& scheme, int samples, double tol) {
  return positivity_audit(sigma_functions(scheme), samples, tol);
}

BasisExpansion collocation_project(const CollocationScheme& scheme, std::span<const double> u_values) {
  if (static_cast<Eigen::Index>(u_values.size()) != scheme.P.rows()) {
    throw std::invalid_argument("collocation_project: expected one value per collocation point");
  }
  const Eigen::Map<const Eigen::VectorXd> u(u_values.data(), static_cast<Eigen::Index>(u_values.size()));
  return BasisExpansion{scheme.basis, scheme.P_inv * u};
}

BasisExpansion galerkin_project(const GalerkinScheme& scheme, const std::function<double(double)>& f,
                                RuleFamily family, int sub_cells) {
  const Basis& basis = scheme.basis;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis.count());
  const int cells = basis.cells();
  const auto add_cell = [&](int cell, double lo, double hi, int sub) {
    const QuadratureRule rule = build_rule(family, lo, hi, sub);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double fx = f(rule.nodes[q]);
      if (!std::isfinite(fx)) throw std::domain_error("galerkin_project: integrand is not finite");
      rhs += (rule.weights[q] * fx) * basis.eval_all_on_cell(cell, rule.nodes[q]);
    }
  };
  if (cells > 0) {
    for (int c = 0; c < cells; ++c) {
      add_cell(c, basis.grid()[static_cast<std::size_t>(c)], basis.grid()[static_cast<std::size_t>(c) + 1], sub_cells);
    }
  } else {
    add_cell(0, basis.a(), basis.b(), sub_cells * basis.count());
  }
  return BasisExpansion{basis, scheme.gramian_inv * rhs};
}

BasisExpansion pc_galerkin_project(const GalerkinScheme& scheme, const std::function<double(double)>& f,
                                   RuleFamily family, int sub_cells) {
  if (scheme.basis.family() != BasisFamily::PiecewiseConstant) {
    throw std::invalid_argument("pc_galerkin_project: scheme is not piecewise constant");
  }
  return galerkin_project(scheme, f, family, sub_cells);
}

CubicPPInterpolant::CubicPPInterpolant(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  require_ascending(grid_, "cubic_pp_project");
  if (grid_.size() != values_.size()) throw std::invalid_argument("cubic_pp_project: grid and values differ in length");
}

double CubicPPInterpolant::operator()(double x) const {
  if (x < grid_.front() || x > grid_.back()) throw std::out_of_range("cubic_pp_project: x outside the grid");
  const auto k = static_cast<std::size_t>(locate_cell(grid_, x));
  const double t = (x - grid_[k]) / (grid_[k + 1] - grid_[k]);
  return blend_left(t) * values_[k] + blend_right(t) * values_[k + 1];
}

CubicPPInterpolant cubic_pp_project(std::vector<double> grid, std::vector<double> u_values) {
  return CubicPPInterpolant(std::move(grid), std::move(u_values));
}

}  // namespace posfred
