#include "posfred/eigen_study.hpp"

#include "posfred/nystrom.hpp"
#include "posfred/projection.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace posfred {

namespace {

constexpr int kAuditSamples = 2000;
constexpr double kAuditTol = 1e-12;

double checked(const ScalarKernel& k, double x, double y) {
  const double v = k(x, y);
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "assemble_eigen_matrix: kernel is not finite at (" << x << ", " << y << ")";
    throw std::domain_error(msg.str());
  }
  return v;
}

bool is_projection(MethodKind kind) { return kind != MethodKind::Nystrom; }

void validate(const MethodSpec& method, double a, double b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("eigen study: requires finite a < b");
  if (is_projection(method.kind)) {
    if (method.n < 2) throw std::invalid_argument("eigen study: projection methods need n >= 2");
    if (method.inner_factor < 1) throw std::invalid_argument("eigen study: inner_factor must be >= 1");
  }
}

// Block for one scalar kernel entry; rows and columns indexed by the
// method's d_n unknowns.
Eigen::MatrixXd collocation_hat_block(const ScalarKernel& k, const std::vector<double>& x, const MethodSpec& m) {
  const int n = static_cast<int>(x.size()) - 1;
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int c = 0; c < n; ++c) {
    const double lo = x[static_cast<std::size_t>(c)];
    const double hi = x[static_cast<std::size_t>(c) + 1];
    const QuadratureRule rule = build_rule(m.inner_rule, lo, hi, m.inner_factor);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double y = rule.nodes[q];
      const double left = (hi - y) / (hi - lo);
      const double right = (y - lo) / (hi - lo);
      for (int r = 0; r <= n; ++r) {
        const double wk = rule.weights[q] * checked(k, x[static_cast<std::size_t>(r)], y);
        block(r, c) += wk * left;
        block(r, c + 1) += wk * right;
      }
    }
  }
  return block;
}

Eigen::MatrixXd collocation_lagrange_block(const ScalarKernel& k, const std::vector<double>& x,
                                           const Eigen::MatrixXd& phi, const QuadratureRule& rule) {
  const auto dn = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(dn, dn);
  Eigen::VectorXd wk(static_cast<Eigen::Index>(rule.size()));
  for (Eigen::Index r = 0; r < dn; ++r) {
    for (std::size_t q = 0; q < rule.size(); ++q) {
      wk[static_cast<Eigen::Index>(q)] = rule.weights[q] * checked(k, x[static_cast<std::size_t>(r)], rule.nodes[q]);
    }
    block.row(r) = wk.transpose() * phi;
  }
  return block;
}

// Sum of the two displayed (n+1) x (n+1) summands: row r of the first holds
// int K(x_r, y) kappa_j(y) dy in column j for r < n; row r + 1 of the second
// holds int K(x_r, y) kappa-bar_j(y) dy in column j + 1.
Eigen::MatrixXd collocation_cubic_block(const ScalarKernel& k, const std::vector<double>& x, const MethodSpec& m) {
  const int n = static_cast<int>(x.size()) - 1;
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int j = 0; j < n; ++j) {
    const double lo = x[static_cast<std::size_t>(j)];
    const double hi = x[static_cast<std::size_t>(j) + 1];
    const QuadratureRule rule = build_rule(m.inner_rule, lo, hi, m.inner_factor);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double t = (rule.nodes[q] - lo) / (hi - lo);
      const double kappa_bar = t * t * (3.0 - 2.0 * t);
      const double kappa = 1.0 - kappa_bar;
      for (int r = 0; r < n; ++r) {
        const double wk = rule.weights[q] * checked(k, x[static_cast<std::size_t>(r)], rule.nodes[q]);
        block(r, j) += wk * kappa;
        block(r + 1, j + 1) += wk * kappa_bar;
      }
    }
  }
  return block;
}

Eigen::MatrixXd galerkin_pc_block(const ScalarKernel& k, const std::vector<double>& x, const MethodSpec& m) {
  const int n = static_cast<int>(x.size()) - 1;
  std::vector<QuadratureRule> rules;
  rules.reserve(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    rules.push_back(build_rule(m.inner_rule, x[static_cast<std::size_t>(c)], x[static_cast<std::size_t>(c) + 1], m.inner_factor));
  }
  Eigen::MatrixXd block(n, n);
  for (int i = 0; i < n; ++i) {
    const QuadratureRule& ri = rules[static_cast<std::size_t>(i)];
    const double h = x[static_cast<std::size_t>(i) + 1] - x[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      const QuadratureRule& rj = rules[static_cast<std::size_t>(j)];
      double s = 0.0;
      for (std::size_t p = 0; p < ri.size(); ++p) {
        double inner = 0.0;
        for (std::size_t q = 0; q < rj.size(); ++q) inner += rj.weights[q] * checked(k, ri.nodes[p], rj.nodes[q]);
        s += ri.weights[p] * inner;
      }
      block(i, j) = s / h;
    }
  }
  return block;
}

}  // namespace

std::string method_name(const MethodSpec& method) {
  switch (method.kind) {
    case MethodKind::Nystrom: return "nystrom-" + std::string(to_string(method.rule));
    case MethodKind::CollocationHat: return "collocation-hat";
    case MethodKind::CollocationLagrange: return "collocation-lagrange";
    case MethodKind::CollocationCubicPP: return "collocation-cubic";
    case MethodKind::GalerkinPC: return "galerkin-pc";
  }
  return "?";
}

std::optional<MethodSpec> parse_method(std::string_view name) {
  MethodSpec m;
  constexpr std::string_view prefix = "nystrom-";
  if (name.substr(0, prefix.size()) == prefix) {
    const auto rule = parse_rule_family(name.substr(prefix.size()));
    if (!rule) return std::nullopt;
    m.kind = MethodKind::Nystrom;
    m.rule = *rule;
    return m;
  }
  if (name == "collocation-hat") m.kind = MethodKind::CollocationHat;
  else if (name == "collocation-lagrange") m.kind = MethodKind::CollocationLagrange;
  else if (name == "collocation-cubic") m.kind = MethodKind::CollocationCubicPP;
  else if (name == "galerkin-pc") m.kind = MethodKind::GalerkinPC;
  else return std::nullopt;
  return m;
}

QuadratureRule nystrom_rule(const MethodSpec& method, double a, double b) {
  const int n = method.n;
  switch (method.rule) {
    case RuleFamily::Midpoint:
      if (n < 1) throw std::invalid_argument("nystrom-midpoint: need at least 1 node");
      return build_rule(method.rule, a, b, n);
    case RuleFamily::Trapezoid:
      if (n < 2) throw std::invalid_argument("nystrom-trapezoid: need at least 2 nodes");
      return build_rule(method.rule, a, b, n - 1);
    case RuleFamily::Milne:
    case RuleFamily::Gauss6:
      if (n < 3 || n % 3 != 0) {
        throw std::invalid_argument("nystrom-" + std::string(to_string(method.rule)) +
                                    ": node count must be a positive multiple of 3");
      }
      return build_rule(method.rule, a, b, n / 3);
  }
  throw std::invalid_argument("nystrom_rule: unknown family");
}

std::vector<double> method_abscissae(const MethodSpec& method, double a, double b) {
  validate(method, a, b);
  if (method.kind == MethodKind::Nystrom) return nystrom_rule(method, a, b).nodes;
  std::vector<double> grid = uniform_grid(a, b, method.n);
  if (method.kind != MethodKind::GalerkinPC) return grid;
  std::vector<double> mid(grid.size() - 1);
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (grid[i] + grid[i + 1]);
  return mid;
}

LaplaceExact exact_laplace_dominant(double L, double alpha) {
  if (!(L > 0.0) || !(alpha > 0.0) || !std::isfinite(L) || !std::isfinite(alpha)) {
    throw std::invalid_argument("exact_laplace_dominant: L and alpha must be positive");
  }
  const double c = L / (2.0 * alpha);
  // nu sin(c nu) - cos(c nu) has the roots of tan(c nu) = 1/nu without the pole.
  const auto f = [c](double nu) { return nu * std::sin(c * nu) - std::cos(c * nu); };
  const double lo = 1e-9;
  const double hi = std::numbers::pi / (2.0 * c) - 1e-9;
  if (!(lo < hi)) throw std::invalid_argument("exact_laplace_dominant: bracket is empty");
  LaplaceExact out;
  out.nu = bisection_root(f, lo, hi, std::numeric_limits<double>::min());
  out.lambda = 1.0 / (1.0 + out.nu * out.nu);
  return out;
}

Eigen::MatrixXd assemble_eigen_matrix(const MethodSpec& method, const MatrixKernel& kernel, double a, double b) {
  validate(method, a, b);
  if (method.kind == MethodKind::Nystrom) return assemble_nystrom(kernel, nystrom_rule(method, a, b)).matrix;

  const int d = kernel.dim();
  const std::vector<double> grid = uniform_grid(a, b, method.n);
  const int dn = method.kind == MethodKind::GalerkinPC ? method.n : method.n + 1;

  // Lagrange basis values at the global inner nodes are shared by all blocks.
  std::optional<QuadratureRule> global_rule;
  Eigen::MatrixXd phi;
  if (method.kind == MethodKind::CollocationLagrange) {
    global_rule = build_rule(method.inner_rule, a, b, method.inner_factor * method.n);
    const Basis basis = Basis::lagrange(grid);
    phi.resize(static_cast<Eigen::Index>(global_rule->size()), dn);
    for (std::size_t q = 0; q < global_rule->size(); ++q) {
      phi.row(static_cast<Eigen::Index>(q)) = basis.eval_all(global_rule->nodes[q]).transpose();
    }
  }

  Eigen::MatrixXd m(d * dn, d * dn);
  for (int i1 = 0; i1 < d; ++i1) {
    for (int i2 = 0; i2 < d; ++i2) {
      const ScalarKernel& k = kernel.entry(i1, i2);
      Eigen::MatrixXd block;
      switch (method.kind) {
        case MethodKind::CollocationHat: block = collocation_hat_block(k, grid, method); break;
        case MethodKind::CollocationLagrange: block = collocation_lagrange_block(k, grid, phi, *global_rule); break;
        case MethodKind::CollocationCubicPP: block = collocation_cubic_block(k, grid, method); break;
        case MethodKind::GalerkinPC: block = galerkin_pc_block(k, grid, method); break;
        case MethodKind::Nystrom: break;
      }
      m.block(i1 * dn, i2 * dn, dn, dn) = block;
    }
  }
  return m;
}

int count_sign_changes(const Eigen::VectorXd& v, const OrthantCone& cone, double tol_sign) {
  const int d = cone.dim();
  if (v.size() == 0 || v.size() % d != 0) throw std::invalid_argument("count_sign_changes: length is not a multiple of d");
  const Eigen::Index dn = v.size() / d;
  const double scale = v.cwiseAbs().maxCoeff();
  int count = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (cone.sign(static_cast<int>(i / dn)) * v[i] < -tol_sign * scale) ++count;
  }
  return count;
}

EigenReport run_eigen(const MethodSpec& method, const MatrixKernel& kernel, double a, double b, double tol,
                      std::optional<OrthantCone> cone, std::optional<double> exact) {
  validate(method, a, b);
  const int d = kernel.dim();
  const OrthantCone k_cone = cone ? *cone : OrthantCone::positive(d);
  if (k_cone.dim() != d) throw std::invalid_argument("run_eigen: cone/kernel dimension mismatch");

  EigenReport report;
  report.method = method;
  report.abscissae = method_abscissae(method, a, b);

  Eigen::MatrixXd m;
  bool positive = true;
  if (method.kind == MethodKind::Nystrom) {
    const NystromOperator op = assemble_nystrom(kernel, nystrom_rule(method, a, b));
    positive = discrete_positivity_check(op, k_cone).passes;
    m = op.matrix;
  } else {
    m = assemble_eigen_matrix(method, kernel, a, b);
    const std::vector<double> grid = uniform_grid(a, b, method.n);
    SigmaAudit audit;
    switch (method.kind) {
      case MethodKind::CollocationHat: audit = positivity_audit(hat_scheme(grid), kAuditSamples, kAuditTol); break;
      case MethodKind::CollocationLagrange: audit = positivity_audit(lagrange_scheme(grid), kAuditSamples, kAuditTol); break;
      case MethodKind::CollocationCubicPP: {
        Basis blend = Basis::cubic_blend(grid);
        const int count = blend.count();
        audit = positivity_audit(SigmaFunctions{std::move(blend), Eigen::MatrixXd::Identity(count, count)},
                                 kAuditSamples, kAuditTol);
        break;
      }
      case MethodKind::GalerkinPC: audit = positivity_audit(pc_galerkin_scheme(grid), kAuditSamples, kAuditTol); break;
      case MethodKind::Nystrom: break;
    }
    const KernelAudit kaudit = kernel_positivity_audit(kernel, k_cone, grid, grid);
    positive = audit.passes && kaudit.cls != PositivityClass::NotPositive;
  }
  report.positivity_pass = positive;

  PowerIterationOptions options;
  options.tol = tol;
  const EigenPair pair = dominant_eigenpair(m, options);
  report.lambda_hat = pair.value;
  report.iterations = pair.iterations;
  report.residual = pair.residual;

  Eigen::VectorXd v = pair.vector;
  const Eigen::Index dn = v.size() / d;
  Eigen::Index arg = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > best) {
      best = std::abs(v[i]);
      arg = i;
    }
  }
  if (best > 0.0) v /= k_cone.sign(static_cast<int>(arg / dn)) * v[arg];
  report.eigvec = std::move(v);
  report.sign_changes = count_sign_changes(report.eigvec, k_cone);
  if (exact) report.error_vs_exact = std::abs(report.lambda_hat - *exact);
  return report;
}

ConvergenceStudy convergence_study(const MethodSpec& method, const MatrixKernel& kernel, double a, double b,
                                   double exact_lambda, std::span<const int> n_list, double tol,
                                   std::optional<OrthantCone> cone) {
  if (n_list.size() < 3) throw std::invalid_argument("convergence_study: need at least 3 values of n");
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (!(n_list[i] > n_list[i - 1])) throw std::invalid_argument("convergence_study: n_list must be strictly ascending");
  }
  ConvergenceStudy study;
  std::vector<double> inv_n;
  std::vector<double> errors;
  for (const int n : n_list) {
    MethodSpec row_method = method;
    row_method.n = n;
    ConvergenceRow row;
    row.n = n;
    try {
      row.report = run_eigen(row_method, kernel, a, b, tol, cone, exact_lambda);
      row.error = *row.report->error_vs_exact;
      inv_n.push_back(1.0 / n);
      errors.push_back(row.error);
    } catch (const NonConvergenceError& e) {
      row.error = std::numeric_limits<double>::quiet_NaN();
      row.failure = e.what();
      row.last_estimate = e.last_estimate();
    }
    study.rows.push_back(std::move(row));
  }
  try {
    study.slope = fit_log_slope(inv_n, errors);
  } catch (const std::runtime_error&) {
    study.slope.reset();
  }
  return study;
}

}  // namespace posfred
