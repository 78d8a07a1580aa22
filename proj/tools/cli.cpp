#include "cli.hpp"

#include "posfred/eigen_study.hpp"
#include "posfred/kernels.hpp"
#include "posfred/projection.hpp"
#include "posfred/quadrature.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace fredholm_cli {

namespace {

using nlohmann::ordered_json;
using namespace posfred;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) throw UsageError(std::string(what) + ": '" + item + "' is not an integer");
    values.push_back(v);
  }
  if (values.size() < 3) throw UsageError(std::string(what) + ": need at least 3 values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 1) throw UsageError(std::string(what) + ": values must be positive");
    if (i > 0 && values[i] <= values[i - 1]) throw UsageError(std::string(what) + ": values must be strictly ascending");
  }
  return values;
}

// key=value lines of a --config file become trailing "--key value" pairs, so
// they win over earlier flags under the TakeLast policy.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config requires a path");
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  std::vector<std::string> expanded = args;
  if (!path) return expanded;
  std::ifstream in(*path);
  if (!in) throw UsageError("cannot read config file " + *path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(*path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    while (!key.empty() && key[0] == '-') key.erase(0, 1);
    if (key.empty() || key == "config") throw UsageError(*path + ":" + std::to_string(lineno) + ": invalid key");
    expanded.push_back("--" + key);
    expanded.push_back(value);
  }
  return expanded;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

struct Output {
  std::string data;     // main artifact (CSV or JSON)
  std::string summary;  // human-readable lines for stdout
  std::vector<std::pair<std::string, std::string>> extra_files;
};

// ---- quad ---------------------------------------------------------------

struct QuadOptions {
  std::string rule;
  std::string fn = "exp";
  double a = 0.0;
  double b = 1.0;
  std::string n_list = "4,8,16,32,64";
};

Output run_quad(const QuadOptions& o, bool json) {
  const RuleFamily family = *parse_rule_family(o.rule);
  require(std::isfinite(o.a) && std::isfinite(o.b) && o.a < o.b, "quad: requires finite a < b");
  const std::vector<int> ns = parse_int_list(o.n_list, "--n-list");

  std::function<double(double)> f;
  double exact = 0.0;
  if (o.fn == "exp") {
    f = [](double x) { return std::exp(x); };
    exact = std::exp(o.b) - std::exp(o.a);
  } else if (o.fn == "sin") {
    f = [](double x) { return std::sin(x); };
    exact = std::cos(o.a) - std::cos(o.b);
  } else {
    f = [](double x) { return 1.0 / (1.0 + 25.0 * x * x); };
    exact = (std::atan(5.0 * o.b) - std::atan(5.0 * o.a)) / 5.0;
  }

  std::vector<double> hs;
  std::vector<double> errors;
  for (const int n : ns) {
    const QuadratureRule rule = build_rule(family, o.a, o.b, n);
    hs.push_back(rule.h());
    errors.push_back(std::abs(integrate(rule, f) - exact));
  }
  std::optional<double> slope;
  try {
    slope = fit_log_slope(hs, errors);
  } catch (const std::runtime_error&) {
  }

  Output out;
  out.summary = "rule=" + o.rule + " fn=" + o.fn + " slope=" + (slope ? fmt(*slope) : std::string("saturated")) + "\n";
  if (json) {
    ordered_json j;
    j["command"] = "quad";
    j["rule"] = o.rule;
    j["fn"] = o.fn;
    j["a"] = o.a;
    j["b"] = o.b;
    j["exact"] = exact;
    j["rows"] = ordered_json::array();
    for (std::size_t i = 0; i < ns.size(); ++i) {
      j["rows"].push_back({{"n", ns[i]}, {"h", hs[i]}, {"error", num(errors[i])}});
    }
    j["slope"] = slope ? num(*slope) : ordered_json(nullptr);
    out.data = j.dump(2) + "\n";
  } else {
    std::string csv = "n,h,error\n";
    for (std::size_t i = 0; i < ns.size(); ++i) {
      csv += std::to_string(ns[i]) + "," + fmt(hs[i]) + "," + fmt(errors[i]) + "\n";
    }
    out.data = csv;
  }
  return out;
}

// ---- audit --------------------------------------------------------------

struct AuditOptions {
  std::string scheme;
  int n = 20;
  int samples = 2000;
  double a = -1.0;
  double b = 1.0;
  double tol = 1e-12;
  double delta = 1.0;
  double alpha = 1.0;
};

Output run_audit(const AuditOptions& o, bool json) {
  require(std::isfinite(o.a) && std::isfinite(o.b) && o.a < o.b, "audit: requires finite a < b");
  require(o.samples >= 2, "audit: --samples must be >= 2");
  require(o.tol >= 0.0, "audit: --tol must be nonnegative");
  if (o.scheme == "quad-bspline") require(o.n >= 3, "audit: quad-bspline needs n >= 3");
  else if (o.scheme == "pl-galerkin") require(o.n >= 2, "audit: pl-galerkin needs n >= 2");
  else require(o.n >= 1, "audit: --n must be >= 1");
  if (o.scheme == "sinc") {
    require(o.delta > 0.0 && o.delta < std::acos(-1.0), "audit: --delta must lie in (0, pi)");
    require(o.alpha > 0.0, "audit: --alpha must be positive");
  }

  std::optional<SigmaFunctions> sigma;
  Eigen::MatrixXd inverse;
  if (o.scheme == "hat") {
    const CollocationScheme s = hat_scheme(uniform_grid(o.a, o.b, o.n));
    sigma = sigma_functions(s);
    inverse = s.P_inv;
  } else if (o.scheme == "lagrange") {
    const CollocationScheme s = lagrange_scheme(uniform_grid(o.a, o.b, o.n));
    sigma = sigma_functions(s);
    inverse = s.P_inv;
  } else if (o.scheme == "quad-bspline") {
    const CollocationScheme s = quad_bspline_scheme(o.a, o.b, o.n);
    sigma = sigma_functions(s);
    inverse = s.P_inv;
  } else if (o.scheme == "sinc") {
    const CollocationScheme s = sinc_scheme(o.a, o.b, o.n, o.delta, o.alpha);
    sigma = sigma_functions(s);
    inverse = s.P_inv;
  } else {
    const GalerkinScheme s = pl_galerkin_scheme(uniform_grid(o.a, o.b, o.n));
    sigma = sigma_functions(s);
    inverse = s.gramian_inv;
  }
  const SigmaAudit audit = positivity_audit(*sigma, o.samples, o.tol);

  Output out;
  out.summary = "scheme=" + o.scheme + " n=" + std::to_string(o.n) + " min_value=" + fmt(audit.min_value) +
                " argmin=" + fmt(audit.argmin) + " passes=" + (audit.passes ? "true" : "false") +
                " inverse_min=" + fmt(inverse.minCoeff()) + " inverse_max=" + fmt(inverse.maxCoeff()) + "\n";

  const int d = sigma->count();
  const auto x_at = [&](int k) { return k == o.samples - 1 ? o.b : o.a + k * (o.b - o.a) / (o.samples - 1); };
  if (json) {
    ordered_json j;
    j["command"] = "audit";
    j["scheme"] = o.scheme;
    j["n"] = o.n;
    j["samples"] = o.samples;
    j["tol"] = o.tol;
    j["min_value"] = num(audit.min_value);
    j["argmin"] = audit.argmin;
    j["min_index"] = audit.min_index + 1;
    j["passes"] = audit.passes;
    j["inverse_min"] = inverse.minCoeff();
    j["inverse_max"] = inverse.maxCoeff();
    j["x"] = ordered_json::array();
    j["sigma"] = ordered_json::array();
    for (int k = 0; k < o.samples; ++k) {
      const double x = x_at(k);
      const Eigen::VectorXd s = sigma->eval_all(x);
      j["x"].push_back(x);
      ordered_json row = ordered_json::array();
      for (int i = 0; i < d; ++i) row.push_back(num(s[i]));
      j["sigma"].push_back(std::move(row));
    }
    out.data = j.dump(2) + "\n";
  } else {
    std::string csv = "x";
    for (int i = 1; i <= d; ++i) csv += ",sigma_" + std::to_string(i);
    csv += "\n";
    for (int k = 0; k < o.samples; ++k) {
      const double x = x_at(k);
      const Eigen::VectorXd s = sigma->eval_all(x);
      csv += fmt(x);
      for (int i = 0; i < d; ++i) csv += "," + fmt(s[i]);
      csv += "\n";
    }
    out.data = csv;
  }
  return out;
}

// ---- eigen --------------------------------------------------------------

struct EigenOptions {
  std::string method;
  std::string kernel;
  double alpha = 1.0;
  double alpha2 = 2.0;
  std::optional<double> kernel_value;
  double a = -1.0;
  double b = 1.0;
  std::optional<double> L;
  std::optional<int> n;
  std::optional<std::string> n_list;
  std::optional<double> exact;
  double tol = 1e-10;
  std::string inner_rule = "midpoint";
  int inner_factor = 4;
  std::optional<std::string> dump;
};

struct EigenRow {
  int n = 0;
  std::optional<EigenReport> report;
  std::optional<double> last_estimate;
};

Output run_eigen_command(const EigenOptions& o, bool json) {
  std::optional<MethodSpec> parsed = parse_method(o.method);
  require(parsed.has_value(), "eigen: unknown --method " + o.method);
  MethodSpec method = *parsed;
  method.inner_rule = *parse_rule_family(o.inner_rule);
  method.inner_factor = o.inner_factor;
  require(o.inner_factor >= 1, "eigen: --inner-factor must be >= 1");

  double a = o.a;
  double b = o.b;
  if (o.L) {
    require(*o.L > 0.0 && std::isfinite(*o.L), "eigen: --L must be positive");
    a = -0.5 * *o.L;
    b = 0.5 * *o.L;
  }
  require(std::isfinite(a) && std::isfinite(b) && a < b, "eigen: requires finite a < b");
  require(o.alpha > 0.0 && std::isfinite(o.alpha), "eigen: --alpha must be positive");
  require(o.alpha2 > 0.0 && std::isfinite(o.alpha2), "eigen: --alpha2 must be positive");
  require(o.tol > 0.0, "eigen: --tol must be positive");
  require(o.n.has_value() != o.n_list.has_value(), "eigen: give exactly one of --n and --n-list");
  require(!(o.dump && o.n_list), "eigen: --dump needs a single --n");
  if (o.exact) require(std::isfinite(*o.exact), "eigen: --exact must be finite");

  std::vector<int> ns;
  if (o.n) ns.push_back(*o.n);
  else ns = parse_int_list(*o.n_list, "--n-list");
  for (const int n : ns) {
    MethodSpec m = method;
    m.n = n;
    if (m.kind == MethodKind::Nystrom) {
      try {
        (void)nystrom_rule(m, a, b);
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("eigen: ") + e.what());
      }
    } else {
      require(n >= 2, "eigen: projection methods need n >= 2");
    }
  }

  std::optional<MatrixKernel> kernel;
  std::optional<OrthantCone> cone;
  std::optional<double> exact = o.exact;
  const double length = b - a;
  if (o.kernel == "laplace-system") {
    kernel = laplace_system_kernel(o.alpha, o.alpha2);
    cone = south_east_cone();
    if (!exact) {
      exact = std::max(exact_laplace_dominant(length, o.alpha).lambda, exact_laplace_dominant(length, o.alpha2).lambda);
    }
  } else if (o.kernel == "constant") {
    const double v = o.kernel_value.value_or(1.0 / length);
    require(std::isfinite(v), "eigen: --kernel-value must be finite");
    kernel = MatrixKernel(make_constant_kernel(v));
    if (!exact) exact = v * length;
  } else {
    const DispersalFamily family = *parse_dispersal_family(o.kernel);
    kernel = MatrixKernel(make_dispersal(family, o.alpha));
    if (family == DispersalFamily::Laplace && !exact) exact = exact_laplace_dominant(length, o.alpha).lambda;
  }

  std::vector<EigenRow> rows;
  for (const int n : ns) {
    MethodSpec m = method;
    m.n = n;
    EigenRow row;
    row.n = n;
    try {
      row.report = run_eigen(m, *kernel, a, b, o.tol, cone, exact);
    } catch (const NonConvergenceError& e) {
      row.last_estimate = e.last_estimate();
    }
    rows.push_back(std::move(row));
  }

  std::optional<double> slope;
  if (ns.size() >= 3 && exact) {
    std::vector<double> inv_n;
    std::vector<double> errors;
    for (const EigenRow& r : rows) {
      if (!r.report) continue;
      inv_n.push_back(1.0 / r.n);
      errors.push_back(*r.report->error_vs_exact);
    }
    try {
      slope = fit_log_slope(inv_n, errors);
    } catch (const std::runtime_error&) {
    }
  }

  Output out;
  const std::string name = method_name(method);
  for (const EigenRow& r : rows) {
    out.summary += "method=" + name + " n=" + std::to_string(r.n);
    if (r.report) {
      out.summary += " lambda_hat=" + fmt(r.report->lambda_hat) +
                     " error=" + (r.report->error_vs_exact ? fmt(*r.report->error_vs_exact) : std::string("nan")) +
                     " sign_changes=" + std::to_string(r.report->sign_changes) +
                     " positivity_pass=" + (r.report->positivity_pass ? "true" : "false") + "\n";
    } else {
      out.summary += " status=no-convergence last_estimate=" + fmt(r.last_estimate.value_or(NAN)) + "\n";
    }
  }
  if (o.n_list) out.summary += "slope=" + (slope ? fmt(*slope) : std::string("unavailable")) + "\n";

  if (json) {
    ordered_json j;
    j["command"] = "eigen";
    j["method"] = name;
    j["kernel"] = o.kernel;
    j["alpha"] = o.alpha;
    if (o.kernel == "laplace-system") j["alpha2"] = o.alpha2;
    j["a"] = a;
    j["b"] = b;
    j["exact"] = exact ? num(*exact) : ordered_json(nullptr);
    j["rows"] = ordered_json::array();
    for (const EigenRow& r : rows) {
      ordered_json row;
      row["n"] = r.n;
      if (r.report) {
        row["lambda_hat"] = num(r.report->lambda_hat);
        row["error"] = r.report->error_vs_exact ? num(*r.report->error_vs_exact) : ordered_json(nullptr);
        row["sign_changes"] = r.report->sign_changes;
        row["positivity_pass"] = r.report->positivity_pass;
        row["status"] = "ok";
      } else {
        row["lambda_hat"] = nullptr;
        row["error"] = nullptr;
        row["sign_changes"] = nullptr;
        row["positivity_pass"] = nullptr;
        row["status"] = "no-convergence";
        row["last_estimate"] = num(r.last_estimate.value_or(NAN));
      }
      j["rows"].push_back(std::move(row));
    }
    j["slope"] = slope ? num(*slope) : ordered_json(nullptr);
    out.data = j.dump(2) + "\n";
  } else {
    std::string csv = "method,n,lambda_hat,error,sign_changes,positivity_pass,status\n";
    for (const EigenRow& r : rows) {
      csv += name + "," + std::to_string(r.n) + ",";
      if (r.report) {
        csv += fmt(r.report->lambda_hat) + "," +
               (r.report->error_vs_exact ? fmt(*r.report->error_vs_exact) : std::string("nan")) + "," +
               std::to_string(r.report->sign_changes) + "," + (r.report->positivity_pass ? "true" : "false") + ",ok\n";
      } else {
        csv += "nan,nan,,,no-convergence\n";
      }
    }
    out.data = csv;
  }

  if (o.dump && rows.front().report) {
    const EigenReport& rep = *rows.front().report;
    const int d = kernel->dim();
    const auto dn = static_cast<Eigen::Index>(rep.abscissae.size());
    std::string csv = "x";
    for (int i = 1; i <= d; ++i) csv += ",u_" + std::to_string(i);
    csv += "\n";
    for (Eigen::Index j = 0; j < dn; ++j) {
      csv += fmt(rep.abscissae[static_cast<std::size_t>(j)]);
      for (int i = 0; i < d; ++i) csv += "," + fmt(rep.eigvec[i * dn + j]);
      csv += "\n";
    }
    out.extra_files.emplace_back(*o.dump, std::move(csv));
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw std::runtime_error("failed writing " + path);
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Positivity-preserving discretizations of Fredholm integral operators", "fredholm"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  std::string format = "csv";
  std::string out_path;
  std::string config_path;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Output file (default: standard output)");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--config", config_path, "key=value file; its entries override flags");
  };

  QuadOptions quad;
  CLI::App* quad_cmd = app.add_subcommand("quad", "Empirical order of a composite quadrature rule");
  quad_cmd->add_option("--rule", quad.rule, "midpoint|trapezoid|milne|gauss6")
      ->required()
      ->check(CLI::IsMember({"midpoint", "trapezoid", "milne", "gauss6"}));
  quad_cmd->add_option("--fn", quad.fn, "Integrand")->check(CLI::IsMember({"exp", "sin", "runge"}));
  quad_cmd->add_option("--a", quad.a, "Left endpoint");
  quad_cmd->add_option("--b", quad.b, "Right endpoint");
  quad_cmd->add_option("--n-list", quad.n_list, "Comma-separated subinterval counts");
  add_common(quad_cmd);

  AuditOptions audit;
  CLI::App* audit_cmd = app.add_subcommand("audit", "Sampled minimum of the sigma functions of a scheme");
  audit_cmd->add_option("--scheme", audit.scheme, "hat|lagrange|quad-bspline|sinc|pl-galerkin")
      ->required()
      ->check(CLI::IsMember({"hat", "lagrange", "quad-bspline", "sinc", "pl-galerkin"}));
  audit_cmd->add_option("--n", audit.n, "Number of cells (sinc: half-width of the index range)");
  audit_cmd->add_option("--samples", audit.samples, "Uniform sample points including endpoints");
  audit_cmd->add_option("--a", audit.a, "Left endpoint");
  audit_cmd->add_option("--b", audit.b, "Right endpoint");
  audit_cmd->add_option("--tol", audit.tol, "Audit passes when min sigma >= -tol");
  audit_cmd->add_option("--delta", audit.delta, "Sinc: strip half-width in (0, pi)");
  audit_cmd->add_option("--alpha", audit.alpha, "Sinc: decay rate");
  add_common(audit_cmd);

  EigenOptions eig;
  double l_value = 0.0;
  int n_value = 0;
  std::string n_list_value;
  double exact_value = 0.0;
  double kernel_value = 0.0;
  std::string dump_value;
  CLI::App* eigen_cmd = app.add_subcommand("eigen", "Dominant eigenvalue of a discretized integral operator");
  eigen_cmd
      ->add_option("--method", eig.method,
                   "nystrom-{midpoint,trapezoid,milne,gauss6}|collocation-hat|collocation-lagrange|"
                   "collocation-cubic|galerkin-pc")
      ->required();
  eigen_cmd->add_option("--kernel", eig.kernel, "gauss|cauchy|laplace|expsqrt|tophat|tent|laplace-system|constant")
      ->required()
      ->check(CLI::IsMember({"gauss", "cauchy", "laplace", "expsqrt", "tophat", "tent", "laplace-system", "constant"}));
  eigen_cmd->add_option("--alpha", eig.alpha, "Dispersal rate");
  eigen_cmd->add_option("--alpha2", eig.alpha2, "Second rate of laplace-system");
  CLI::Option* kv_opt = eigen_cmd->add_option("--kernel-value", kernel_value, "Value of the constant kernel (default 1/(b-a))");
  CLI::Option* a_opt = eigen_cmd->add_option("--a", eig.a, "Left endpoint");
  CLI::Option* b_opt = eigen_cmd->add_option("--b", eig.b, "Right endpoint");
  CLI::Option* l_opt = eigen_cmd->add_option("--L", l_value, "Interval length; sets [a, b] = [-L/2, L/2]");
  l_opt->excludes(a_opt)->excludes(b_opt);
  CLI::Option* n_opt = eigen_cmd->add_option("--n", n_value, "Nodes (Nystrom) or grid cells (projection)");
  CLI::Option* nl_opt = eigen_cmd->add_option("--n-list", n_list_value, "Comma-separated values of n");
  CLI::Option* exact_opt = eigen_cmd->add_option("--exact", exact_value, "Reference eigenvalue");
  eigen_cmd->add_option("--tol", eig.tol, "Power iteration tolerance");
  eigen_cmd->add_option("--inner-rule", eig.inner_rule, "Rule for inner integrals")
      ->check(CLI::IsMember({"midpoint", "trapezoid", "milne", "gauss6"}));
  eigen_cmd->add_option("--inner-factor", eig.inner_factor, "Inner sub-cells per grid cell");
  CLI::Option* dump_opt = eigen_cmd->add_option("--dump", dump_value, "Write the eigenvector (x, u_1..u_d) as CSV");
  add_common(eigen_cmd);

  try {
    const std::vector<std::string> args = expand_config(raw_args);
    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("fredholm");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const std::string& s : storage) argv.push_back(s.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  const bool json = format == "json";
  Output result;
  try {
    if (quad_cmd->parsed()) {
      result = run_quad(quad, json);
    } else if (audit_cmd->parsed()) {
      result = run_audit(audit, json);
    } else {
      if (*l_opt) eig.L = l_value;
      if (*n_opt) eig.n = n_value;
      if (*nl_opt) eig.n_list = n_list_value;
      if (*exact_opt) eig.exact = exact_value;
      if (*kv_opt) eig.kernel_value = kernel_value;
      if (*dump_opt) eig.dump = dump_value;
      result = run_eigen_command(eig, json);
    }
  } catch (const UsageError& e) {
    CLI::App* sub = quad_cmd->parsed() ? quad_cmd : audit_cmd->parsed() ? audit_cmd : eigen_cmd;
    err << "error: " << e.what() << "\n\n" << sub->help();
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << "\n";
    return kRuntime;
  }

  try {
    if (out_path.empty()) {
      out << result.data;
    } else {
      write_file(out_path, result.data);
    }
    for (const auto& [path, content] : result.extra_files) write_file(path, content);
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << "\n";
    return kRuntime;
  }
  out << result.summary;
  return kOk;
}

}  // namespace fredholm_cli
