// Acceptance checks. Prints one PASS/FAIL line per criterion; with an
// argument N only criterion N runs. Exit status is nonzero on any failure.

#include "oracles.hpp"
#include "posfred/cone.hpp"
#include "posfred/eigen_study.hpp"
#include "posfred/kernels.hpp"
#include "posfred/linalg.hpp"
#include "posfred/projection.hpp"
#include "posfred/quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <string>
#include <vector>

using namespace posfred;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------

Verdict criterion1() {
  Verdict v;
  const double l1 = exact_laplace_dominant(2.0, 1.0).lambda;
  const double l2 = exact_laplace_dominant(2.0, 2.0).lambda;
  v.require(std::abs(l1 - 0.5746552163364324) <= 1e-12, "alpha=1 gives " + num(l1));
  v.require(std::abs(l2 - 0.3694054047082261) <= 1e-12, "alpha=2 gives " + num(l2));
  v.detail = v.pass ? "lambda(2,1)=" + num(l1) + " lambda(2,2)=" + num(l2) : v.detail;
  return v;
}

Verdict criterion2() {
  Verdict v;
  const auto f = [](double x) { return std::exp(x); };
  const double exact = std::exp(1.0) - 1.0;
  const std::vector<int> ns{4, 8, 16, 32, 64};
  const struct {
    RuleFamily rule;
    double target;
    double tol;
  } cases[] = {{RuleFamily::Midpoint, 2, 0.3}, {RuleFamily::Trapezoid, 2, 0.3}, {RuleFamily::Milne, 4, 0.3},
               {RuleFamily::Gauss6, 6, 0.4}};
  std::string slopes;
  for (const auto& c : cases) {
    try {
      const double s = estimate_order(c.rule, f, exact, 0, 1, ns);
      slopes += std::string(to_string(c.rule)) + "=" + num(s) + " ";
      v.require(std::abs(s - c.target) <= c.tol, std::string(to_string(c.rule)) + " slope " + num(s));
    } catch (const std::exception& e) {
      v.require(false, std::string(to_string(c.rule)) + ": " + e.what());
    }
  }
  if (v.pass) v.detail = slopes;
  return v;
}

Verdict criterion3() {
  Verdict v;
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<std::size_t> size(2, 50);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = size(rng);
    const oracle::RandomTridiagonal r = oracle::random_dominant_tridiagonal(rng, n);
    oracle::Dense dense(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      dense[i][i] = r.diag[i];
      if (i + 1 < n) {
        dense[i][i + 1] = r.super[i];
        dense[i + 1][i] = r.sub[i];
      }
    }
    const oracle::Dense ref = oracle::gauss_jordan_inverse(dense);
    const Eigen::MatrixXd inv = tridiag_inverse(Tridiagonal(r.diag, r.super, r.sub));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        worst = std::max(worst, std::abs(inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - ref[i][j]));
      }
    }
  }
  v.require(worst <= 1e-10, "max deviation " + num(worst));
  if (v.pass) v.detail = "max deviation " + num(worst);
  return v;
}

Verdict criterion4() {
  Verdict v;
  for (int n : {5, 20, 50}) {
    const SigmaAudit a = positivity_audit(hat_scheme(uniform_grid(-1, 1, n)), 2000, 0.0);
    v.require(a.min_value >= 0.0, "hat n=" + std::to_string(n) + " min sigma " + num(a.min_value));
  }
  for (int n = 3; n <= 50; ++n) {
    const CollocationScheme s = quad_bspline_scheme(-1, 1, n);
    v.require(s.P_inv(1, 0) + s.P_inv(2, 0) < 0.0, "B-spline inverse sign at n=" + std::to_string(n));
  }
  const SigmaAudit bs = positivity_audit(quad_bspline_scheme(-1, 1, 20), 2000, 0.0);
  v.require(bs.min_value < 0.0, "B-spline min sigma " + num(bs.min_value));
  const CollocationScheme sinc = sinc_scheme(-1, 1, 10, 1.0, 1.0);
  v.require(sinc.P_inv.minCoeff() < 0.0, "sinc inverse has no negative entry");
  for (int n = 2; n <= 50; ++n) {
    const GalerkinScheme g = pl_galerkin_scheme(uniform_grid(-1, 1, n));
    v.require(g.gramian_inv(1, 0) < 0.0, "Gramian inverse sign at n=" + std::to_string(n));
  }
  if (v.pass) v.detail = "B-spline min sigma " + num(bs.min_value) + ", sinc min inverse " + num(sinc.P_inv.minCoeff());
  return v;
}

Verdict criterion5() {
  Verdict v;
  const MatrixKernel g(make_dispersal(DispersalFamily::Gauss, 0.01));
  const auto run = [&](RuleFamily rule, int n) {
    MethodSpec m;
    m.rule = rule;
    m.n = n;
    return run_eigen(m, g, -1, 1);
  };
  std::string counts;
  for (RuleFamily rule : {RuleFamily::Trapezoid, RuleFamily::Gauss6}) {
    const EigenReport r = run(rule, 90);
    const std::string name(to_string(rule));
    counts += name + "90=" + std::to_string(r.sign_changes) + " ";
    v.require(r.sign_changes == 0, name + " 90 has " + std::to_string(r.sign_changes) + " sign changes");
    v.require(r.lambda_hat > 0.0, name + " 90 eigenvalue " + num(r.lambda_hat));
  }
  for (int n : {45, 90}) {
    const EigenReport r = run(RuleFamily::Milne, n);
    counts += "milne" + std::to_string(n) + "=" + std::to_string(r.sign_changes) + " ";
    v.require(r.sign_changes > 0, "milne " + std::to_string(n) + " has no sign changes");
  }
  const EigenReport m150 = run(RuleFamily::Milne, 150);
  counts += "milne150=" + std::to_string(m150.sign_changes);
  v.require(m150.sign_changes == 0, "milne 150 has " + std::to_string(m150.sign_changes) + " sign changes");
  if (v.pass) v.detail = counts;
  return v;
}

Verdict criterion6() {
  Verdict v;
  const MatrixKernel k(make_dispersal(DispersalFamily::Laplace, 1.0));
  const double exact = exact_laplace_dominant(2.0, 1.0).lambda;
  const std::vector<int> ns{10, 20, 40, 80};
  const struct {
    MethodKind kind;
    const char* name;
    double target;
  } cases[] = {{MethodKind::CollocationHat, "hat", 2.0},
               {MethodKind::GalerkinPC, "galerkin-pc", 2.0},
               {MethodKind::CollocationCubicPP, "cubic", 1.0}};
  std::string slopes;
  for (const auto& c : cases) {
    MethodSpec m;
    m.kind = c.kind;
    const ConvergenceStudy s = convergence_study(m, k, -1, 1, exact, ns);
    if (!s.slope) {
      v.require(false, std::string(c.name) + " has no slope");
      continue;
    }
    slopes += std::string(c.name) + "=" + num(*s.slope) + " ";
    v.require(std::abs(*s.slope - c.target) <= 0.3, std::string(c.name) + " slope " + num(*s.slope));
  }

  MethodSpec lag;
  lag.kind = MethodKind::CollocationLagrange;
  const std::vector<int> lag_ns{10, 20, 30, 35, 40, 45, 50};
  const ConvergenceStudy s = convergence_study(lag, k, -1, 1, exact, lag_ns);
  const double e10 = s.rows[0].error;
  const double e20 = s.rows[1].error;
  v.require(e10 < 1e-3, "lagrange n=10 error " + num(e10));
  v.require(e20 < 1e-3, "lagrange n=20 error " + num(e20));
  // Instability: some n >= 30 whose error (or, when the solver gave up, the
  // distance of its last estimate) is at least ten times the n=20 error.
  int unstable_n = 0;
  for (const ConvergenceRow& row : s.rows) {
    if (row.n < 30) continue;
    const double dev = row.report ? row.error : (row.last_estimate ? std::abs(*row.last_estimate - exact) : INFINITY);
    if (dev >= 10.0 * e20) {
      unstable_n = row.n;
      break;
    }
  }
  v.require(unstable_n > 0, "no lagrange instability detected");
  if (v.pass) v.detail = slopes + "lagrange unstable at n=" + std::to_string(unstable_n);
  return v;
}

Verdict criterion7() {
  Verdict v;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_real_distribution<double> pos(0, 1);

  // Cone axioms for orthant cones in R^3.
  const OrthantCone cone({1, -1, 1});
  const Eigen::MatrixXd s = cone.sign_matrix();
  for (int t = 0; t < 1000; ++t) {
    Eigen::VectorXd x(3);
    Eigen::VectorXd y(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = pos(rng);
      y[i] = pos(rng);
    }
    x = s * x;
    y = s * y;
    const double c = pos(rng) * 10.0;
    v.require(cone_contains(cone, x + y) && cone_contains(cone, c * x), "cone not closed under + and scaling");
    if (!x.isZero(0.0)) v.require(!cone_contains(cone, -x), "cone meets its negative");
    v.require(cone_relate(cone, x, x + y) != OrderRelation::None, "order not compatible with addition");
  }

  // Positive matrices preserve the cone.
  for (int t = 0; t < 1000; ++t) {
    Eigen::MatrixXd m(3, 3);
    for (int i = 0; i < 9; ++i) m.data()[i] = pos(rng);
    m = s * m * s;
    v.require(matrix_positivity_class(cone, m, false) != PositivityClass::NotPositive, "random positive matrix rejected");
    Eigen::VectorXd x(3);
    for (int i = 0; i < 3; ++i) x[i] = pos(rng);
    v.require(cone_contains(cone, m * (s * x), 1e-14), "positive matrix leaves the cone");
  }

  // Partition of unity.
  const std::vector<double> samples = [] {
    std::vector<double> xs;
    for (int i = 0; i <= 500; ++i) xs.push_back(-1.0 + 2.0 * i / 500);
    return xs;
  }();
  for (const Basis& b : {hat_basis(uniform_grid(-1, 1, 17)), lagrange_basis(uniform_grid(-1, 1, 8)),
                         Basis::quad_bspline(-1, 1, 12), Basis::cubic_blend(uniform_grid(-1, 1, 9))}) {
    double worst = 0;
    for (double x : samples) worst = std::max(worst, std::abs(b.eval_all(x).sum() - 1.0));
    v.require(worst <= 1e-12, std::string(to_string(b.family())) + " partition of unity off by " + num(worst));
  }

  // Projection idempotence.
  for (const CollocationScheme& sc :
       {hat_scheme(uniform_grid(-1, 1, 12)), quad_bspline_scheme(-1, 1, 12), sinc_scheme(-1, 1, 5, 1.0, 1.0)}) {
    std::vector<double> data(sc.points.size());
    for (double& d : data) d = u(rng);
    const BasisExpansion once = collocation_project(sc, data);
    std::vector<double> again(data.size());
    for (std::size_t i = 0; i < again.size(); ++i) again[i] = once(sc.points[i]);
    const BasisExpansion twice = collocation_project(sc, again);
    double worst = 0;
    for (double x : samples) worst = std::max(worst, std::abs(once(x) - twice(x)));
    v.require(worst <= 1e-10, std::string(to_string(sc.basis.family())) + " projection not idempotent: " + num(worst));
  }
  {
    const GalerkinScheme g = pc_galerkin_scheme(uniform_grid(-1, 1, 9));
    const BasisExpansion once = pc_galerkin_project(g, [](double x) { return std::cos(3 * x); });
    const BasisExpansion twice = pc_galerkin_project(g, [&](double x) { return once(x); });
    double worst = 0;
    for (double x : samples) worst = std::max(worst, std::abs(once(x) - twice(x)));
    v.require(worst <= 1e-10, "galerkin projection not idempotent: " + num(worst));
  }

  // Cubic interpolant bound on random continuous functions.
  const std::vector<double> grid = uniform_grid(-1, 1, 20);
  for (int t = 0; t < 100; ++t) {
    const double c0 = u(rng), c1 = u(rng), c2 = u(rng), w1 = 1 + 10 * pos(rng), w2 = 1 + 10 * pos(rng);
    const auto f = [=](double x) { return c0 + c1 * std::sin(w1 * x) + c2 * std::cos(w2 * x * x); };
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = f(grid[i]);
    const CubicPPInterpolant pu(grid, vals);
    double pu_max = 0;
    double u_max = 0;
    for (double x : samples) {
      pu_max = std::max(pu_max, std::abs(pu(x)));
      u_max = std::max(u_max, std::abs(f(x)));
    }
    v.require(pu_max <= 2.0 * u_max, "cubic operator bound violated");
  }

  // Rank-one kernel k = 1 / (b - a): every method should return 1.
  const MatrixKernel rank1(make_constant_kernel(0.5));
  const std::vector<MethodSpec> methods = [] {
    std::vector<MethodSpec> ms;
    for (RuleFamily r : {RuleFamily::Midpoint, RuleFamily::Trapezoid, RuleFamily::Milne, RuleFamily::Gauss6}) {
      MethodSpec m;
      m.rule = r;
      m.n = 12;
      ms.push_back(m);
    }
    for (MethodKind k : {MethodKind::CollocationHat, MethodKind::CollocationLagrange, MethodKind::CollocationCubicPP,
                         MethodKind::GalerkinPC}) {
      MethodSpec m;
      m.kind = k;
      m.n = 12;
      ms.push_back(m);
    }
    return ms;
  }();
  for (const MethodSpec& m : methods) {
    const double lam = run_eigen(m, rank1, -1, 1).lambda_hat;
    v.require(std::abs(lam - 1.0) <= 1e-10, method_name(m) + " rank-one eigenvalue " + num(lam));
  }
  if (v.pass) v.detail = "all property checks hold";
  return v;
}

Verdict criterion8() {
  Verdict v;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fredholm_acceptance";
  fs::create_directories(dir);
  const std::vector<std::string> commands{
      "quad --rule milne --fn runge --a -1 --b 1 --n-list 4,8,16,32",
      "audit --scheme quad-bspline --n 20 --samples 2000",
      "audit --scheme sinc --n 10 --format json",
      "eigen --method nystrom-milne --kernel gauss --alpha 0.01 --a -1 --b 1 --n 90",
      "eigen --method collocation-lagrange --kernel laplace --alpha 1 --L 2 --n-list 10,20,40,50",
      "eigen --method galerkin-pc --kernel laplace-system --n-list 10,20,40 --format json",
  };
  const auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  };
  int k = 0;
  for (const std::string& c : commands) {
    const fs::path p1 = dir / ("run" + std::to_string(k) + "_1");
    const fs::path p2 = dir / ("run" + std::to_string(k) + "_2");
    ++k;
    fs::remove(p1);
    fs::remove(p2);
    const std::string base = std::string("\"") + FREDHOLM_BIN + "\" " + c + " --out ";
    const int r1 = std::system((base + "\"" + p1.string() + "\" > /dev/null").c_str());
    const int r2 = std::system((base + "\"" + p2.string() + "\" > /dev/null").c_str());
    v.require(r1 == 0 && r2 == 0, "command failed: " + c);
    const std::string a = slurp(p1);
    v.require(!a.empty() && a == slurp(p2), "outputs differ: " + c);
  }
  if (v.pass) v.detail = std::to_string(commands.size()) + " commands reproduced byte for byte";
  return v;
}

struct Criterion {
  std::function<Verdict()> run;
  double budget_seconds;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{{criterion1, 1e-3}, {criterion2, 1.0}, {criterion3, 1.0},  {criterion4, 2.0},
                                        {criterion5, 5.0},  {criterion6, 30.0}, {criterion7, 10.0}, {criterion8, 60.0}};
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "usage: acceptance [1-%zu]\n", criteria.size());
      return 2;
    }
  }
  bool all = true;
  for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) {
    if (only != 0 && i != only) continue;
    const Criterion& c = criteria[static_cast<std::size_t>(i - 1)];
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(secs < c.budget_seconds, "took " + num(secs) + " s, budget " + num(c.budget_seconds) + " s");
    std::printf("criterion %d: %s - %s (%.3g s)\n", i, v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
