#include <doctest.h>

#include "oracles.hpp"
#include "posfred/projection.hpp"

#include <cmath>
#include <stdexcept>
#include <random>
#include <vector>

using namespace posfred;
using doctest::Approx;

namespace {

std::vector<double> samples(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

std::vector<double> jittered_grid(std::mt19937_64& rng, double a, double b, int n) {
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<double> steps(static_cast<std::size_t>(n));
  double total = 0;
  for (double& s : steps) total += (s = u(rng));
  std::vector<double> g{a};
  double acc = 0;
  for (int i = 0; i < n - 1; ++i) {
    acc += steps[static_cast<std::size_t>(i)];
    g.push_back(a + (b - a) * acc / total);
  }
  g.push_back(b);
  return g;
}

}  // namespace

TEST_SUITE("projection") {

TEST_CASE("hat functions") {
  const Basis h = hat_basis(uniform_grid(0, 1, 2));
  CHECK(h.count() == 3);
  CHECK(h.eval(1, 0.25) == 0.5);
  CHECK(h.eval(0, 0.75) == 0.0);
  CHECK_THROWS_AS(hat_basis({0.0, 1.0, 0.5}), std::invalid_argument);

  std::mt19937_64 rng(3);
  const std::vector<double> g = jittered_grid(rng, -2, 3, 9);
  const Basis b = hat_basis(g);
  for (int i = 0; i < b.count(); ++i) {
    for (int j = 0; j < b.count(); ++j) CHECK(b.eval(i, g[static_cast<std::size_t>(j)]) == (i == j ? 1.0 : 0.0));
  }
  for (double x : samples(-2, 3, 100)) {
    CHECK(std::abs(b.eval_all(x).sum() - 1.0) <= 1e-12);
    for (int i = 0; i < b.count(); ++i) {
      const double v = b.eval(i, x);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("basis functions vanish outside their support") {
  std::mt19937_64 rng(4);
  const std::vector<Basis> bases{hat_basis(jittered_grid(rng, 0, 1, 6)), Basis::quad_bspline(0, 1, 5),
                                 Basis::piecewise_constant(jittered_grid(rng, 0, 1, 4)),
                                 Basis::cubic_blend(jittered_grid(rng, 0, 1, 5))};
  for (const Basis& b : bases) {
    for (int i = 0; i < b.count(); ++i) {
      const Interval s = b.support(i);
      for (double x : samples(0, 1, 301)) {
        CHECK(std::isfinite(b.eval(i, x)));
        if (x < s.lo || x > s.hi) CHECK(b.eval(i, x) == 0.0);
      }
    }
  }
}

TEST_CASE("lagrange functions") {
  const Basis two = lagrange_basis({0.0, 1.0});
  CHECK(two.eval(0, 0.3) == Approx(0.7));
  const Basis three = lagrange_basis({-1.0, 0.0, 1.0});
  CHECK(three.eval(1, 0.5) == Approx(0.75));
  CHECK_THROWS_AS(lagrange_basis({0.0, 1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(lagrange_basis({0.0}), std::invalid_argument);
  const Basis many = lagrange_basis(uniform_grid(-1, 1, 8));
  for (double x : samples(-1, 1, 100)) CHECK(std::abs(many.eval_all(x).sum() - 1.0) <= 1e-12);
}

TEST_CASE("lagrange-property schemes have identity collocation matrices") {
  for (const CollocationScheme& s : {hat_scheme(uniform_grid(-1, 1, 7)), lagrange_scheme({-1.0, 0.0, 1.0})}) {
    const auto d = s.P.rows();
    CHECK(s.P == Eigen::MatrixXd::Identity(d, d));
    CHECK(s.P_inv == Eigen::MatrixXd::Identity(d, d));
    const SigmaFunctions sigma = sigma_functions(s);
    for (double x : samples(-1, 1, 37)) CHECK(sigma.eval_all(x) == s.basis.eval_all(x));
  }
  CHECK(sigma_functions(lagrange_scheme({-1.0, 0.0, 1.0}))(1, 0.5) == Approx(0.75));
}

TEST_CASE("quadratic B-spline collocation matrix") {
  for (int n : {3, 4, 10, 25}) {
    const CollocationScheme s = quad_bspline_scheme(-1, 1, n);
    REQUIRE(s.P.rows() == n + 2);
    CHECK(s.P(0, 0) == 0.5);
    CHECK(s.P(0, 1) == 0.5);
    CHECK(s.P(1, 1) == Approx(0.75));
    CHECK(s.P(1, 0) == Approx(0.125));
    CHECK(s.P(n + 1, n + 1) == 0.5);
    CHECK(s.P(n + 1, n) == 0.5);
    CHECK((s.P * s.P_inv - Eigen::MatrixXd::Identity(n + 2, n + 2)).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(quad_bspline_scheme(0, 1, 2), std::invalid_argument);
}

TEST_CASE("B-spline inverse sign pattern and sigma functions") {
  for (int n = 3; n <= 50; ++n) {
    const CollocationScheme s = quad_bspline_scheme(0, 1, n);
    CHECK(s.P_inv(1, 0) + s.P_inv(2, 0) < 0.0);
  }
  const SigmaAudit a = positivity_audit(quad_bspline_scheme(-1, 1, 20), 1000, 0.0);
  CHECK(a.min_value < 0.0);
  CHECK_FALSE(a.passes);
  const SigmaAudit fine = positivity_audit(quad_bspline_scheme(-1, 1, 20), 2000, 1e-12);
  CHECK_FALSE(fine.passes);
}

TEST_CASE("sinc collocation") {
  const double a = -1;
  const double b = 1;
  const int n = 10;
  const CollocationScheme s = sinc_scheme(a, b, n, 1.0, 1.0);
  REQUIRE(s.P.rows() == 2 * n + 3);
  // Interior sinc functions at interior points form an identity block.
  for (int i = 1; i <= 2 * n + 1; ++i) {
    for (int j = 1; j <= 2 * n + 1; ++j) CHECK(std::abs(s.P(i, j) - (i == j ? 1.0 : 0.0)) < 1e-12);
  }
  // Left ramp column: 1 at a, (b - x_j)/(b - a) inside, 0 at b.
  CHECK(s.P(0, 0) == 1.0);
  CHECK(s.P(1, 0) == Approx((b - s.points[1]) / (b - a)));
  CHECK(s.P(2 * n + 2, 0) == 0.0);
  CHECK(s.P(0, 1) == 0.0);
  CHECK(s.P(2 * n + 2, 2 * n + 2) == 1.0);
  CHECK(s.P_inv.minCoeff() < 0.0);
  CHECK_FALSE(positivity_audit(s, 2000, 1e-12).passes);
  CHECK_THROWS_AS(sinc_scheme(a, b, n, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sinc_scheme(a, b, n, 3.2, 1.0), std::invalid_argument);
}

TEST_CASE("collocation matrices invert to working precision") {
  for (const CollocationScheme& s :
       {quad_bspline_scheme(0, 2, 12), sinc_scheme(0, 2, 6, 0.5, 2.0), lagrange_scheme(uniform_grid(0, 2, 6))}) {
    const auto d = s.P.rows();
    const double cond = s.P.norm() * s.P_inv.norm();
    CHECK((s.P * s.P_inv - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-10 * cond);
  }
}

TEST_CASE("sigma functions are invariant under a change of basis") {
  // Replacing phi by T phi changes P to P T^T; the sigma functions, written
  // back in the original basis, must not change.
  const CollocationScheme s = quad_bspline_scheme(0, 1, 6);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(8, 8);
  for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] += u(rng);
  const Eigen::MatrixXd p_bar = s.P * t.transpose();
  const Eigen::MatrixXd c_bar = p_bar.inverse().transpose() * t;
  CHECK((c_bar - sigma_functions(s).coeffs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("collocation projection") {
  const CollocationScheme hat = hat_scheme(uniform_grid(0, 1, 5));
  std::vector<double> u(hat.points.begin(), hat.points.end());
  const BasisExpansion pu = collocation_project(hat, u);
  for (double x : samples(0, 1, 50)) CHECK(pu(x) == Approx(x));

  const CollocationScheme lag = lagrange_scheme({-1.0, 0.0, 1.0});
  const std::vector<double> data{0, 1, 0};
  const BasisExpansion q = collocation_project(lag, data);
  CHECK(q(0.5) == Approx(0.75));
  CHECK(q(1.0) == Approx(0.0));
  CHECK(q(-1.0) == Approx(0.0));

  const std::vector<double> zeros(hat.points.size(), 0.0);
  CHECK(collocation_project(hat, zeros)(0.3) == 0.0);
  const std::vector<double> short_data{1.0};
  CHECK_THROWS_AS(collocation_project(hat, short_data), std::invalid_argument);
}

TEST_CASE("collocation projection is idempotent") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const CollocationScheme& s : {hat_scheme(uniform_grid(0, 1, 9)), quad_bspline_scheme(0, 1, 9),
                                     sinc_scheme(0, 1, 4, 1.0, 1.0), lagrange_scheme(uniform_grid(0, 1, 5))}) {
    std::vector<double> data(s.points.size());
    for (double& v : data) v = u(rng);
    const BasisExpansion once = collocation_project(s, data);
    std::vector<double> again(s.points.size());
    for (std::size_t i = 0; i < again.size(); ++i) again[i] = once(s.points[i]);
    const BasisExpansion twice = collocation_project(s, again);
    for (double x : samples(0, 1, 100)) CHECK(std::abs(once(x) - twice(x)) <= 1e-10 * std::max(1.0, std::abs(once(x))));
    // Projecting samples of a basis function reproduces it.
    for (int j = 0; j < s.basis.count(); ++j) {
      std::vector<double> phi(s.points.size());
      for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = s.basis.eval(j, s.points[i]);
      const BasisExpansion pj = collocation_project(s, phi);
      for (double x : samples(0, 1, 17)) CHECK(std::abs(pj(x) - s.basis.eval(j, x)) < 1e-10);
    }
  }
}

TEST_CASE("hat and polynomial audits") {
  for (int n : {5, 20, 50}) {
    const SigmaAudit a = positivity_audit(hat_scheme(uniform_grid(-1, 1, n)), 2000, 0.0);
    CHECK(a.passes);
    CHECK(a.min_value >= 0.0);
  }
  // Lagrange polynomials of degree >= 2 take negative values.
  const SigmaAudit lag = positivity_audit(lagrange_scheme(uniform_grid(-1, 1, 4)), 2000, 1e-12);
  CHECK(lag.min_value < 0.0);
  CHECK_THROWS_AS(positivity_audit(hat_scheme(uniform_grid(0, 1, 3)), 1, 0.0), std::invalid_argument);
}

TEST_CASE("cubic positivity-preserving interpolant") {
  const std::vector<double> g{0.0, 0.4, 1.0, 1.5};
  const std::vector<double> u{1.0, -2.0, 3.0, 0.5};
  const CubicPPInterpolant c = cubic_pp_project(g, u);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(c(g[i]) == u[i]);
  CHECK(c(0.2) == Approx(-0.5));
  CHECK(c(0.7) == Approx(0.5));
  // Zero slope at the grid points.
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double step = 1e-6;
    if (i + 1 < g.size()) CHECK(std::abs((c(g[i] + step) - c(g[i])) / step) < 1e-4);
    if (i > 0) CHECK(std::abs((c(g[i]) - c(g[i] - step)) / step) < 1e-4);
  }
  const CubicPPInterpolant k = cubic_pp_project(g, {2.5, 2.5, 2.5, 2.5});
  for (double x : samples(0, 1.5, 41)) CHECK(k(x) == Approx(2.5));
  CHECK_THROWS_AS(cubic_pp_project(g, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(cubic_pp_project({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(c(2.0), std::out_of_range);
}

TEST_CASE("cubic interpolant preserves nonnegativity and is bounded") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 1);
  const std::vector<double> g = jittered_grid(rng, -1, 1, 15);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> data(g.size());
    for (double& v : data) v = u(rng);
    const CubicPPInterpolant c(g, data);
    double lo = 1e300;
    double hi = 0;
    for (double x : samples(-1, 1, 1000)) {
      lo = std::min(lo, c(x));
      hi = std::max(hi, std::abs(c(x)));
    }
    CHECK(lo >= 0.0);
    CHECK(hi <= 2.0 * *std::max_element(data.begin(), data.end()));
  }
}

TEST_CASE("piecewise-constant Galerkin") {
  const GalerkinScheme s = pc_galerkin_scheme(uniform_grid(0, 1, 4));
  CHECK(s.gramian.isApprox(0.25 * Eigen::MatrixXd::Identity(4, 4)));
  const BasisExpansion c = pc_galerkin_project(s, [](double) { return 3.0; });
  for (int j = 0; j < 4; ++j) CHECK(c.coeffs[j] == Approx(3.0));
  const BasisExpansion lin = pc_galerkin_project(pc_galerkin_scheme(uniform_grid(0, 1, 2)), [](double x) { return x; });
  CHECK(lin.coeffs[0] == Approx(0.25));
  CHECK(lin.coeffs[1] == Approx(0.75));
  CHECK(lin(0.1) == Approx(0.25));
  CHECK(lin(1.0) == Approx(0.75));
  // Trapezoid nodes sit on cell boundaries and must stay with their cell.
  const BasisExpansion trap =
      pc_galerkin_project(pc_galerkin_scheme(uniform_grid(0, 1, 2)), [](double x) { return x; }, RuleFamily::Trapezoid, 1);
  CHECK(trap.coeffs[0] == Approx(0.25));
  CHECK(trap.coeffs[1] == Approx(0.75));
  CHECK(positivity_audit(s, 500, 0.0).passes);
  const BasisExpansion pos =
      pc_galerkin_project(pc_galerkin_scheme(uniform_grid(-1, 1, 7)), [](double x) { return x * x * std::exp(x); });
  for (double x : samples(-1, 1, 200)) CHECK(pos(x) >= 0.0);
}

TEST_CASE("piecewise-linear Galerkin Gramian") {
  const GalerkinScheme s = pl_galerkin_scheme(uniform_grid(0, 1, 2));
  Eigen::Matrix3d expected;
  expected << 2, 1, 0, 1, 4, 1, 0, 1, 2;
  CHECK((s.gramian - expected / 12.0).cwiseAbs().maxCoeff() < 1e-15);
  for (int n = 2; n <= 50; ++n) {
    const GalerkinScheme g = pl_galerkin_scheme(uniform_grid(-1, 1, n));
    CHECK(g.gramian_inv(1, 0) < 0.0);
    const double h = 2.0 / n;
    for (int i = 1; i < n; ++i) CHECK(g.gramian.row(i).sum() == Approx(h));
    CHECK((g.gramian * g.gramian_inv - Eigen::MatrixXd::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff() < 1e-10);
    const Eigen::LLT<Eigen::MatrixXd> llt(g.gramian);
    CHECK(llt.info() == Eigen::Success);
  }
  CHECK_FALSE(positivity_audit(pl_galerkin_scheme(uniform_grid(0, 1, 6)), 2000, 1e-12).passes);
  // Galerkin projection reproduces piecewise-linear functions.
  const GalerkinScheme g = pl_galerkin_scheme(uniform_grid(0, 1, 5));
  const BasisExpansion p = galerkin_project(g, [](double x) { return 2.0 * x - 1.0; });
  for (double x : samples(0, 1, 30)) CHECK(p(x) == Approx(2.0 * x - 1.0));
}

}  // TEST_SUITE
