#include "posfred/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace posfred {

std::string_view to_string(RuleFamily f) {
  switch (f) {
    case RuleFamily::Midpoint: return "midpoint";
    case RuleFamily::Trapezoid: return "trapezoid";
    case RuleFamily::Milne: return "milne";
    case RuleFamily::Gauss6: return "gauss6";
  }
  return "?";
}

std::optional<RuleFamily> parse_rule_family(std::string_view name) {
  for (RuleFamily f : {RuleFamily::Midpoint, RuleFamily::Trapezoid, RuleFamily::Milne, RuleFamily::Gauss6}) {
    if (name == to_string(f)) return f;
  }
  return std::nullopt;
}

std::size_t node_count(RuleFamily family, int n) {
  const auto cells = static_cast<std::size_t>(n);
  switch (family) {
    case RuleFamily::Midpoint: return cells;
    case RuleFamily::Trapezoid: return cells + 1;
    case RuleFamily::Milne:
    case RuleFamily::Gauss6: return 3 * cells;
  }
  return 0;
}

QuadratureRule build_rule(RuleFamily family, double a, double b, int n) {
  if (n < 1) throw std::invalid_argument("build_rule: n must be >= 1");
  if (!(a < b)) throw std::invalid_argument("build_rule: requires a < b");

  QuadratureRule rule;
  rule.a = a;
  rule.b = b;
  rule.family = family;
  rule.n = n;
  const double h = (b - a) / n;
  const std::size_t count = node_count(family, n);
  rule.nodes.reserve(count);
  rule.weights.reserve(count);
  auto grid = [&](int j) { return a + j * h; };

  switch (family) {
    case RuleFamily::Midpoint:
      for (int j = 0; j < n; ++j) {
        rule.nodes.push_back(grid(j) + 0.5 * h);
        rule.weights.push_back(h);
      }
      break;
    case RuleFamily::Trapezoid:
      for (int j = 0; j <= n; ++j) {
        rule.nodes.push_back(j == n ? b : grid(j));
        rule.weights.push_back(j == 0 || j == n ? 0.5 * h : h);
      }
      break;
    case RuleFamily::Milne:
      for (int j = 0; j < n; ++j) {
        const double lo = grid(j);
        const double hi = j + 1 == n ? b : grid(j + 1);
        rule.nodes.insert(rule.nodes.end(), {(3 * lo + hi) / 4, (lo + hi) / 2, (lo + 3 * hi) / 4});
        rule.weights.insert(rule.weights.end(), {2 * h / 3, -h / 3, 2 * h / 3});
      }
      break;
    case RuleFamily::Gauss6: {
      const double s = std::sqrt(3.0 / 5.0);
      for (int j = 0; j < n; ++j) {
        const double lo = grid(j);
        rule.nodes.insert(rule.nodes.end(), {lo + (1 - s) * h / 2, lo + h / 2, lo + (1 + s) * h / 2});
        rule.weights.insert(rule.weights.end(), {5 * h / 18, 8 * h / 18, 5 * h / 18});
      }
      break;
    }
  }
  return rule;
}

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f) {
  // Compensated summation: order fits probe errors down to about 1e-15.
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double v = f(rule.nodes[j]);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "integrate: integrand is not finite at node " << j << " (x=" << rule.nodes[j] << ")";
      throw std::domain_error(msg.str());
    }
    const double term = rule.weights[j] * v - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return sum;
}

WeightSign has_positive_weights(const QuadratureRule& rule) {
  if (rule.weights.empty()) return {false, 0.0};
  const double w = *std::min_element(rule.weights.begin(), rule.weights.end());
  return {w > 0.0, w};
}

double net_fineness(const QuadratureRule& rule) {
  if (rule.nodes.empty()) throw std::invalid_argument("net_fineness: rule has no nodes");
  double worst = std::max(rule.nodes.front() - rule.a, rule.b - rule.nodes.back());
  for (std::size_t j = 1; j < rule.nodes.size(); ++j) {
    worst = std::max(worst, 0.5 * (rule.nodes[j] - rule.nodes[j - 1]));
  }
  return worst;
}

double fit_log_slope(std::span<const double> abscissa, std::span<const double> errors) {
  if (abscissa.size() != errors.size()) throw std::invalid_argument("fit_log_slope: length mismatch");
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] >= 1e-15) || !std::isfinite(errors[i])) continue;
    xs.push_back(std::log(abscissa[i]));
    ys.push_back(std::log(errors[i]));
  }
  if (xs.size() < 2) throw std::runtime_error("saturated: fewer than two usable error samples");
  const auto m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw std::runtime_error("saturated: abscissae coincide");
  return sxy / sxx;
}

double estimate_order(RuleFamily family, const std::function<double(double)>& f, double exact,
                      double a, double b, std::span<const int> n_list) {
  if (n_list.size() < 3) throw std::invalid_argument("estimate_order: need at least 3 resolutions");
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (n_list[i] <= n_list[i - 1]) throw std::invalid_argument("estimate_order: n_list must be strictly increasing");
  }
  std::vector<double> hs;
  std::vector<double> errs;
  for (int n : n_list) {
    const QuadratureRule rule = build_rule(family, a, b, n);
    hs.push_back(rule.h());
    errs.push_back(std::abs(integrate(rule, f) - exact));
  }
  return fit_log_slope(hs, errs);
}

}  // namespace posfred
