#pragma once

// Composite quadrature rules on uniform subdivisions of [a, b].
//
//   Midpoint   h * sum u(x_j + h/2)                               O(h^2)
//   Trapezoid  h/2 * sum (u(x_j) + u(x_{j+1}))                    O(h^2)
//   Milne      h/3 * sum (2u(q1) - u(mid) + 2u(q3))  quarter pts  O(h^4)
//   Gauss6     h/18 * sum (5u(g-) + 8u(mid) + 5u(g+))             O(h^6)
//
// with x_j = a + j h and h = (b - a) / n. Milne has a negative weight on
// every cell midpoint.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace posfred {

enum class RuleFamily { Midpoint, Trapezoid, Milne, Gauss6 };

std::string_view to_string(RuleFamily f);
std::optional<RuleFamily> parse_rule_family(std::string_view name);

struct QuadratureRule {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;
  RuleFamily family = RuleFamily::Midpoint;
  int n = 0;  // number of subintervals

  std::size_t size() const { return nodes.size(); }
  double h() const { return (b - a) / n; }
};

/// Number of nodes a family places on n subintervals.
std::size_t node_count(RuleFamily family, int n);

QuadratureRule build_rule(RuleFamily family, double a, double b, int n);

/// sum_j w_j f(eta_j). Throws if f is not finite at some node.
double integrate(const QuadratureRule& rule, const std::function<double(double)>& f);

struct WeightSign {
  bool positive = false;
  double min_weight = 0.0;
};

WeightSign has_positive_weights(const QuadratureRule& rule);

/// Largest distance from a point of [a, b] to its nearest node.
double net_fineness(const QuadratureRule& rule);

/// Least-squares slope of log(error) against a log-sized abscissa. Points
/// whose error is below 1e-15 are dropped; throws "saturated" when fewer
/// than two remain.
double fit_log_slope(std::span<const double> abscissa, std::span<const double> errors);

/// Empirical convergence order of a family: slope of log|integrate - exact|
/// against log h.
double estimate_order(RuleFamily family, const std::function<double(double)>& f, double exact,
                      double a, double b, std::span<const int> n_list);

}  // namespace posfred
