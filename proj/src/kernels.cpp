#include "posfred/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace posfred {

std::string_view to_string(DispersalFamily f) {
  switch (f) {
    case DispersalFamily::Gauss: return "gauss";
    case DispersalFamily::Cauchy: return "cauchy";
    case DispersalFamily::Laplace: return "laplace";
    case DispersalFamily::ExpSqrt: return "expsqrt";
    case DispersalFamily::TopHat: return "tophat";
    case DispersalFamily::Tent: return "tent";
  }
  return "?";
}

std::optional<DispersalFamily> parse_dispersal_family(std::string_view name) {
  for (DispersalFamily f : {DispersalFamily::Gauss, DispersalFamily::Cauchy, DispersalFamily::Laplace,
                            DispersalFamily::ExpSqrt, DispersalFamily::TopHat, DispersalFamily::Tent}) {
    if (name == to_string(f)) return f;
  }
  return std::nullopt;
}

double dispersal_profile(DispersalFamily family, double alpha, double z) {
  using std::numbers::pi;
  const double r = std::abs(z);
  switch (family) {
    case DispersalFamily::Gauss:
      return std::exp(-r * r / (2 * alpha * alpha)) / std::sqrt(2 * pi * alpha * alpha);
    case DispersalFamily::Cauchy:
      return alpha / (pi * (alpha * alpha + r * r));
    case DispersalFamily::Laplace:
      return std::exp(-r / alpha) / (2 * alpha);
    case DispersalFamily::ExpSqrt:
      return std::exp(-std::sqrt(r / alpha)) / (4 * alpha);
    case DispersalFamily::TopHat:
      return r < alpha ? 1.0 / (2 * alpha) : 0.0;  // open ball
    case DispersalFamily::Tent:
      return std::max(0.0, 1.0 - r / alpha) / alpha;
  }
  return 0.0;
}

ScalarKernel make_dispersal(DispersalFamily family, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("make_dispersal: alpha must be positive and finite");
  }
  ScalarKernel k;
  k.eval = [family, alpha](double x, double y) { return dispersal_profile(family, alpha, x - y); };
  std::ostringstream desc;
  desc << to_string(family) << "(alpha=" << alpha << ")";
  k.description = desc.str();
  k.alpha = alpha;
  k.is_convolution = true;
  k.continuous = family != DispersalFamily::TopHat;
  return k;
}

ScalarKernel make_constant_kernel(double value) {
  ScalarKernel k;
  k.eval = [value](double, double) { return value; };
  std::ostringstream desc;
  desc << "constant(" << value << ")";
  k.description = desc.str();
  k.is_convolution = true;
  return k;
}

ScalarKernel make_scalar_kernel(std::function<double(double, double)> eval, std::string description) {
  ScalarKernel k;
  k.eval = std::move(eval);
  k.description = std::move(description);
  return k;
}

MatrixKernel::MatrixKernel(int d, std::vector<ScalarKernel> entries) : d_(d), entries_(std::move(entries)) {
  if (d < 1) throw std::invalid_argument("MatrixKernel: d must be >= 1");
  if (entries_.size() != static_cast<std::size_t>(d * d)) {
    throw std::invalid_argument("MatrixKernel: expected d*d entries");
  }
  for (const auto& e : entries_) {
    if (!e.eval) throw std::invalid_argument("MatrixKernel: empty kernel entry");
  }
}

MatrixKernel::MatrixKernel(ScalarKernel k) : MatrixKernel(1, {std::move(k)}) {}

Eigen::MatrixXd MatrixKernel::eval(double x, double y) const {
  Eigen::MatrixXd m(d_, d_);
  for (int i = 0; i < d_; ++i) {
    for (int j = 0; j < d_; ++j) m(i, j) = entry(i, j)(x, y);
  }
  return m;
}

bool MatrixKernel::continuous() const {
  for (const auto& e : entries_) {
    if (!e.continuous) return false;
  }
  return true;
}

MatrixKernel laplace_system_kernel(double alpha1, double alpha2, std::optional<ScalarKernel> coupling) {
  ScalarKernel k = coupling ? std::move(*coupling)
                            : make_scalar_kernel([](double x, double y) { return 1.0 + x * x + y * y; },
                                                 "1+x^2+y^2");
  ScalarKernel minus_k = make_scalar_kernel([inner = k.eval](double x, double y) { return -inner(x, y); },
                                            "-" + k.description);
  minus_k.continuous = k.continuous;
  return MatrixKernel(2, {make_dispersal(DispersalFamily::Laplace, alpha1), std::move(minus_k),
                          make_constant_kernel(0.0), make_dispersal(DispersalFamily::Laplace, alpha2)});
}

OrthantCone south_east_cone() { return OrthantCone({1, -1}); }

double kernel_mass(const ScalarKernel& kernel, double a, double b, const QuadratureRule& rule) {
  if (rule.a > a || rule.b < b) throw std::invalid_argument("kernel_mass: rule does not cover [a, b]");
  const double tol = 1e-12 * (rule.b - rule.a);
  if (std::abs(rule.a - a) > tol || std::abs(rule.b - b) > tol) {
    throw std::invalid_argument("kernel_mass: rule must be built on [a, b]");
  }
  return integrate(rule, [&](double z) { return kernel(z, 0.0); });
}

KernelAudit kernel_positivity_audit(const MatrixKernel& kernel, const OrthantCone& cone,
                                    std::span<const double> xs, std::span<const double> ys,
                                    bool injectivity_check) {
  if (xs.empty() || ys.empty()) throw std::invalid_argument("kernel_positivity_audit: empty sample grid");
  if (cone.dim() != kernel.dim()) throw std::invalid_argument("kernel_positivity_audit: cone/kernel dimension mismatch");
  KernelAudit audit;
  bool first = true;
  for (double x : xs) {
    for (double y : ys) {
      const PositivityClass c = matrix_positivity_class(cone, kernel.eval(x, y), injectivity_check);
      if (first || c < audit.cls) {
        audit = {c, x, y};
        first = false;
        if (c == PositivityClass::NotPositive) return audit;
      }
    }
  }
  return audit;
}

}  // namespace posfred
