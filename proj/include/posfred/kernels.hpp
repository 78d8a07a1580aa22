#pragma once

// Dispersal kernels k(x, y) = k~(x - y) normalized to unit mass on R, and
// d x d matrix-valued kernels assembled from scalar entries.

#include "posfred/cone.hpp"
#include "posfred/quadrature.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace posfred {

enum class DispersalFamily { Gauss, Cauchy, Laplace, ExpSqrt, TopHat, Tent };

std::string_view to_string(DispersalFamily f);
std::optional<DispersalFamily> parse_dispersal_family(std::string_view name);

struct ScalarKernel {
  std::function<double(double, double)> eval;
  std::string description;
  double alpha = 0.0;          // dispersal rate; 0 when not applicable
  bool is_convolution = false; // eval(x, y) depends on x - y only
  bool continuous = true;

  double operator()(double x, double y) const { return eval(x, y); }
};

/// Profile k~(z) of a unit-mass dispersal kernel with rate alpha.
double dispersal_profile(DispersalFamily family, double alpha, double z);

ScalarKernel make_dispersal(DispersalFamily family, double alpha);
ScalarKernel make_constant_kernel(double value);
ScalarKernel make_scalar_kernel(std::function<double(double, double)> eval, std::string description);

class MatrixKernel {
 public:
  /// Entries in row-major order; entries.size() must be d * d.
  MatrixKernel(int d, std::vector<ScalarKernel> entries);
  /// 1 x 1 kernel.
  explicit MatrixKernel(ScalarKernel k);

  int dim() const { return d_; }
  const ScalarKernel& entry(int i, int j) const {
    return entries_[static_cast<std::size_t>(i * d_ + j)];
  }
  double operator()(int i, int j, double x, double y) const { return entry(i, j)(x, y); }
  Eigen::MatrixXd eval(double x, double y) const;
  bool continuous() const;

 private:
  int d_;
  std::vector<ScalarKernel> entries_;
};

/// Upper-triangular 2 x 2 Laplace system
///   [ l1(x-y)   -k(x,y) ]
///   [ 0          l2(x-y) ]
/// with Laplace profiles of rates alpha1, alpha2. It is positive for the
/// south-east cone R_+ x (-R_+) whenever k > 0. The default coupling is
/// 1 + x^2 + y^2.
MatrixKernel laplace_system_kernel(double alpha1, double alpha2,
                                   std::optional<ScalarKernel> coupling = std::nullopt);

/// The cone R_+ x (-R_+).
OrthantCone south_east_cone();

/// Numerical integral of k~ over [a, b] with the given rule.
double kernel_mass(const ScalarKernel& kernel, double a, double b, const QuadratureRule& rule);

struct KernelAudit {
  PositivityClass cls = PositivityClass::StronglyPositive;
  double x = 0.0;  // witness attaining the weakest class
  double y = 0.0;
};

/// Weakest matrix_positivity_class of K(x, y) over all sample pairs; the
/// witness is the first pair in scan order (x outer, y inner) attaining it.
KernelAudit kernel_positivity_audit(const MatrixKernel& kernel, const OrthantCone& cone,
                                    std::span<const double> xs, std::span<const double> ys,
                                    bool injectivity_check = false);

}  // namespace posfred
