#include "posfred/linalg.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace posfred {

Tridiagonal::Tridiagonal(std::vector<double> d, std::vector<double> up, std::vector<double> lo)
    : diag(std::move(d)), super(std::move(up)), sub(std::move(lo)) {
  if (diag.size() < 2) throw std::invalid_argument("Tridiagonal: size must be >= 2");
  if (super.size() + 1 != diag.size() || sub.size() + 1 != diag.size()) {
    throw std::invalid_argument("Tridiagonal: off-diagonals must have length n-1");
  }
  for (std::size_t j = 0; j < super.size(); ++j) {
    if (super[j] == 0.0) {
      throw std::invalid_argument("Tridiagonal: superdiagonal entry b_" + std::to_string(j + 1) + " is zero");
    }
  }
}

Eigen::MatrixXd Tridiagonal::dense() const {
  const int n = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
  for (int i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = super[static_cast<std::size_t>(i)];
    m(i + 1, i) = sub[static_cast<std::size_t>(i)];
  }
  return m;
}

namespace {

// 1-based arrays (index 0 unused) of the two pivot recursions and of the
// suffix products tail[t] = prod_{s=t}^{n} d_s / delta_s (tail[n+1] = 1).
struct Pivots {
  std::vector<double> d;
  std::vector<double> delta;
  std::vector<double> tail;
};

Pivots pivots(const Tridiagonal& t) {
  const int n = t.size();
  auto a = [&](int k) { return t.diag[static_cast<std::size_t>(k - 1)]; };
  auto b = [&](int k) { return t.super[static_cast<std::size_t>(k - 1)]; };
  auto c = [&](int k) { return t.sub[static_cast<std::size_t>(k - 1)]; };

  Pivots p;
  p.d.assign(static_cast<std::size_t>(n + 1), 0.0);
  p.delta.assign(static_cast<std::size_t>(n + 1), 0.0);
  p.d[static_cast<std::size_t>(n)] = a(n);
  for (int k = n; k >= 2; --k) {
    const double dk = p.d[static_cast<std::size_t>(k)];
    if (dk == 0.0) throw SingularMatrixError("tridiagonal inverse: pivot d_" + std::to_string(k) + " vanishes", k);
    p.d[static_cast<std::size_t>(k - 1)] = a(k - 1) - b(k - 1) * c(k - 1) / dk;
  }
  p.delta[1] = a(1);
  for (int k = 1; k <= n; ++k) {
    const double dk = p.delta[static_cast<std::size_t>(k)];
    if (dk == 0.0) throw SingularMatrixError("tridiagonal inverse: pivot delta_" + std::to_string(k) + " vanishes", k);
    if (k < n) p.delta[static_cast<std::size_t>(k + 1)] = a(k + 1) - b(k) * c(k) / dk;
  }
  p.tail.assign(static_cast<std::size_t>(n + 2), 1.0);
  for (int k = n; k >= 1; --k) {
    p.tail[static_cast<std::size_t>(k)] =
        p.tail[static_cast<std::size_t>(k + 1)] * p.d[static_cast<std::size_t>(k)] / p.delta[static_cast<std::size_t>(k)];
  }
  return p;
}

}  // namespace

double tridiag_inverse_entry(const Tridiagonal& t, int i, int j) {
  const int n = t.size();
  if (i < 1 || i > n || j < 1 || j > n) throw std::out_of_range("tridiag_inverse_entry: index out of range");
  const Pivots p = pivots(t);
  const int lo = std::min(i, j);
  const int hi = std::max(i, j);
  const std::vector<double>& off = i <= j ? t.super : t.sub;
  // prod_{s=lo}^{hi-1} off_s / delta_s, then / delta_hi and the d/delta tail.
  double v = 1.0;
  for (int s = lo; s < hi; ++s) {
    v *= off[static_cast<std::size_t>(s - 1)] / p.delta[static_cast<std::size_t>(s)];
  }
  v = v / p.delta[static_cast<std::size_t>(hi)] * p.tail[static_cast<std::size_t>(hi + 1)];
  return (i + j) % 2 == 0 ? v : -v;
}

Eigen::MatrixXd tridiag_inverse(const Tridiagonal& t) {
  const int n = t.size();
  const Pivots p = pivots(t);
  Eigen::MatrixXd inv(n, n);
  for (int lo = 1; lo <= n; ++lo) {
    double up = 1.0;    // prod b_s / delta_s over s in [lo, hi)
    double down = 1.0;  // prod c_s / delta_s over s in [lo, hi)
    for (int hi = lo; hi <= n; ++hi) {
      if (hi > lo) {
        const double dl = p.delta[static_cast<std::size_t>(hi - 1)];
        up *= t.super[static_cast<std::size_t>(hi - 2)] / dl;
        down *= t.sub[static_cast<std::size_t>(hi - 2)] / dl;
      }
      const double scale = p.tail[static_cast<std::size_t>(hi + 1)] / p.delta[static_cast<std::size_t>(hi)];
      const double sign = (lo + hi) % 2 == 0 ? 1.0 : -1.0;
      inv(lo - 1, hi - 1) = sign * up * scale;
      if (hi > lo) inv(hi - 1, lo - 1) = sign * down * scale;
    }
  }
  return inv;
}

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool normalize_max(Eigen::VectorXd& v) {
  const double s = v.cwiseAbs().maxCoeff();
  if (!(s > 0.0) || !std::isfinite(s)) return false;
  v /= s;
  return true;
}

}  // namespace

EigenPair dominant_eigenpair(const Eigen::MatrixXd& m, const PowerIterationOptions& options) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("dominant_eigenpair: matrix must be square and nonempty");
  if (!(options.tol > 0.0)) throw std::invalid_argument("dominant_eigenpair: tol must be positive");
  if (!m.allFinite()) throw std::invalid_argument("dominant_eigenpair: matrix has non-finite entries");

  const Eigen::Index n = m.rows();
  const double norm_inf = m.cwiseAbs().rowwise().sum().maxCoeff();
  if (norm_inf == 0.0) {
    return EigenPair{0.0, Eigen::VectorXd::Ones(n), 0, 0.0};
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 1e-2 * unit(rng);

  // Repeated squaring: the normalized M^(2^s) converges to a multiple of
  // the spectral projector of the dominant eigenvalue when it exists.
  Eigen::MatrixXd power = m / max_abs(m);
  int squarings = 0;
  for (; squarings < options.max_squarings; ++squarings) {
    Eigen::MatrixXd next = power * power;
    const double s = max_abs(next);
    if (!(s > 0.0)) break;  // nilpotent part; keep the last nonzero power
    next /= s;
    const double change = max_abs(next - power);
    power = std::move(next);
    if (change <= 1e-13) break;
  }
  Eigen::VectorXd trial = v;
  for (int k = 0; k < 3; ++k) {
    trial = power * trial;
    if (!normalize_max(trial)) break;
  }
  if (normalize_max(trial)) {
    v = trial;
  } else {
    // Start vector has no component along the dominant eigenspace: one
    // seeded restart from a random sign-mixed vector.
    for (Eigen::Index i = 0; i < n; ++i) v[i] = 2.0 * unit(rng) - 1.0;
    trial = power * v;
    if (normalize_max(trial)) v = trial;
    normalize_max(v);
  }

  double previous = std::numeric_limits<double>::quiet_NaN();
  double estimate = 0.0;
  double residual = 0.0;
  for (int it = 1; it <= options.max_iter; ++it) {
    const Eigen::VectorXd w = m * v;
    estimate = v.dot(w) / v.dot(v);
    residual = (w - estimate * v).lpNorm<Eigen::Infinity>();
    if (std::abs(estimate - previous) < options.tol && residual <= options.tol * norm_inf) {
      Eigen::Index arg = 0;
      v.cwiseAbs().maxCoeff(&arg);
      EigenPair pair;
      pair.value = estimate;
      pair.vector = v / v[arg];
      pair.iterations = it;
      pair.residual = residual / std::abs(v[arg]);
      return pair;
    }
    previous = estimate;
    v = w;
    if (!normalize_max(v)) {
      // M v = 0: v is an eigenvector for 0, which is dominant only if M is nilpotent.
      throw NonConvergenceError("dominant_eigenpair: iterate collapsed to zero", estimate);
    }
  }
  throw NonConvergenceError("dominant_eigenpair: no convergence after " + std::to_string(options.max_iter) +
                                " iterations (residual " + std::to_string(residual) + ")",
                            estimate);
}

EigenPair dominant_eigenpair(const Eigen::MatrixXd& m, double tol, int max_iter) {
  PowerIterationOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  return dominant_eigenpair(m, options);
}

double bisection_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(lo < hi)) throw std::invalid_argument("bisection_root: requires lo < hi");
  if (!(tol > 0.0)) throw std::invalid_argument("bisection_root: tol must be positive");
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(flo * fhi < 0.0)) throw std::invalid_argument("bisection_root: no sign change on the bracket");
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

Eigen::MatrixXd dense_inverse(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("dense_inverse: matrix must be square");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  Eigen::MatrixXd inv = lu.inverse();
  if (!inv.allFinite()) throw SingularMatrixError("dense_inverse: matrix is singular", 0);
  return inv;
}

}  // namespace posfred
