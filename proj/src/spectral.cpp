#include "polyspec/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "polyspec/bessel.hpp"
#include "polyspec/errors.hpp"

namespace polyspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBracketFloor = 1e-8;
constexpr double kBracketCeil = 1e8;
constexpr double kResidualTol = 1e-11;

void check_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw ParameterError("kappa must be positive and finite");
  }
}

void check_points(const Eigen::MatrixXd& points, int d) {
  if (d != 2 && d != 3) throw ParameterError("dimension d must be 2 or 3");
  if (points.rows() < 1) throw ParameterError("need at least one interaction site");
  if (points.cols() != d) throw ParameterError("points have wrong column count");
  if (!points.allFinite()) throw ParameterError("points contain non-finite coordinates");
}

double pair_distance(const Eigen::MatrixXd& points, int i, int j) {
  const double r = (points.row(i) - points.row(j)).norm();
  const double scale = std::max(1.0, points.row(i).norm() + points.row(j).norm());
  if (r < 1e-12 * scale) {
    throw DegenerateConfigurationError("coincident interaction sites");
  }
  return r;
}

// Analytic one-center kappa, used to seed the bracket search.
double seed_kappa(int d, double alpha) {
  if (d == 2) return 2.0 * std::exp(-2.0 * kPi * alpha - std::numbers::egamma);
  return alpha < 0.0 ? -4.0 * kPi * alpha : 1.0;
}

}  // namespace

double green(int d, double kappa, double r) {
  check_kappa(kappa);
  if (d != 2 && d != 3) throw ParameterError("dimension d must be 2 or 3");
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw ParameterError("green: distance must be positive and finite");
  }
  if (d == 2) return bessel_k0(kappa * r) / (2.0 * kPi);
  return std::exp(-kappa * r) / (4.0 * kPi * r);
}

double xi(int d, double kappa) {
  check_kappa(kappa);
  if (d == 2) return -(std::log(0.5 * kappa) + std::numbers::egamma) / (2.0 * kPi);
  if (d == 3) return -kappa / (4.0 * kPi);
  throw ParameterError("dimension d must be 2 or 3");
}

GammaMatrix build_gamma(const Eigen::MatrixXd& points, int d, double alpha, double kappa) {
  check_points(points, d);
  check_kappa(kappa);
  const int n = static_cast<int>(points.rows());
  GammaMatrix g;
  g.n = n;
  g.d = d;
  g.alpha = alpha;
  g.kappa = kappa;
  g.entries = Eigen::MatrixXd::Zero(n, n);
  const double diag = alpha - xi(d, kappa);
  for (int i = 0; i < n; ++i) {
    g.entries(i, i) = diag;
    for (int j = i + 1; j < n; ++j) {
      const double val = -green(d, kappa, pair_distance(points, i, j));
      g.entries(i, j) = val;
      g.entries(j, i) = val;  // assembled once per pair: exact symmetry
    }
  }
  return g;
}

GammaMatrix build_gamma(const VertexPolygon& p, double alpha, double kappa) {
  return build_gamma(p.y, p.d, alpha, kappa);
}

MinEig min_eig(const GammaMatrix& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.entries);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("min_eig: symmetric eigensolver failed to converge");
  }
  MinEig out;
  out.value = solver.eigenvalues()(0);
  out.vector = solver.eigenvectors().col(0);
  if (out.vector.sum() < 0.0) out.vector = -out.vector;
  out.residual = (g.entries * out.vector - out.value * out.vector).norm();
  const double bound = 1e-12 * std::max(1.0, g.entries.norm());
  if (out.residual > bound) {
    throw NumericalError("min_eig: eigenpair residual exceeds contract");
  }
  return out;
}

double lambda_min(const Eigen::MatrixXd& points, int d, double alpha, double kappa) {
  if (points.rows() == 1) return alpha - xi(d, kappa);  // fast path, exact
  return min_eig(build_gamma(points, d, alpha, kappa)).value;
}

double lambda_min(const VertexPolygon& p, double alpha, double kappa) {
  return lambda_min(p.y, p.d, alpha, kappa);
}

ExistenceReport existence_check(const Eigen::MatrixXd& points, int d, double alpha) {
  check_points(points, d);
  ExistenceReport rep;
  if (d == 2) {
    rep.exists = true;
    rep.alpha_crit = std::numeric_limits<double>::infinity();
    return rep;
  }
  const int n = static_cast<int>(points.rows());
  Eigen::MatrixXd coupling = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double val = 1.0 / (4.0 * kPi * pair_distance(points, i, j));
      coupling(i, j) = val;
      coupling(j, i) = val;
    }
  }
  if (n == 1) {
    rep.alpha_crit = 0.0;
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(coupling);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("existence_check: eigensolver failed");
    }
    rep.alpha_crit = solver.eigenvalues()(n - 1);
  }
  rep.exists = alpha < rep.alpha_crit;
  return rep;
}

ExistenceReport existence_check(const VertexPolygon& p, double alpha) {
  return existence_check(p.y, p.d, alpha);
}

SpectralResult ground_state(const Eigen::MatrixXd& points, int d, double alpha) {
  const ExistenceReport existence = existence_check(points, d, alpha);
  if (!existence.exists) {
    throw NoDiscreteSpectrumError("ground_state: no negative-energy bound state for this coupling",
                                  existence.alpha_crit);
  }
  const auto f = [&](double kappa) { return lambda_min(points, d, alpha, kappa); };

  // Bracket the root of the (strictly increasing) map kappa -> lambda_min.
  double lo = std::clamp(seed_kappa(d, alpha), kBracketFloor, kBracketCeil);
  double hi = lo;
  double flo = f(lo);
  double fhi = flo;
  while (flo >= 0.0) {
    if (lo <= kBracketFloor) break;
    lo = std::max(lo / 8.0, kBracketFloor);
    flo = f(lo);
  }
  while (fhi <= 0.0) {
    if (hi >= kBracketCeil) break;
    hi = std::min(hi * 8.0, kBracketCeil);
    fhi = f(hi);
  }
  if (!(flo < 0.0 && fhi > 0.0)) {
    throw NoDiscreteSpectrumError(
        "ground_state: no sign change of lambda_min over the kappa search range",
        existence.alpha_crit);
  }

  // Bisection to a relative bracket width of 1e-3.
  while (hi - lo > 1e-3 * 0.5 * (hi + lo)) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) {
      lo = hi = mid;
      flo = fhi = 0.0;
      break;
    }
    (fmid < 0.0 ? lo : hi) = mid;
    (fmid < 0.0 ? flo : fhi) = fmid;
  }

  // Safeguarded secant: proposals are clipped into the bracket, falling back
  // to bisection whenever the secant step leaves it or stalls.
  double x0 = lo, f0 = flo;
  double x1 = hi, f1 = fhi;
  double x = 0.5 * (lo + hi);
  double fx = f(x);
  for (int it = 0; it < 100; ++it) {
    if (fx == 0.0) break;
    (fx < 0.0 ? lo : hi) = x;
    x0 = x1;
    f0 = f1;
    x1 = x;
    f1 = fx;
    double next = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x1);
    x = next;
    fx = f(x);
    if (std::abs(fx) <= kResidualTol && step <= 8.0 * std::numeric_limits<double>::epsilon() * x) {
      break;
    }
  }
  if (std::abs(fx) > kResidualTol) {
    throw NumericalError("ground_state: root residual exceeds contract");
  }

  SpectralResult result;
  result.kappa1 = x;
  result.eps1 = -x * x;
  result.residual = std::abs(fx);
  result.bracket_width = hi - lo;
  if (points.rows() == 1) {
    result.eigvec = Eigen::VectorXd::Ones(1);
  } else {
    result.eigvec = min_eig(build_gamma(points, d, alpha, x)).vector;
  }
  return result;
}

SpectralResult ground_state(const VertexPolygon& p, double alpha) {
  return ground_state(p.y, p.d, alpha);
}

double green_sum(const Eigen::MatrixXd& points, int d, double kappa) {
  check_points(points, d);
  check_kappa(kappa);
  const int n = static_cast<int>(points.rows());
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      sum += green(d, kappa, pair_distance(points, i, j));
    }
  }
  return sum;
}

double green_sum(const VertexPolygon& p, double kappa) {
  return green_sum(p.y, p.d, kappa);
}

std::vector<double> lambda_min_grid(const Eigen::MatrixXd& points, int d, double alpha,
                                    const std::vector<double>& kappas, ExecMode mode) {
  std::vector<double> values(kappas.size());
  for_each_index(kappas.size(), mode, [&](std::size_t i) {
    values[i] = lambda_min(points, d, alpha, kappas[i]);
  });
  return values;
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) {
    throw ParameterError("geometric_grid: need 0 < lo < hi and n >= 2");
  }
  std::vector<double> grid(n);
  const double ratio = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) grid[i] = lo * std::exp(ratio * i);
  grid.back() = hi;
  return grid;
}

}  // namespace polyspec
