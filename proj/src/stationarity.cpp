#include "polyspec/stationarity.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include "polyspec/errors.hpp"
#include "polyspec/rng.hpp"
#include "polyspec/spectral.hpp"

namespace polyspec {

namespace {

constexpr double kPi = std::numbers::pi;

void check_mode_range(int N, int m, int min_m) {
  if (N < 3) throw ParameterError("N must be >= 3");
  if (m < min_m || 2 * m > N) throw ParameterError("need m in the admissible range [1, N/2]");
}

Eigen::RowVectorXd unit_between(const Eigen::MatrixXd& y, int from, int to, double scale) {
  Eigen::RowVectorXd v = y.row(from) - y.row(to);
  const double norm = v.norm();
  if (norm < 1e-12 * scale) {
    throw DegenerateConfigurationError("coincident vertices in gradient evaluation");
  }
  return v / norm;
}

}  // namespace

double sigma_m(int N, int m) {
  check_mode_range(N, m, 1);
  const double ratio = std::sin(kPi * m / N) / std::sin(kPi / N);
  return ratio * ratio;
}

double sigma_m_sum_form(int N, int m) {
  check_mode_range(N, m, 1);
  double sum = 0.0;
  for (int n = 0; n < m; ++n) sum += std::sin(kPi * (2 * n + 1) / N);
  return sum / std::sin(kPi / N);
}

double upsilon_m(int N, int m) {
  check_mode_range(N, m, 1);
  return std::sin(kPi * m / N) / std::sin(kPi / N);
}

double stationary_multiplier(int N, int m) {
  return sigma_m(N, m) / (N * upsilon_m(N, m));
}

double mean_diagonal_objective(const Eigen::MatrixXd& y, int m) {
  const int n = static_cast<int>(y.rows());
  check_mode_range(n, m, 1);
  double sum = 0.0;
  for (int j = 0; j < n; ++j) sum += (y.row(j) - y.row((j + m) % n)).norm();
  return sum / n;
}

double lagrangian_Km(const Eigen::MatrixXd& y, int m, const std::vector<double>& lambdas,
                     double edge_length) {
  const int n = static_cast<int>(y.rows());
  if (static_cast<int>(lambdas.size()) != n) {
    throw ParameterError("lagrangian_Km: need one multiplier per edge");
  }
  double value = mean_diagonal_objective(y, m);
  for (int r = 0; r < n; ++r) {
    value += lambdas[r] * (edge_length - (y.row(r) - y.row((r + 1) % n)).norm());
  }
  return value;
}

Eigen::MatrixXd grad_Km(const Eigen::MatrixXd& y, int m, const std::vector<double>& lambdas) {
  const int n = static_cast<int>(y.rows());
  check_mode_range(n, m, 1);
  if (static_cast<int>(lambdas.size()) != n) {
    throw ParameterError("grad_Km: need one multiplier per edge");
  }
  const double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, y.cols());
  for (int j = 0; j < n; ++j) {
    grad.row(j) += unit_between(y, j, (j + m) % n, scale) / n;
    grad.row(j) += unit_between(y, j, (j - m % n + n) % n, scale) / n;
    grad.row(j) -= lambdas[j] * unit_between(y, j, (j + 1) % n, scale);
    grad.row(j) -= lambdas[(j - 1 + n) % n] * unit_between(y, j, (j - 1 + n) % n, scale);
  }
  return grad;
}

Eigen::MatrixXd grad_Km(const VertexPolygon& p, int m, const std::vector<double>& lambdas) {
  return grad_Km(p.y, m, lambdas);
}

double hessian_form(const VertexPolygon& regular, int m, const Eigen::VectorXd& xi) {
  const int n = regular.size();
  const int d = regular.d;
  check_mode_range(n, m, 1);
  if (xi.size() != static_cast<Eigen::Index>(n) * d) {
    throw ParameterError("hessian_form: perturbation has wrong length");
  }
  const double sigma = sigma_m(n, m);
  const double pref = 1.0 / (n * regular.edge_length * upsilon_m(n, m));
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const int jm = (j + m) % n;
    const int j1 = (j + 1) % n;
    const Eigen::VectorXd dm = xi.segment(j * d, d) - xi.segment(jm * d, d);
    const Eigen::VectorXd d1 = xi.segment(j * d, d) - xi.segment(j1 * d, d);
    Eigen::RowVectorXd chord = regular.y.row(j) - regular.y.row(jm);
    chord /= chord.norm();
    const double along = chord * dm;
    sum += dm.squaredNorm() - along * along - sigma * d1.squaredNorm();
  }
  return pref * sum;
}

Eigen::MatrixXd hessian_matrix(const VertexPolygon& regular, int m) {
  const int n = regular.size();
  const int d = regular.d;
  check_mode_range(n, m, 1);
  const double sigma = sigma_m(n, m);
  const double pref = 1.0 / (n * regular.edge_length * upsilon_m(n, m));
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n * d, n * d);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  const auto add_pair = [&](int a, int b, const Eigen::MatrixXd& block) {
    h.block(a * d, a * d, d, d) += block;
    h.block(b * d, b * d, d, d) += block;
    h.block(a * d, b * d, d, d) -= block;
    h.block(b * d, a * d, d, d) -= block;
  };
  for (int j = 0; j < n; ++j) {
    const int jm = (j + m) % n;
    const int j1 = (j + 1) % n;
    Eigen::VectorXd chord = (regular.y.row(j) - regular.y.row(jm)).transpose();
    chord /= chord.norm();
    add_pair(j, jm, pref * (id - chord * chord.transpose()));
    add_pair(j, j1, -pref * sigma * id);
  }
  return h;
}

Eigen::VectorXd restricted_hessian_eigenvalues(const VertexPolygon& regular, int m) {
  const Eigen::MatrixXd basis = tangent_basis(regular);
  const Eigen::MatrixXd h = hessian_matrix(regular, m);
  const Eigen::MatrixXd restricted = basis.transpose() * h * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(restricted);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("restricted_hessian_eigenvalues: eigensolver failed");
  }
  return solver.eigenvalues();
}

double s_form(const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size());
  check_mode_range(n, m, 1);
  const double sigma = sigma_m(n, m);
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double dm = x[j] - x[(j + m) % n];
    const double d1 = x[j] - x[(j + 1) % n];
    sum += dm * dm - sigma * d1 * d1;
  }
  return sum;
}

std::vector<SModeEigenvalue> s_form_spectrum(int N, int m) {
  check_mode_range(N, m, 1);
  const double sigma = sigma_m(N, m);
  std::vector<SModeEigenvalue> spectrum;
  spectrum.reserve(N / 2 + 1);
  for (int r = 0; r <= N / 2; ++r) {
    const double sm = std::sin(kPi * m * r / N);
    const double s1 = std::sin(kPi * r / N);
    spectrum.push_back({r, 4.0 * (sm * sm - sigma * s1 * s1)});
  }
  return spectrum;
}

double cheb_u(int n, double x) {
  if (n < 0) throw ParameterError("cheb_u: order must be nonnegative");
  double prev = 1.0;           // U_0
  double curr = 2.0 * x;       // U_1
  if (n == 0) return prev;
  for (int k = 2; k <= n; ++k) {
    const double next = 2.0 * x * curr - prev;
    prev = curr;
    curr = next;
  }
  return curr;
}

SweepResult inequality_sweep(int n_max, ExecMode mode,
                             const std::function<void(const SweepRow&)>& sink) {
  if (n_max < 4) throw ParameterError("inequality_sweep: n_max must be >= 4");
  constexpr std::size_t kMaxStoredViolations = 1000;

  struct PerN {
    long long checked = 0;
    long long violations = 0;
    double max_required_value = -std::numeric_limits<double>::infinity();
    double max_r1_abs = 0.0;
    bool cheb_consistent = true;
    std::vector<SweepRow> violating_rows;
  };

  const int count = n_max - 3;  // N = 4 .. n_max
  std::vector<PerN> slots(count);
  const bool streaming = static_cast<bool>(sink);

  const auto process = [&](std::size_t idx) {
    const int N = static_cast<int>(idx) + 4;
    PerN& slot = slots[idx];
    const double s1 = std::sin(kPi / N);
    for (int m = 2; 2 * m <= N; ++m) {
      const double sigma = sigma_m(N, m);
      const double u_ref = cheb_u(m - 1, std::cos(kPi / N));
      for (int r = 1; r <= N - 2; ++r) {
        const double sm = std::sin(kPi * m * r / N);
        const double sr = std::sin(kPi * r / N);
        SweepRow row;
        row.N = N;
        row.m = m;
        row.r = r;
        row.value = 4.0 * (sm * sm - sigma * sr * sr);
        row.required = r != 1;
        row.holds = row.value < 0.0;
        row.cheb_holds = u_ref > std::abs(cheb_u(m - 1, std::cos(kPi * r / N)));
        if (row.required) {
          slot.checked += 1;
          slot.max_required_value = std::max(slot.max_required_value, row.value);
          if (row.holds != row.cheb_holds) slot.cheb_consistent = false;
          if (!row.holds) {
            slot.violations += 1;
            if (slot.violating_rows.size() < kMaxStoredViolations) {
              slot.violating_rows.push_back(row);
            }
          }
        } else {
          slot.max_r1_abs = std::max(slot.max_r1_abs, std::abs(row.value));
        }
        if (streaming) sink(row);
      }
    }
    (void)s1;
  };

  // A sink imposes deterministic row order, so streaming runs serially.
  for_each_index(static_cast<std::size_t>(count), streaming ? ExecMode::serial : mode, process);

  SweepResult result;
  result.n_max = n_max;
  for (const PerN& slot : slots) {
    result.checked += slot.checked;
    result.violations += slot.violations;
    result.max_required_value = std::max(result.max_required_value, slot.max_required_value);
    result.max_r1_abs = std::max(result.max_r1_abs, slot.max_r1_abs);
    result.chebyshev_consistent = result.chebyshev_consistent && slot.cheb_consistent;
    for (const SweepRow& row : slot.violating_rows) {
      if (result.violating_rows.size() < kMaxStoredViolations) result.violating_rows.push_back(row);
    }
  }
  return result;
}

StationarityReport analyze_stationarity(int N, int m, int d, double edge_length) {
  check_mode_range(N, m, 1);
  StationarityReport report;
  report.N = N;
  report.m = m;
  report.d = d;
  report.multiplier = stationary_multiplier(N, m);
  const VertexPolygon regular = regular_polygon(N, edge_length, d);
  const std::vector<double> lambdas(N, report.multiplier);
  report.grad_norm = grad_Km(regular, m, lambdas).norm();
  report.restricted_eigenvalues = restricted_hessian_eigenvalues(regular, m);
  report.nonnegative_count = 0;
  for (Eigen::Index i = 0; i < report.restricted_eigenvalues.size(); ++i) {
    if (report.restricted_eigenvalues(i) >= 0.0) report.nonnegative_count += 1;
  }
  report.max_restricted_eigenvalue =
      report.restricted_eigenvalues(report.restricted_eigenvalues.size() - 1);
  report.max_mode_value = -std::numeric_limits<double>::infinity();
  for (int r = 2; r <= N - 2; ++r) {
    const double sm = std::sin(kPi * m * r / N);
    const double sr = std::sin(kPi * r / N);
    report.max_mode_value =
        std::max(report.max_mode_value, 4.0 * (sm * sm - sigma_m(N, m) * sr * sr));
  }
  report.sweep_holds = report.max_mode_value < 0.0;
  return report;
}

LocalMaxReport local_max_verify(const LocalMaxConfig& cfg, ExecMode mode,
                                const std::function<void(const LocalMaxSample&)>& sink) {
  if (cfg.trials < 1) throw ParameterError("local_max_verify: trials must be >= 1");
  if (cfg.amplitudes.empty()) throw ParameterError("local_max_verify: need at least one amplitude");
  for (double a : cfg.amplitudes) {
    if (!(a > 0.0)) throw ParameterError("local_max_verify: amplitudes must be positive");
  }
  const VertexPolygon regular = regular_polygon(cfg.N, cfg.edge_length, cfg.d);
  const Eigen::MatrixXd basis = tangent_basis(regular);
  if (basis.cols() != expected_tangent_dim(cfg.N, cfg.d)) {
    throw DegenerateConfigurationError("local_max_verify: unexpected tangent dimension");
  }

  std::vector<double> amplitudes = cfg.amplitudes;  // descending: fits use the two smallest
  std::sort(amplitudes.begin(), amplitudes.end(), std::greater<double>());
  const std::size_t n_amp = amplitudes.size();

  const auto objective = [&](const VertexPolygon& p) -> double {
    if (cfg.mode == LocalMaxMode::geometric) return diagonal_sum(p, cfg.m).total;
    return ground_state(p, cfg.alpha).eps1;
  };
  const double reference = objective(regular);

  struct TrialSlot {
    std::vector<double> values;
    std::vector<double> coeffs;
    std::exception_ptr error;
  };
  std::vector<TrialSlot> slots(cfg.trials);

  for_each_index(static_cast<std::size_t>(cfg.trials), mode, [&](std::size_t trial) {
    TrialSlot& slot = slots[trial];
    try {
      Rng rng(derive_seed(cfg.seed, trial));
      Eigen::VectorXd coeff(basis.cols());
      for (Eigen::Index i = 0; i < coeff.size(); ++i) coeff(i) = rng.gaussian();
      Eigen::VectorXd direction = basis * coeff;
      direction /= direction.norm();
      const Eigen::MatrixXd step =
          Eigen::Map<const Eigen::MatrixXd>(direction.data(), cfg.d, cfg.N).transpose();
      slot.values.resize(n_amp);
      slot.coeffs.resize(n_amp);
      for (std::size_t k = 0; k < n_amp; ++k) {
        const double t = amplitudes[k] * cfg.edge_length;
        const VertexPolygon perturbed =
            retract_to_equilateral(regular.y + t * step, cfg.edge_length);
        slot.values[k] = objective(perturbed);
        slot.coeffs[k] = (slot.values[k] - reference) / (t * t);
      }
    } catch (...) {
      slot.error = std::current_exception();
    }
  });

  LocalMaxReport report;
  report.reference_value = reference;
  double coeff_sum = 0.0;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    const TrialSlot& slot = slots[trial];
    if (slot.error) std::rethrow_exception(slot.error);
    for (std::size_t k = 0; k < n_amp; ++k) {
      report.comparisons += 1;
      const double gap = reference - slot.values[k];
      if (!(gap > 0.0)) report.violations += 1;
      report.min_gap = std::min(report.min_gap, gap);
      report.max_quad_coeff = std::max(report.max_quad_coeff, slot.coeffs[k]);
      if (sink) sink({trial, amplitudes[k], slot.values[k], gap, slot.coeffs[k]});
    }
    coeff_sum += slot.coeffs[n_amp - 1];
    if (n_amp >= 2) {
      const double smallest = slot.coeffs[n_amp - 1];
      const double second = slot.coeffs[n_amp - 2];
      const double rel = std::abs(smallest - second) / std::abs(smallest);
      report.max_rel_coeff_change = std::max(report.max_rel_coeff_change, rel);
    }
  }
  report.mean_quad_coeff = coeff_sum / cfg.trials;
  report.all_decreased = report.violations == 0;
  report.coefficients_stable = n_amp < 2 || report.max_rel_coeff_change < 0.10;
  return report;
}

}  // namespace polyspec
