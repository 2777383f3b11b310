#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "polyspec/geometry.hpp"
#include "polyspec/parallel.hpp"

namespace polyspec {

// Multiplier ratio sigma_m = sin^2(pi m / N) / sin^2(pi / N).
double sigma_m(int N, int m);

// The same quantity written as the ratio of angular sums,
// sum_{n=0}^{m-1} sin((2n+1) pi / N) / sin(pi / N); agrees with sigma_m to
// rounding (tested identity).
double sigma_m_sum_form(int N, int m);

// Normalized regular m-chord Upsilon_m = sin(pi m / N) / sin(pi / N), so the
// chord length is l * Upsilon_m.
double upsilon_m(int N, int m);

// The common Lagrange multiplier sigma_m / (N Upsilon_m) that makes the
// regular polygon a stationary point of the constrained mean-diagonal
// objective.
double stationary_multiplier(int N, int m);

// Mean m-diagonal objective f_m(y) = (1/N) sum_j |y_j - y_{j+m}| over the
// cyclic index sum (each antipodal pair counted twice when m = N/2).
double mean_diagonal_objective(const Eigen::MatrixXd& y, int m);

// The Lagrangian f_m + sum_r lambda_r (l - |y_r - y_{r+1}|).
double lagrangian_Km(const Eigen::MatrixXd& y, int m, const std::vector<double>& lambdas,
                     double edge_length);

// Gradient of the Lagrangian with respect to every vertex: row j carries
//   (1/N) { u(j, j+m) + u(j, j-m) } - lambda_j u(j, j+1) - lambda_{j-1} u(j, j-1)
// with u(a, b) the unit vector from y_b to y_a.  Throws on coincident
// vertices among the index pairs used.
Eigen::MatrixXd grad_Km(const Eigen::MatrixXd& y, int m, const std::vector<double>& lambdas);
Eigen::MatrixXd grad_Km(const VertexPolygon& p, int m, const std::vector<double>& lambdas);

// Hessian quadratic form of the Lagrangian at the regular polygon, with the
// stationary multipliers, evaluated on a stacked perturbation xi in R^{N d}:
//   (N l Upsilon_m)^{-1} sum_j { |xi_j - xi_{j+m}|^2
//       - ((xi_j - xi_{j+m}) . w_j)^2 - sigma_m |xi_j - xi_{j+1}|^2 },
// where w_j is the unit m-chord direction.  Depends only on differences, so
// rigid motions are in its kernel.
double hessian_form(const VertexPolygon& regular, int m, const Eigen::VectorXd& xi);

// The same quadratic form assembled as a dense symmetric (N d) x (N d) matrix.
Eigen::MatrixXd hessian_matrix(const VertexPolygon& regular, int m);

// Eigenvalues of the Hessian form restricted to tangent_basis(regular),
// sorted ascending.  All strictly negative for m >= 2 (local maximality).
Eigen::VectorXd restricted_hessian_eigenvalues(const VertexPolygon& regular, int m);

// Reduced scalar quadratic form S_m[x] = sum_j { (x_j - x_{j+m})^2
// - sigma_m (x_j - x_{j+1})^2 } (the d = 1 component form).
double s_form(const std::vector<double>& x, int m);

// Analytic eigenvalues of S_m on the Fourier modes mu_r = 2 pi r / N:
//   4 { sin^2(pi m r / N) - sigma_m sin^2(pi r / N) },  r = 0 .. floor(N/2).
struct SModeEigenvalue {
  int r = 0;
  double value = 0.0;
};
std::vector<SModeEigenvalue> s_form_spectrum(int N, int m);

// Chebyshev polynomial of the second kind U_n(x) by forward recurrence.
double cheb_u(int n, double x);

// One row of the mode-inequality sweep.
struct SweepRow {
  int N = 0, m = 0, r = 0;
  double value = 0.0;      // 4 { sin^2(pi m r/N) - sigma_m sin^2(pi r/N) }
  bool required = false;   // r not congruent to 0, +-1 mod N
  bool holds = false;      // value < 0
  bool cheb_holds = false; // U_{m-1}(cos pi/N) > |U_{m-1}(cos pi r/N)|
};

struct SweepResult {
  int n_max = 0;
  long long checked = 0;     // rows in the required mode set
  long long violations = 0;  // required rows with value >= 0
  double max_required_value = -std::numeric_limits<double>::infinity();
  double max_r1_abs = 0.0;   // max |value| over the r = 1 rows (exact zeros)
  bool chebyshev_consistent = true;
  std::vector<SweepRow> violating_rows;  // capped at 1000 entries
};

// Evaluates the mode inequality for every N in [4, n_max], m in [2, N/2] and
// r in [1, N-2].  r = 1 rows are tracked separately (the form vanishes
// there); all other rows belong to the required strict set.  When `sink` is
// given, every row is also streamed to it in deterministic (N, m, r) order
// and the sweep runs serially.
SweepResult inequality_sweep(int n_max, ExecMode mode = ExecMode::serial,
                             const std::function<void(const SweepRow&)>& sink = nullptr);

// Stationarity diagnostics of the regular polygon for one (N, m, d).
struct StationarityReport {
  int N = 0, m = 0, d = 0;
  double multiplier = 0.0;
  double grad_norm = 0.0;
  Eigen::VectorXd restricted_eigenvalues;  // ascending
  int nonnegative_count = 0;
  double max_restricted_eigenvalue = 0.0;
  double max_mode_value = -std::numeric_limits<double>::infinity();
  bool sweep_holds = false;  // all required modes strictly negative
};
StationarityReport analyze_stationarity(int N, int m, int d, double edge_length = 1.0);

// Monte Carlo verification of local maximality at the regular polygon.
enum class LocalMaxMode { geometric, spectral };

struct LocalMaxConfig {
  int N = 5;
  int d = 2;
  LocalMaxMode mode = LocalMaxMode::geometric;
  int m = 2;            // geometric mode: which diagonal sum
  double alpha = 0.0;   // spectral mode: coupling constant
  double edge_length = 1.0;
  std::vector<double> amplitudes = {1e-1, 1e-2, 1e-3};  // relative to l
  int trials = 100;
  std::uint64_t seed = 1;
};

// Per-evaluation record, streamed to an optional sink (CSV export).
struct LocalMaxSample {
  int trial = 0;
  double amplitude = 0.0;  // relative to l
  double value = 0.0;      // objective at the retracted perturbation
  double gap = 0.0;        // reference - value
  double quad_coeff = 0.0; // (value - reference) / (amplitude * l)^2
};

struct LocalMaxReport {
  double reference_value = 0.0;     // objective at the regular polygon
  long long comparisons = 0;
  long long violations = 0;         // perturbed objective >= reference
  double min_gap = std::numeric_limits<double>::infinity();
  double max_quad_coeff = -std::numeric_limits<double>::infinity();
  double mean_quad_coeff = 0.0;     // at the smallest amplitude
  double max_rel_coeff_change = 0.0;  // between the two smallest amplitudes
  bool all_decreased = false;
  bool coefficients_stable = false;   // every relative change < 0.10
};

// Draws `trials` random unit tangent directions at the regular polygon,
// retracts the perturbed vertices back onto the equilateral manifold at each
// amplitude, evaluates the objective (D_m or the ground-state energy), and
// checks strict decrease plus stabilization of the quadratic decay
// coefficient.  Deterministic in the seed; trials run in parallel under
// ExecMode::openmp with per-trial slots.
LocalMaxReport local_max_verify(const LocalMaxConfig& cfg, ExecMode mode = ExecMode::serial,
                                const std::function<void(const LocalMaxSample&)>& sink = nullptr);

}  // namespace polyspec
