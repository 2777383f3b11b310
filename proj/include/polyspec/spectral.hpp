#pragma once

#include <Eigen/Dense>
#include <vector>

#include "polyspec/geometry.hpp"
#include "polyspec/parallel.hpp"

namespace polyspec {

// Free Green's function of -Delta + kappa^2 at distance r > 0:
//   d=2: K0(kappa r) / (2 pi),   d=3: e^{-kappa r} / (4 pi r).
// Positive, strictly decreasing and strictly convex in r.
double green(int d, double kappa, double r);

// Regularized Green's function at coinciding points (the finite part left
// after removing the singularity):
//   d=2: -(ln(kappa/2) + gamma_E) / (2 pi),   d=3: -kappa / (4 pi).
double xi(int d, double kappa);

// The symmetric N x N matrix whose zero eigenvalues locate the point-spectrum
// values -kappa^2 of the N-center operator:
//   Gamma_ij = (alpha - xi) delta_ij - (1 - delta_ij) green(d, kappa, r_ij).
struct GammaMatrix {
  int n = 0;
  int d = 0;
  double alpha = 0.0;
  double kappa = 0.0;
  Eigen::MatrixXd entries;
};

// Smallest eigenvalue of a symmetric matrix with its eigenvector, sign-fixed
// so the entry sum is nonnegative, plus the 2-norm residual ||Gv - lambda v||.
struct MinEig {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
};

// Ground-state solution of the secular problem.
struct SpectralResult {
  double kappa1 = 0.0;       // root of lambda_min(Gamma_{i kappa}) = 0
  double eps1 = 0.0;         // ground-state energy -kappa1^2
  Eigen::VectorXd eigvec;    // ground eigenvector of Gamma at kappa1
  double residual = 0.0;     // |lambda_min| at the returned kappa1
  double bracket_width = 0.0;  // width of the final root bracket
};

// Existence of a negative-energy bound state.  Always true for d=2; for d=3
// true iff alpha < alpha_crit, where alpha_crit is the largest eigenvalue of
// the zero-energy interaction matrix [(1-delta_ij) / (4 pi r_ij)].
struct ExistenceReport {
  bool exists = false;
  double alpha_crit = 0.0;  // +infinity for d=2
};

// Point-set interfaces.  `points` is an n x d matrix of interaction sites;
// n >= 1 is allowed (the one- and two-center problems have closed-form
// solutions used as oracles).  Polygon overloads forward the vertex matrix.
GammaMatrix build_gamma(const Eigen::MatrixXd& points, int d, double alpha, double kappa);
GammaMatrix build_gamma(const VertexPolygon& p, double alpha, double kappa);

MinEig min_eig(const GammaMatrix& g);

double lambda_min(const Eigen::MatrixXd& points, int d, double alpha, double kappa);
double lambda_min(const VertexPolygon& p, double alpha, double kappa);

ExistenceReport existence_check(const Eigen::MatrixXd& points, int d, double alpha);
ExistenceReport existence_check(const VertexPolygon& p, double alpha);

// Solves lambda_min(Gamma_{i kappa}) = 0 for kappa (the map is strictly
// increasing in kappa): geometric bracket expansion from an analytic
// one-center seed over [1e-8, 1e8], bisection to relative width 1e-3, then a
// bracket-safeguarded secant polished until |lambda_min| <= 1e-11 and the
// step stagnates at rounding level.  Throws NoDiscreteSpectrumError when no
// root exists (carrying alpha_crit).
SpectralResult ground_state(const Eigen::MatrixXd& points, int d, double alpha);
SpectralResult ground_state(const VertexPolygon& p, double alpha);

// Sum of the Green's function over all unordered site pairs (all pairs, not
// only m-diagonals; the edge terms cancel when comparing equilateral
// polygons but are kept for transparency).
double green_sum(const Eigen::MatrixXd& points, int d, double kappa);
double green_sum(const VertexPolygon& p, double kappa);

// lambda_min evaluated over a kappa grid (batch kernel).
std::vector<double> lambda_min_grid(const Eigen::MatrixXd& points, int d, double alpha,
                                    const std::vector<double>& kappas,
                                    ExecMode mode = ExecMode::serial);

// n log-spaced points from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, int n);

}  // namespace polyspec
