#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

namespace polyspec {

// Relative tolerance for geometric invariants (equilaterality, closure).
inline constexpr double kGeomTol = 1e-10;

// Closed equilateral polygon in R^d given by its ordered vertices.
// Immutable after construction; construction validates the invariants:
// N >= 3, finite coordinates, every edge length within kGeomTol*l of l
// (indices cyclic, so the wrap-around edge y_N -> y_1 is included).
struct VertexPolygon {
  VertexPolygon(int d, double edge_length, Eigen::MatrixXd vertices);

  int d;
  double edge_length;
  Eigen::MatrixXd y;  // N x d, row i = vertex i

  int size() const { return static_cast<int>(y.rows()); }
  // Vertex with cyclic index handling.
  Eigen::RowVectorXd vertex(int i) const {
    const int n = size();
    return y.row(((i % n) + n) % n);
  }
};

// Planar polygon in the bending-angle chart: vertex i+1 is reached from
// vertex i by a unit step whose direction angle is (beta_1+...+beta_i) - phi,
// scaled by the edge length.  Angles are stored reduced to (-pi, pi]; the
// winding number w with sum(beta) = 2*pi*w is kept separately.
//
// Construction validates N >= 3, finiteness, the (-pi, pi] reduction and the
// angle-sum condition |sum(beta) - 2*pi*w| <= 1e-10.  Closure (the polygon
// actually returning to its start) is a property of the *chart point*, not
// enforced here: closure_residual() measures it and angles_to_vertices()
// rejects non-closed inputs.
struct AnglePolygon {
  AnglePolygon(double edge_length, double phi, std::vector<double> beta);

  double edge_length;
  double phi;
  std::vector<double> beta;
  int winding;

  int size() const { return static_cast<int>(beta.size()); }
};

// Summary of the m-diagonal lengths of one polygon.
struct DiagonalReport {
  int m = 0;
  int count = 0;                  // nu_m: number of distinct m-diagonals
  double total = 0.0;             // D_m: sum of their lengths
  double mean = 0.0;              // M_m = D_m / nu_m
  double regular_reference = 0.0; // D_m of the regular polygon (same N, l)
  double gap = 0.0;               // regular_reference - total
};

// Reduces an angle to (-pi, pi].
double reduce_angle(double a);

// Number of distinct m-diagonals: N for m < N/2, N/2 for m = N/2 (N even).
int diagonal_count(int N, int m);

// Length of the m-chord of the regular N-gon with edge length l:
// l * sin(pi m / N) / sin(pi / N).
double chord_regular(int N, int m, double edge_length);

// Regular N-gon with edge length l, inscribed in a circle of radius
// l / (2 sin(pi/N)), centered at the origin in the first two coordinates
// (third coordinate 0 when d = 3).
VertexPolygon regular_polygon(int N, double edge_length, int d);

// Builds vertices from the angle chart with y_1 at the origin.  Throws
// NonClosedError (carrying the residual norm) if the chart point does not
// describe a closed polygon within kGeomTol * l.
VertexPolygon angles_to_vertices(const AnglePolygon& a, int d);

// Inverse chart for planar polygons.  d = 3 inputs must lie in a common
// plane within kGeomTol * l (the plane is fitted, then the polygon is
// expressed in in-plane coordinates); otherwise ChartDomainError.
AnglePolygon vertices_to_angles(const VertexPolygon& p);

// The two closure sums of the angle chart (both vanish iff the chain closes):
//   r_cos = 1 + sum_{n=1}^{N-1} cos(beta_1 + ... + beta_n)
//   r_sin =     sum_{n=1}^{N-1} sin(beta_1 + ... + beta_n)
std::pair<double, double> closure_residual(const AnglePolygon& a);

// Diagonal statistics for 2 <= m <= N/2 (each diagonal counted once).
DiagonalReport diagonal_sum(const VertexPolygon& p, int m);

// Mean m-diagonal length evaluated in the angle chart,
//   M_m = (l/N) sum_i [ (1 + sum_{n=1}^{m-1} cos s_{i,n})^2
//                     + (     sum_{n=1}^{m-1} sin s_{i,n})^2 ]^{1/2},
// where s_{i,n} = beta_{i+1} + ... + beta_{i+n} (cyclic).  Agrees with
// diagonal_sum(...).mean for closed chains.
double mean_diagonal_from_angles(const AnglePolygon& a, int m);

// Closed form of the mean 2-diagonal: M_2 = (2 l / N) sum_i cos(beta_i / 2).
double mean_second_diagonal_from_angles(const AnglePolygon& a);

// Random closed equilateral polygon, deterministic in the seed.  Samples
// i.i.d. unit edge directions, then removes the closure defect by
// Gauss-Newton projection in direction space (re-normalizing every sweep);
// resamples on non-convergence and throws SamplerError after max restarts.
VertexPolygon random_equilateral(int N, int d, double edge_length, std::uint64_t seed);

// Projects an arbitrary vertex configuration back onto the closed
// equilateral manifold: normalizes edge directions, reruns the closure
// projection, and rebuilds the chain with exact edge length from y_1.
// Throws DegenerateConfigurationError on zero-length edges and SamplerError
// if the projection does not converge.  `tol` is the closure-projection
// stopping tolerance (tighten for re-verification passes).
VertexPolygon retract_to_equilateral(const Eigen::MatrixXd& y, double edge_length,
                                     double tol = 1e-12);

// Generators of rigid motions at p (translations and rotations), as columns
// of an (N*d) x (d + d(d-1)/2) matrix in vertex-stacked coordinates.
Eigen::MatrixXd motion_generators(const VertexPolygon& p);

// Orthonormal basis of the tangent space of the equilateral-constraint
// manifold at p, orthogonal to all rigid-motion generators; columns of an
// (N*d) x k matrix.  Computed as the null space of the stacked constraint
// gradients and motion generators (SVD rank decision at 1e-10 relative).
Eigen::MatrixXd tangent_basis(const VertexPolygon& p);

// Tangent dimension at the regular polygon: N-3 for d=2 and 2N-6 for d=3
// (N edge constraints plus 3 resp. 6 independent rigid motions).
int expected_tangent_dim(int N, int d);

}  // namespace polyspec
