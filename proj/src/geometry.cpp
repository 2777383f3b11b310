#include "polyspec/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

#include "polyspec/errors.hpp"
#include "polyspec/rng.hpp"

namespace polyspec {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dimension(int d) {
  if (d != 2 && d != 3) throw ParameterError("dimension d must be 2 or 3");
}

void check_edge_length(double l) {
  if (!(l > 0.0) || !std::isfinite(l)) throw ParameterError("edge length must be positive and finite");
}

// One Gauss-Newton closure projection in edge-direction space: drives the
// defect C = sum_i u_i to zero while keeping each direction a unit vector.
// The exact tangent step solves (sum_i P_i) x = C with P_i = I - u_i u_i^T,
// then moves u_i by -P_i x and renormalizes.  Returns false on
// non-convergence or a degenerate normal system.
bool project_to_closure(Eigen::MatrixXd& u, double tol = 1e-12, int max_iter = 200) {
  const int n = static_cast<int>(u.rows());
  const int d = static_cast<int>(u.cols());
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd defect = u.colwise().sum().transpose();
    if (defect.norm() <= tol) return true;
    Eigen::MatrixXd normal = static_cast<double>(n) * Eigen::MatrixXd::Identity(d, d) - u.transpose() * u;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    if (ldlt.info() != Eigen::Success) return false;
    Eigen::VectorXd x = ldlt.solve(defect);
    if (!x.allFinite()) return false;
    for (int i = 0; i < n; ++i) {
      const double ux = u.row(i).dot(x);
      u.row(i) -= (x.transpose() - ux * u.row(i));
      const double norm = u.row(i).norm();
      if (norm < 1e-12) return false;
      u.row(i) /= norm;
    }
  }
  return false;
}

Eigen::MatrixXd chain_from_directions(const Eigen::MatrixXd& u, double l, const Eigen::RowVectorXd& start) {
  const int n = static_cast<int>(u.rows());
  Eigen::MatrixXd y(n, u.cols());
  y.row(0) = start;
  for (int i = 0; i + 1 < n; ++i) y.row(i + 1) = y.row(i) + l * u.row(i);
  return y;
}

}  // namespace

VertexPolygon::VertexPolygon(int d_, double edge_length_, Eigen::MatrixXd vertices)
    : d(d_), edge_length(edge_length_), y(std::move(vertices)) {
  check_dimension(d);
  check_edge_length(edge_length);
  const int n = static_cast<int>(y.rows());
  if (n < 3) throw GeometryError("polygon needs at least 3 vertices");
  if (y.cols() != d) throw GeometryError("vertex matrix has wrong column count");
  if (!y.allFinite()) throw GeometryError("polygon has non-finite coordinates");
  for (int i = 0; i < n; ++i) {
    const double len = (y.row((i + 1) % n) - y.row(i)).norm();
    if (std::abs(len - edge_length) > kGeomTol * edge_length) {
      throw GeometryError("polygon is not equilateral within tolerance");
    }
  }
}

AnglePolygon::AnglePolygon(double edge_length_, double phi_, std::vector<double> beta_)
    : edge_length(edge_length_), phi(phi_), beta(std::move(beta_)), winding(0) {
  check_edge_length(edge_length);
  if (!std::isfinite(phi)) throw ParameterError("phi must be finite");
  const int n = static_cast<int>(beta.size());
  if (n < 3) throw GeometryError("angle chart needs at least 3 bending angles");
  double sum = 0.0;
  for (double& b : beta) {
    if (!std::isfinite(b)) throw ParameterError("bending angles must be finite");
    b = reduce_angle(b);
    sum += b;
  }
  winding = static_cast<int>(std::lround(sum / (2.0 * kPi)));
  if (std::abs(sum - 2.0 * kPi * winding) > 1e-10) {
    throw ParameterError("bending angles do not satisfy the angle-sum condition sum(beta) = 2*pi*w");
  }
}

double reduce_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

int diagonal_count(int N, int m) {
  if (N < 3) throw ParameterError("diagonal_count: N must be >= 3");
  if (m < 1 || 2 * m > N) throw ParameterError("diagonal_count: need 1 <= m <= N/2");
  return (2 * m == N) ? N / 2 : N;
}

double chord_regular(int N, int m, double edge_length) {
  if (N < 3) throw ParameterError("chord_regular: N must be >= 3");
  if (m < 1 || 2 * m > N) throw ParameterError("chord_regular: need 1 <= m <= N/2");
  check_edge_length(edge_length);
  return edge_length * std::sin(kPi * m / N) / std::sin(kPi / N);
}

VertexPolygon regular_polygon(int N, double edge_length, int d) {
  if (N < 3) throw ParameterError("regular_polygon: N must be >= 3");
  check_edge_length(edge_length);
  check_dimension(d);
  const double radius = edge_length / (2.0 * std::sin(kPi / N));
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(N, d);
  for (int k = 0; k < N; ++k) {
    const double angle = 2.0 * kPi * k / N;
    y(k, 0) = radius * std::cos(angle);
    y(k, 1) = radius * std::sin(angle);
  }
  return VertexPolygon(d, edge_length, std::move(y));
}

VertexPolygon angles_to_vertices(const AnglePolygon& a, int d) {
  check_dimension(d);
  const int n = a.size();
  const double l = a.edge_length;
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, d);
  double s = 0.0;  // partial angle sum beta_1 + ... + beta_k
  double dir_x = std::cos(-a.phi), dir_y = std::sin(-a.phi);
  for (int k = 0; k + 1 < n; ++k) {
    y(k + 1, 0) = y(k, 0) + l * dir_x;
    y(k + 1, 1) = y(k, 1) + l * dir_y;
    s += a.beta[k];  // beta_{k+1} in 1-based notation
    dir_x = std::cos(s - a.phi);
    dir_y = std::sin(s - a.phi);
  }
  // Defect of the final step returning to y_1.
  const double cx = y(n - 1, 0) + l * dir_x - y(0, 0);
  const double cy = y(n - 1, 1) + l * dir_y - y(0, 1);
  const double defect = std::hypot(cx, cy);
  if (defect > kGeomTol * l) {
    throw NonClosedError("angle chart does not describe a closed polygon", defect / l);
  }
  return VertexPolygon(d, l, std::move(y));
}

AnglePolygon vertices_to_angles(const VertexPolygon& p) {
  const int n = p.size();
  Eigen::MatrixXd flat(n, 2);
  if (p.d == 2) {
    flat = p.y;
  } else {
    // Fit the common plane by PCA and express the polygon in in-plane
    // coordinates; reject genuinely non-planar inputs.
    Eigen::RowVector3d center = p.y.colwise().mean();
    Eigen::MatrixXd centered = p.y.rowwise() - center;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    const Eigen::MatrixXd& v = svd.matrixV();
    const Eigen::VectorXd out_of_plane = centered * v.col(2);
    if (out_of_plane.cwiseAbs().maxCoeff() > kGeomTol * p.edge_length) {
      throw ChartDomainError("polygon is not planar; bending-angle chart undefined");
    }
    flat.col(0) = centered * v.col(0);
    flat.col(1) = centered * v.col(1);
  }
  std::vector<double> theta(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::RowVector2d e = flat.row((i + 1) % n) - flat.row(i);
    theta[i] = std::atan2(e(1), e(0));
  }
  std::vector<double> beta(n);
  for (int i = 1; i < n; ++i) beta[i - 1] = reduce_angle(theta[i] - theta[i - 1]);
  beta[n - 1] = reduce_angle(theta[0] - theta[n - 1]);
  const double phi = reduce_angle(-theta[0]);
  return AnglePolygon(p.edge_length, phi, std::move(beta));
}

std::pair<double, double> closure_residual(const AnglePolygon& a) {
  const int n = a.size();
  double s = 0.0;
  double r_cos = 1.0, r_sin = 0.0;
  for (int k = 1; k <= n - 1; ++k) {
    s += a.beta[k - 1];
    r_cos += std::cos(s);
    r_sin += std::sin(s);
  }
  return {r_cos, r_sin};
}

DiagonalReport diagonal_sum(const VertexPolygon& p, int m) {
  const int n = p.size();
  if (m < 2 || 2 * m > n) throw ParameterError("diagonal_sum: need 2 <= m <= N/2");
  DiagonalReport rep;
  rep.m = m;
  rep.count = diagonal_count(n, m);
  rep.total = 0.0;
  for (int i = 0; i < rep.count; ++i) {
    rep.total += (p.y.row(i) - p.y.row((i + m) % n)).norm();
  }
  rep.mean = rep.total / rep.count;
  rep.regular_reference = rep.count * chord_regular(n, m, p.edge_length);
  rep.gap = rep.regular_reference - rep.total;
  return rep;
}

double mean_diagonal_from_angles(const AnglePolygon& a, int m) {
  const int n = a.size();
  if (m < 1 || 2 * m > n) throw ParameterError("mean_diagonal_from_angles: need 1 <= m <= N/2");
  double acc = 0.0;
  for (int base = 0; base < n; ++base) {
    double s = 0.0, cx = 1.0, sx = 0.0;
    for (int k = 1; k <= m - 1; ++k) {
      s += a.beta[(base + k) % n];
      cx += std::cos(s);
      sx += std::sin(s);
    }
    acc += std::sqrt(cx * cx + sx * sx);
  }
  return a.edge_length / n * acc;
}

double mean_second_diagonal_from_angles(const AnglePolygon& a) {
  const int n = a.size();
  if (n < 4) throw ParameterError("mean_second_diagonal_from_angles: N must be >= 4");
  double acc = 0.0;
  for (double b : a.beta) acc += std::cos(0.5 * b);
  return 2.0 * a.edge_length / n * acc;
}

VertexPolygon random_equilateral(int N, int d, double edge_length, std::uint64_t seed) {
  if (N < 3) throw ParameterError("random_equilateral: N must be >= 3");
  check_dimension(d);
  check_edge_length(edge_length);
  constexpr int kMaxRestarts = 50;
  Rng rng(derive_seed(seed, 0));
  for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
    Eigen::MatrixXd u(N, d);
    for (int i = 0; i < N; ++i) {
      double norm = 0.0;
      do {
        for (int c = 0; c < d; ++c) u(i, c) = rng.gaussian();
        norm = u.row(i).norm();
      } while (norm < 1e-8);
      u.row(i) /= norm;
    }
    if (project_to_closure(u)) {
      return VertexPolygon(d, edge_length,
                           chain_from_directions(u, edge_length, Eigen::RowVectorXd::Zero(d)));
    }
  }
  throw SamplerError("random_equilateral: closure projection failed to converge");
}

VertexPolygon retract_to_equilateral(const Eigen::MatrixXd& y, double edge_length, double tol) {
  const int n = static_cast<int>(y.rows());
  const int d = static_cast<int>(y.cols());
  check_dimension(d);
  check_edge_length(edge_length);
  if (n < 3) throw ParameterError("retract_to_equilateral: need at least 3 vertices");
  if (!y.allFinite()) throw GeometryError("retract_to_equilateral: non-finite input");
  Eigen::MatrixXd u(n, d);
  for (int i = 0; i < n; ++i) {
    Eigen::RowVectorXd e = y.row((i + 1) % n) - y.row(i);
    const double norm = e.norm();
    if (norm < 1e-12 * edge_length) {
      throw DegenerateConfigurationError("retract_to_equilateral: zero-length edge");
    }
    u.row(i) = e / norm;
  }
  if (!(tol > 0.0)) throw ParameterError("retract_to_equilateral: tol must be positive");
  if (!project_to_closure(u, tol)) {
    throw SamplerError("retract_to_equilateral: closure projection failed to converge");
  }
  return VertexPolygon(d, edge_length, chain_from_directions(u, edge_length, y.row(0)));
}

Eigen::MatrixXd motion_generators(const VertexPolygon& p) {
  const int n = p.size();
  const int d = p.d;
  const int n_rot = d * (d - 1) / 2;
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(n * d, d + n_rot);
  for (int a = 0; a < d; ++a) {
    for (int i = 0; i < n; ++i) gen(i * d + a, a) = 1.0;
  }
  int col = d;
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b, ++col) {
      for (int i = 0; i < n; ++i) {
        gen(i * d + a, col) = p.y(i, b);
        gen(i * d + b, col) = -p.y(i, a);
      }
    }
  }
  return gen;
}

Eigen::MatrixXd tangent_basis(const VertexPolygon& p) {
  const int n = p.size();
  const int d = p.d;
  const Eigen::MatrixXd motions = motion_generators(p);
  const int rows = n + static_cast<int>(motions.cols());
  Eigen::MatrixXd stacked = Eigen::MatrixXd::Zero(rows, n * d);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const Eigen::RowVectorXd e = p.y.row(i) - p.y.row(j);
    stacked.block(i, i * d, 1, d) = e;
    stacked.block(i, j * d, 1, d) = -e;
  }
  stacked.bottomRows(motions.cols()) = motions.transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-10 * sv(0)) ++rank;
  }
  const int dim = n * d - rank;
  if (dim <= 0) throw DegenerateConfigurationError("tangent_basis: no tangent directions remain");
  return svd.matrixV().rightCols(dim);
}

int expected_tangent_dim(int N, int d) {
  check_dimension(d);
  return d == 2 ? N - 3 : 2 * N - 6;
}

}  // namespace polyspec
