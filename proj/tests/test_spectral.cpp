#include "doctest.h"

#include <cmath>
#include <numbers>

#include "polyspec/bessel.hpp"
#include "polyspec/errors.hpp"
#include "polyspec/geometry.hpp"
#include "polyspec/rng.hpp"
#include "polyspec/spectral.hpp"

using namespace polyspec;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kGamma = std::numbers::egamma;

Eigen::MatrixXd single_point(int d) { return Eigen::MatrixXd::Zero(1, d); }

Eigen::MatrixXd point_pair(int d, double r) {
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(2, d);
  pts(1, 0) = r;
  return pts;
}
}  // namespace

TEST_CASE("free Green's function closed forms") {
  CHECK(green(2, 1.0, 1.0) == doctest::Approx(bessel_k0(1.0) / (2.0 * kPi)).epsilon(1e-15));
  CHECK(green(3, 1.0, 1.0) == doctest::Approx(std::exp(-1.0) / (4.0 * kPi)).epsilon(1e-15));
  CHECK(green(3, 2.0, 0.5) ==
        doctest::Approx(std::exp(-1.0) / (4.0 * kPi * 0.5)).epsilon(1e-15));
  CHECK_THROWS_AS(green(2, 1.0, 0.0), ParameterError);
  CHECK_THROWS_AS(green(3, 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(green(4, 1.0, 1.0), ParameterError);
}

TEST_CASE("Green's function is positive, decreasing and convex in r") {
  for (int d : {2, 3}) {
    for (double kappa : {0.3, 1.0, 4.0}) {
      double prev = green(d, kappa, 0.05);
      double prev_diff = 0.0;
      bool first = true;
      for (double r = 0.10; r < 8.0; r += 0.05) {
        const double v = green(d, kappa, r);
        CHECK(v > 0.0);
        CHECK(v < prev);
        const double diff = v - prev;
        if (!first) CHECK(diff > prev_diff);  // differences increase: convex
        prev_diff = diff;
        prev = v;
        first = false;
      }
    }
  }
}

TEST_CASE("regularized diagonal term") {
  CHECK(xi(2, 2.0) == doctest::Approx(-kGamma / (2.0 * kPi)).epsilon(1e-14));
  CHECK(xi(2, 1.0) ==
        doctest::Approx(-(std::log(0.5) + kGamma) / (2.0 * kPi)).epsilon(1e-14));
  CHECK(xi(3, 1.0) == doctest::Approx(-1.0 / (4.0 * kPi)).epsilon(1e-14));
  CHECK_THROWS_AS(xi(2, 0.0), ParameterError);
}

TEST_CASE("gamma matrix structure") {
  const double alpha = -0.3, kappa = 1.7;
  const Eigen::MatrixXd pts = point_pair(3, 0.8);
  const GammaMatrix g = build_gamma(pts, 3, alpha, kappa);
  REQUIRE(g.entries.rows() == 2);
  CHECK(g.entries(0, 0) == doctest::Approx(alpha - xi(3, kappa)).epsilon(1e-15));
  CHECK(g.entries(1, 1) == g.entries(0, 0));
  CHECK(g.entries(0, 1) == doctest::Approx(-green(3, kappa, 0.8)).epsilon(1e-15));
  CHECK(g.entries(0, 1) == g.entries(1, 0));
  // Coincident sites are rejected.
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 3);
  CHECK_THROWS_AS(build_gamma(bad, 3, alpha, kappa), DegenerateConfigurationError);
}

TEST_CASE("min_eig residual and sign convention") {
  const VertexPolygon p = regular_polygon(7, 1.0, 2);
  const GammaMatrix g = build_gamma(p, 0.0, 1.3);
  const MinEig me = min_eig(g);
  CHECK(me.residual <= 1e-12 * std::max(1.0, g.entries.norm()));
  CHECK(me.vector.sum() >= 0.0);
  CHECK(me.vector.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((g.entries * me.vector - me.value * me.vector).norm() < 1e-11);
}

TEST_CASE("single-center ground states match the closed forms") {
  for (double alpha : {-0.1, -1.0, -10.0}) {
    const SpectralResult r = ground_state(single_point(3), 3, alpha);
    const double want = -4.0 * kPi * alpha;
    CAPTURE(alpha);
    CHECK(std::abs(r.kappa1 - want) <= 1e-10 * want);
    CHECK(r.eps1 == doctest::Approx(-want * want).epsilon(1e-9));
  }
  for (double alpha : {-1.0, 0.0, 1.0}) {
    const SpectralResult r = ground_state(single_point(2), 2, alpha);
    const double want = 2.0 * std::exp(-2.0 * kPi * alpha - kGamma);
    CAPTURE(alpha);
    CHECK(std::abs(r.kappa1 - want) <= 1e-10 * want);
  }
}

TEST_CASE("symmetric two-center problem with constructed coupling") {
  // Coupling chosen so kappa1 = 1 exactly at unit separation.
  SUBCASE("three dimensions") {
    const double alpha = (std::exp(-1.0) - 1.0) / (4.0 * kPi);
    const SpectralResult r = ground_state(point_pair(3, 1.0), 3, alpha);
    CHECK(std::abs(r.kappa1 - 1.0) <= 1e-10);
    CHECK(std::abs(r.residual) <= 1e-11);
  }
  SUBCASE("two dimensions") {
    const double alpha = xi(2, 1.0) + green(2, 1.0, 1.0);
    const SpectralResult r = ground_state(point_pair(2, 1.0), 2, alpha);
    CHECK(std::abs(r.kappa1 - 1.0) <= 1e-10);
  }
}

TEST_CASE("lambda_min is strictly increasing in kappa") {
  for (int d : {2, 3}) {
    const VertexPolygon p = random_equilateral(6, d, 1.0, derive_seed(11, d));
    const double alpha = d == 2 ? 0.4 : -1.0;
    double prev = lambda_min(p, alpha, 1e-3);
    for (double kappa = 1e-2; kappa < 1e3; kappa *= 2.7) {
      const double v = lambda_min(p, alpha, kappa);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("existence thresholds in three dimensions") {
  // Equilateral triangle, unit side: the zero-energy coupling matrix is
  // (1/(4 pi)) (J - I), largest eigenvalue 2 / (4 pi) = 1 / (2 pi).
  const VertexPolygon tri = regular_polygon(3, 1.0, 3);
  const ExistenceReport rep = existence_check(tri, 0.0);
  CHECK(rep.alpha_crit == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-12));
  CHECK(rep.exists);  // alpha = 0 < 1/(2 pi)

  const double above = rep.alpha_crit + 0.05;
  CHECK_FALSE(existence_check(tri, above).exists);
  try {
    ground_state(tri, above);
    FAIL("expected NoDiscreteSpectrumError");
  } catch (const NoDiscreteSpectrumError& e) {
    CHECK(e.alpha_crit == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-12));
  }

  // Two dimensions: a bound state exists for every coupling.
  const VertexPolygon flat = regular_polygon(3, 1.0, 2);
  const ExistenceReport rep2 = existence_check(flat, 25.0);
  CHECK(rep2.exists);
  CHECK(std::isinf(rep2.alpha_crit));
}

TEST_CASE("regular polygons have the uniform ground eigenvector") {
  for (int d : {2, 3}) {
    const double alpha = d == 2 ? 0.0 : -1.0;
    for (int N = 3; N <= 8; ++N) {
      const VertexPolygon p = regular_polygon(N, 1.0, d);
      const SpectralResult r = ground_state(p, alpha);
      const double uniform = 1.0 / std::sqrt(static_cast<double>(N));
      CAPTURE(N);
      CAPTURE(d);
      CHECK(r.eps1 < 0.0);
      CHECK(std::abs(r.residual) <= 1e-11);
      CHECK(r.bracket_width > 0.0);
      CHECK((r.eigvec.array() - uniform).abs().maxCoeff() <= 1e-8);
    }
  }
}

TEST_CASE("ground state scaling covariance in three dimensions") {
  // With g(r) = e^{-kr}/(4 pi r), scaling vertices by t and alpha by 1/t
  // rescales kappa1 by 1/t.
  const VertexPolygon p = regular_polygon(5, 1.0, 3);
  const VertexPolygon q = regular_polygon(5, 2.0, 3);
  const double alpha = -1.0;
  const SpectralResult rp = ground_state(p, alpha);
  const SpectralResult rq = ground_state(q, alpha / 2.0);
  CHECK(rq.kappa1 == doctest::Approx(rp.kappa1 / 2.0).epsilon(1e-9));
}

TEST_CASE("green_sum accumulates unordered pairs") {
  const VertexPolygon tri = regular_polygon(3, 1.0, 3);
  const double kappa = 0.9;
  // Three pairs at unit distance.
  CHECK(green_sum(tri, kappa) ==
        doctest::Approx(3.0 * green(3, kappa, 1.0)).epsilon(1e-13));
}

TEST_CASE("lambda_min_grid equals pointwise evaluation") {
  const VertexPolygon p = random_equilateral(5, 2, 1.0, 404);
  const std::vector<double> kappas = geometric_grid(0.01, 100.0, 64);
  const std::vector<double> grid = lambda_min_grid(p.y, 2, 0.2, kappas);
  REQUIRE(grid.size() == kappas.size());
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    CHECK(grid[i] == lambda_min(p, 0.2, kappas[i]));  // bitwise, same code path
  }
}

TEST_CASE("geometric grid endpoints and spacing") {
  const std::vector<double> g = geometric_grid(0.1, 10.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(g.back() == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(g[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(geometric_grid(1.0, 0.1, 5), ParameterError);
  CHECK_THROWS_AS(geometric_grid(-1.0, 1.0, 5), ParameterError);
  CHECK_THROWS_AS(geometric_grid(0.1, 1.0, 1), ParameterError);
}
