#include "doctest.h"

#include <cmath>
#include <vector>

#include "polyspec/bessel.hpp"
#include "polyspec/errors.hpp"
#include "test_util.hpp"

using polyspec::bessel_k0;

TEST_CASE("K0 matches high-precision reference values") {
  for (const auto& ref : testutil::k0_reference_table()) {
    const double got = bessel_k0(ref.x);
    CAPTURE(ref.x);
    CHECK(std::abs(got - ref.value) <= 5e-14 * ref.value);
  }
}

TEST_CASE("K0 matches the cosh-integral quadrature oracle") {
  // 20 log-spaced points spanning both evaluation branches.
  const double lo = 0.01, hi = 100.0;
  for (int i = 0; i < 20; ++i) {
    const double x = lo * std::pow(hi / lo, i / 19.0);
    const double got = bessel_k0(x);
    const double want = testutil::k0_cosh_quadrature(x);
    CAPTURE(x);
    CHECK(std::abs(got - want) <= 1e-11 * want);
  }
}

TEST_CASE("K0 branch seam at x = 2 is smooth") {
  // The implementation switches between a series and a quadrature at x = 2;
  // both must agree with the oracle through the seam.
  for (double x = 1.90; x <= 2.101; x += 0.01) {
    const double want = testutil::k0_cosh_quadrature(x);
    CAPTURE(x);
    CHECK(std::abs(bessel_k0(x) - want) <= 1e-13 * want);
  }
}

TEST_CASE("K0 is positive, finite and strictly decreasing") {
  double prev = bessel_k0(1e-8);
  CHECK(std::isfinite(prev));
  for (double x = 0.01; x <= 700.0; x *= 1.37) {
    const double v = bessel_k0(x);
    CHECK(v > 0.0);
    CHECK(v < prev);
    prev = v;
  }
  // Deep in the exponential tail the value is tiny but not flushed to zero.
  CHECK(bessel_k0(700.0) > 1e-307);
}

TEST_CASE("K0 rejects non-positive arguments") {
  CHECK_THROWS_AS(bessel_k0(0.0), polyspec::ParameterError);
  CHECK_THROWS_AS(bessel_k0(-1.0), polyspec::ParameterError);
  CHECK_THROWS_AS(bessel_k0(std::nan("")), polyspec::ParameterError);
}

TEST_CASE("K0 small-argument logarithmic growth") {
  // K0(x) ~ -ln(x/2) - gamma as x -> 0; check the leading behavior.
  const double x = 1e-6;
  const double approx = -std::log(x / 2.0) - 0.5772156649015329;
  CHECK(std::abs(bessel_k0(x) - approx) < 1e-10);
}
