#pragma once

namespace polyspec {

// Modified Bessel function K0(x) for x > 0, accurate to better than 1e-12
// relative error over the whole domain (underflows to 0 near x ~ 746).
// Throws ParameterError for x <= 0 or non-finite x.
double bessel_k0(double x);

namespace detail {
// The two evaluation branches, exposed so tests can probe each one across the
// switchover point (x = 2) independently.
double k0_ascending_series(double x);   // intended for x <= 2
double k0_quadrature_branch(double x);  // intended for x >= 2
}  // namespace detail

}  // namespace polyspec
