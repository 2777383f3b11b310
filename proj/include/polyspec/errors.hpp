#pragma once

#include <stdexcept>
#include <string>

namespace polyspec {

// Base class for all library failures.  The CLI maps subclasses onto its
// exit-code contract: parameter/usage problems -> 2, numerical failures -> 3,
// absence of a discrete spectrum -> 4.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument values (N, m, d, tolerances, malformed inputs).
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& msg) : Error(msg) {}
};

// Geometric preconditions violated (bad polygon data, chart domain, ...).
class GeometryError : public Error {
 public:
  explicit GeometryError(const std::string& msg) : Error(msg) {}
};

// An angle chart does not describe a closed polygon; carries the residual.
class NonClosedError : public GeometryError {
 public:
  NonClosedError(const std::string& msg, double residual_norm)
      : GeometryError(msg), residual_norm(residual_norm) {}
  double residual_norm;
};

// Input outside the domain of a coordinate chart (e.g. a non-planar polygon
// handed to the planar bending-angle parametrization).
class ChartDomainError : public GeometryError {
 public:
  explicit ChartDomainError(const std::string& msg) : GeometryError(msg) {}
};

// Coincident vertices, zero-length edges, unexpected rank deficiencies.
class DegenerateConfigurationError : public GeometryError {
 public:
  explicit DegenerateConfigurationError(const std::string& msg) : GeometryError(msg) {}
};

// Numerical algorithm failed to converge or to meet its accuracy contract.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& msg) : Error(msg) {}
};

// The random-polygon sampler (or a manifold retraction) failed to converge.
class SamplerError : public NumericalError {
 public:
  explicit SamplerError(const std::string& msg) : NumericalError(msg) {}
};

// The operator has no negative-energy bound state for the given coupling.
// Carries the critical coupling below which the spectrum becomes non-empty.
class NoDiscreteSpectrumError : public Error {
 public:
  NoDiscreteSpectrumError(const std::string& msg, double alpha_crit)
      : Error(msg), alpha_crit(alpha_crit) {}
  double alpha_crit;
};

}  // namespace polyspec
