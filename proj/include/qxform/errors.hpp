#pragma once

#include <stdexcept>
#include <string>

namespace qxform {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad argument detected before any computation started (non-monotone grid,
/// invalid parameter, mismatched grids, ...).
class ArgumentError : public Error {
public:
  explicit ArgumentError(const std::string& msg) : Error(msg) {}
};

/// Evaluation outside a function's time domain.
class OutOfDomainError : public Error {
public:
  OutOfDomainError(double t, double lo, double hi, const std::string& what_fn)
      : Error("t=" + std::to_string(t) + " outside domain [" + std::to_string(lo) +
              ", " + std::to_string(hi) + "] of " + what_fn),
        t(t), lo(lo), hi(hi) {}
  double t, lo, hi;
};

/// A function required to be strictly monotone is not (derivative vanishes
/// or changes sign), or a time map cannot be built because f <= 0.
class NotInvertibleError : public Error {
public:
  NotInvertibleError(double t, const std::string& msg)
      : Error(msg + " (at t=" + std::to_string(t) + ")"), t(t) {}
  double t;
};

/// Riccati finite-time escape: |kappa| exceeded the blow-up bound.
class FiniteEscapeError : public Error {
public:
  FiniteEscapeError(double escape_time, double bound)
      : Error("gauge ODE escape: |kappa| exceeded " + std::to_string(bound) +
              " at t=" + std::to_string(escape_time)),
        escape_time(escape_time), bound(bound) {}
  double escape_time, bound;
};

/// A gauge passed to a coefficient transformation does not satisfy the
/// connecting equations to the required tolerance.
class InvalidGaugeError : public Error {
public:
  InvalidGaugeError(double max_residual, double tol)
      : Error("gauge residual " + std::to_string(max_residual) +
              " exceeds tolerance " + std::to_string(tol)),
        max_residual(max_residual) {}
  double max_residual;
};

/// Dilation would push the state's support off the spatial grid.
class HeadroomError : public Error {
public:
  explicit HeadroomError(const std::string& msg) : Error(msg) {}
};

/// Runtime numerical failure (boundary reflection, tridiagonal breakdown, ...).
class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& msg) : Error(msg) {}
};

}  // namespace qxform
