#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace jostfit {

using Complex = std::complex<double>;

// Raised for inputs outside a function's domain (gamma poles, k = 0, r <= 0).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Iterative algorithm failed to converge.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inward continuation of H(+-) would amplify rounding beyond the allowed bound.
struct ContinuationError : NumericalError {
  using NumericalError::NumericalError;
};

// Evaluation hit an exact pole (f_in = 0, R-matrix pole, S denominator zero).
struct PoleError : NumericalError {
  using NumericalError::NumericalError;
};

// Argument-principle count disagrees with the number of refined zeros.
struct IncompleteSearchError : NumericalError {
  using NumericalError::NumericalError;
};

// Malformed configuration or input file.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class HSign { Plus, Minus };

}  // namespace jostfit
