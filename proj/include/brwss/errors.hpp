#pragma once

#include <stdexcept>
#include <string>

namespace brwss {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Genotypes (or other sequences) of incompatible length.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Parameters outside the growth regime an operation is defined for.
class RegimeError : public Error {
 public:
  using Error::Error;
};

// Invalid simulation or command-line configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Iterative numerical method failed to meet its tolerance.
class NumericError : public Error {
 public:
  using Error::Error;
};

// No sign change of the first-moment residual inside the scanned window.
class NoRootError : public NumericError {
 public:
  NoRootError(double window_lo, double window_hi, double phi_lo, double phi_hi)
      : NumericError("no sign change of the first-moment residual in [" +
                     std::to_string(window_lo) + ", " + std::to_string(window_hi) +
                     "] (phi = " + std::to_string(phi_lo) + ", " +
                     std::to_string(phi_hi) + ")"),
        window_lo_(window_lo),
        window_hi_(window_hi),
        phi_lo_(phi_lo),
        phi_hi_(phi_hi) {}

  double window_lo() const { return window_lo_; }
  double window_hi() const { return window_hi_; }
  double phi_lo() const { return phi_lo_; }
  double phi_hi() const { return phi_hi_; }

 private:
  double window_lo_;
  double window_hi_;
  double phi_lo_;
  double phi_hi_;
};

}  // namespace brwss
