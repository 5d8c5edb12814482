#pragma once

#include <stdexcept>
#include <string>

namespace mimolab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or argument combination. CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input value outside the mathematical domain of an operation. CLI exit code 2.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Numerical failure (non-convergence, loss of rank, ...). CLI exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Matrix too ill-conditioned to invert. Monte Carlo trials catch this and
// score the trial as an outage instead of aborting the run.
class SingularMatrixError : public NumericError {
 public:
  SingularMatrixError(const std::string& what, double condition)
      : NumericError(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

// Too few usable points for a statistical fit. CLI exit code 4.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace mimolab
