#pragma once

#include <stdexcept>
#include <string>

namespace strebel {

/// Precondition violated by the caller (bad parameters, wrong kind of point).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not reach its accuracy target.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 0/0 encountered while evaluating a rational function.
class IndeterminateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Every Newton start failed; carries the best residual seen.
class SolverFailure : public NumericalError {
 public:
  SolverFailure(const std::string& what, double best_residual)
      : NumericalError(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace strebel
