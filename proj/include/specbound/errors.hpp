#pragma once

#include <stdexcept>
#include <string>

namespace specbound {

// Input problems (bad files, invalid parameters, size guards) map to CLI exit
// code 2; numeric failures map to exit code 3.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class SizeGuard : public InputError {
 public:
  using InputError::InputError;
};

class InvalidVertex : public InputError {
 public:
  using InputError::InputError;
};

class ZeroMatrix : public NumericError {
 public:
  ZeroMatrix() : NumericError("variance matrix has zero norm") {}
};

class ToleranceError : public NumericError {
 public:
  using NumericError::NumericError;
};

class OverflowGuard : public NumericError {
 public:
  using NumericError::NumericError;
};

class NoConvergence : public NumericError {
 public:
  NoConvergence(const std::string& what, double residual, long iterations)
      : NumericError(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  long iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  long iterations_;
};

}  // namespace specbound
