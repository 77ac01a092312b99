#pragma once

#include <stdexcept>
#include <string>

namespace pam {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (files, arguments, networks).
class InputError : public Error {
 public:
  using Error::Error;
};

class LoadError : public InputError {
 public:
  using InputError::InputError;
};

class OovError : public InputError {
 public:
  explicit OovError(const std::string& token)
      : InputError("out-of-vocabulary token: '" + token + "'"), token_(token) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

/// Numeric failures: non-finite values, degenerate data, solver trouble.
class NumericError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, double gradient_norm)
      : NumericError(what), gradient_norm_(gradient_norm) {}
  double gradient_norm() const { return gradient_norm_; }

 private:
  double gradient_norm_;
};

}  // namespace pam
