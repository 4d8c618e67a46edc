#pragma once

#include <stdexcept>
#include <string>

namespace rode {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
  explicit DivisionByZero(const std::string& what) : Error(what) {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The leading coefficient of an operator is not invertible, so the
/// equation cannot be solved for its highest derivatives.
class NotMonicNormalizable : public Error {
 public:
  using Error::Error;
};

/// Multipliers fail the leading/trailing multiplier conditions.
class InvalidMultipliers : public Error {
 public:
  using Error::Error;
};

class MissingMultiplier : public Error {
 public:
  using Error::Error;
};

/// A singular point that is not a Gaussian rational.
class UnsupportedSingularity : public Error {
 public:
  using Error::Error;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A self-check failed. Indicates a bug, never bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace rode
