#pragma once

#include <stdexcept>
#include <string>

namespace hyperfactor {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated an operation's documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The computation cannot be trusted at the current working precision.
/// Callers are expected to double the precision and retry.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// An iterative method (root refinement) ran out of its iteration budget.
class ConvergenceError : public PrecisionError {
 public:
  using PrecisionError::PrecisionError;
};

/// A value overflowed the floating-point range.
class OverflowError : public PrecisionError {
 public:
  using PrecisionError::PrecisionError;
};

/// Malformed external input (operator specs, certificates).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace hyperfactor
