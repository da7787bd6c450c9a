#pragma once

#include <stdexcept>
#include <string>

namespace plap {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or configuration (CLI exit code 2).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A nonlinearity could not be evaluated (out of table range, non-finite).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// A requested operation does not apply in the current dimension regime.
class RegimeMismatch : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition on the input (accuracy, stability) failed.
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

/// Mathematical outcomes that prevent a result: blow-up, divergence
/// where convergence was required, no divergence below the search cap.
class MathOutcome : public Error {
 public:
  using Error::Error;
};

class BlowUp : public MathOutcome {
 public:
  using MathOutcome::MathOutcome;
};

class NoDivergence : public MathOutcome {
 public:
  using MathOutcome::MathOutcome;
};

/// Violated internal assertion, e.g. a non-monotone monotone iteration.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace plap
