#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sadik {

enum class ErrorCode {
  InvalidParams,
  InvalidOrder,
  InvalidGrid,
  PoleAtEvaluationPoint,
  Overflow,
  NonConvergent,
  QuadratureFailure,
  DivergentTransform,
  UnsupportedFunction,
  UnsupportedProduct,
  LengthMismatch,
  NegativeDelay,
  NotConvergent,
  PoleOnPositiveAxis,
  ContourFailure,
  StepOverflow,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sadik
