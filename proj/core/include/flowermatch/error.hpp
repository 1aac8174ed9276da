#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flowermatch {

enum class ErrorCode {
  NonPositiveDepth,
  InvalidIntrinsics,
  InvalidPose,
  EmptyFrame,
  EmptyCluster,
  TooFewPoints,
  NonFinitePoint,
  InvalidNoise,
  InvalidParameter,
  DegenerateScaling,
  CholeskyFailure,
  SingularCovariance,
  DimensionMismatch,
  InvalidConfidence,
  InvalidDof,
  ParseError,
  EmptyAfterPruning,
  IoError,
  SchemaVersionMismatch,
  InvalidDistribution,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

  /// Same code, message prefixed with `context: `.
  Error with_context(std::string_view context) const;

 private:
  ErrorCode code_;
};

}  // namespace flowermatch
