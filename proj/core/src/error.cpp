#include "flowermatch/error.hpp"

namespace flowermatch {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::InvalidIntrinsics: return "InvalidIntrinsics";
    case ErrorCode::InvalidPose: return "InvalidPose";
    case ErrorCode::EmptyFrame: return "EmptyFrame";
    case ErrorCode::EmptyCluster: return "EmptyCluster";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NonFinitePoint: return "NonFinitePoint";
    case ErrorCode::InvalidNoise: return "InvalidNoise";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::DegenerateScaling: return "DegenerateScaling";
    case ErrorCode::CholeskyFailure: return "CholeskyFailure";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidConfidence: return "InvalidConfidence";
    case ErrorCode::InvalidDof: return "InvalidDof";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyAfterPruning: return "EmptyAfterPruning";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

Error Error::with_context(std::string_view context) const {
  // Strip our own "<Code>: " prefix so nesting does not repeat it.
  std::string msg = what();
  const auto prefix = std::string(to_string(code_)) + ": ";
  if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
  return Error(code_, std::string(context) + ": " + msg);
}

}  // namespace flowermatch
