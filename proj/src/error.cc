#include "nme/error.h"

namespace nme {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kZeroLambda: return "ZeroLambda";
    case ErrorCode::kOddDimension: return "OddDimension";
    case ErrorCode::kSingularSteinOperator: return "SingularSteinOperator";
    case ErrorCode::kInsufficientHistory: return "InsufficientHistory";
    case ErrorCode::kNotAnEigenpair: return "NotAnEigenpair";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kSpecInvariantViolated: return "SpecInvariantViolated";
    case ErrorCode::kRepeatedEigenvalue: return "RepeatedEigenvalue";
    case ErrorCode::kConjugateClosureViolated: return "ConjugateClosureViolated";
    case ErrorCode::kRankDeficientV: return "RankDeficientV";
    case ErrorCode::kEigensolverFailure: return "EigensolverFailure";
    case ErrorCode::kInvalidR: return "InvalidR";
    case ErrorCode::kNotCriticalCase: return "NotCriticalCase";
    case ErrorCode::kDoublingBreakdown: return "DoublingBreakdown";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what, std::optional<int> index)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
      code_(code),
      index_(index) {}

}  // namespace nme
