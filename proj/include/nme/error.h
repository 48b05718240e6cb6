#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nme {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kNotSymmetric,
  kNonFinite,
  kNotPositiveDefinite,
  kZeroLambda,
  kOddDimension,
  kSingularSteinOperator,
  kInsufficientHistory,
  kNotAnEigenpair,
  kNotNormalized,
  kSpecInvariantViolated,
  kRepeatedEigenvalue,
  kConjugateClosureViolated,
  kRankDeficientV,
  kEigensolverFailure,
  kInvalidR,
  kNotCriticalCase,
  kDoublingBreakdown,
  kParse,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

/// Thrown for invalid inputs and failed preconditions. Iterative solvers do
/// not throw on numerical failure; they return a SolveReport with a status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<int> index = std::nullopt);

  ErrorCode code() const { return code_; }
  /// Iteration or column index the failure refers to, when there is one.
  std::optional<int> index() const { return index_; }

 private:
  ErrorCode code_;
  std::optional<int> index_;
};

}  // namespace nme
