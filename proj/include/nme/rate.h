#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace nme {

enum class RateKind { kLinear, kQuadratic, kStalled };

std::string_view RateKindName(RateKind kind);

struct RateEstimate {
  RateKind kind = RateKind::kStalled;
  std::optional<double> rate;  // set for kLinear only
};

/// Classifies a positive, decreasing error-like sequence by fitting log r_k
/// against k (linear) and against 2^k (quadratic) over the tail half.
/// Entries that are zero or non-finite truncate the sequence. Throws
/// InsufficientHistory when fewer than 4 usable entries remain.
RateEstimate EstimateRate(std::span<const double> history);

}  // namespace nme
