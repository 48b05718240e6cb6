#include "nme/rate.h"

#include <cmath>
#include <limits>
#include <vector>

#include "nme/error.h"

namespace nme {

namespace {

// Sum of squared residuals of the least-squares line y ≈ α + βx.
double LineFitSse(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double beta = sxx > 0 ? sxy / sxx : 0.0;
  double sse = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (my + beta * (x[i] - mx));
    sse += e * e;
  }
  return sse;
}

}  // namespace

std::string_view RateKindName(RateKind kind) {
  switch (kind) {
    case RateKind::kLinear: return "linear";
    case RateKind::kQuadratic: return "quadratic";
    case RateKind::kStalled: return "stalled";
  }
  return "unknown";
}

RateEstimate EstimateRate(std::span<const double> history) {
  std::vector<double> usable;
  for (double r : history) {
    if (!(r > 0.0) || !std::isfinite(r)) break;
    usable.push_back(r);
  }
  if (usable.size() < 4) {
    throw Error(ErrorCode::kInsufficientHistory,
                "rate estimation needs at least 4 positive entries, got " +
                    std::to_string(usable.size()));
  }
  const size_t tail = std::max<size_t>(3, (usable.size() + 1) / 2);
  const size_t start = usable.size() - tail;

  std::vector<double> k, pow2, logr;
  for (size_t i = start; i < usable.size(); ++i) {
    k.push_back(static_cast<double>(i - start));
    pow2.push_back(std::ldexp(1.0, static_cast<int>(i - start)));
    logr.push_back(std::log(usable[i]));
  }

  const double ratio = std::pow(usable.back() / usable[start],
                                1.0 / static_cast<double>(tail - 1));
  if (!(ratio < 1.0)) return {RateKind::kStalled, std::nullopt};

  const double sse_linear = LineFitSse(k, logr);
  // 2^k stops being a meaningful regressor long before 50 steps.
  const double sse_quadratic = tail <= 50
                                   ? LineFitSse(pow2, logr)
                                   : std::numeric_limits<double>::infinity();
  if (sse_quadratic < sse_linear) return {RateKind::kQuadratic, std::nullopt};
  return {RateKind::kLinear, ratio};
}

}  // namespace nme
