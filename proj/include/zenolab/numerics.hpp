#pragma once

#include <cmath>
#include <numbers>

namespace zenolab {

/// Standard normal cumulative distribution function.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace zenolab
