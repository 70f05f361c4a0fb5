#pragma once

#include <span>
#include <vector>

namespace bridgerank::util {

// Linear interpolation between order statistics: position q * (n - 1) in the
// sorted sample. q outside [0, 1] is clamped. Throws on an empty sample.
double quantile(std::span<const double> values, double q);
double quantile_sorted(std::span<const double> sorted, double q);

// Average ranks (1-based), ties share their mean rank.
std::vector<double> average_ranks(std::span<const double> values);

}  // namespace bridgerank::util
