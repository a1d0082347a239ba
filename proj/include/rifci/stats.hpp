#pragma once

#include <span>
#include <vector>

namespace rifci::stats {

// Sample quantile with linear interpolation between order statistics
// (Hyndman-Fan type 7): h = (n-1)p, x[floor h] + (h - floor h)(x[floor h + 1] - x[floor h]).
// `sorted` must be ascending and non-empty; p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

// Sorts a copy and applies quantile_sorted.
double quantile(std::vector<double> values, double p);

double mean(std::span<const double> values);

// Standard deviation with the n-1 denominator; 0 for fewer than two values.
double sample_sd(std::span<const double> values);

// Interquartile range, type-7 quartiles.
double interquartile_range(std::vector<double> values);

}  // namespace rifci::stats
