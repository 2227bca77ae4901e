#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace randlat::stats {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
    double lo;
    double hi;
};

double mean(std::span<const double> xs);
/// Bessel-corrected.
double sample_variance(std::span<const double> xs);

/// Wilson score interval for `successes` out of `n` at 95%.
Interval wilson_interval(std::int64_t successes, std::int64_t n, double z = kZ95);

/// Two-sample Kolmogorov–Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Linear-interpolation quantile (type 7) of sorted data.
double quantile_sorted(std::span<const double> sorted, double q);

/// Histogram of integer observations as (value, frequency), ascending.
std::vector<std::pair<std::int64_t, std::int64_t>> histogram(std::span<const std::int64_t> xs);

}  // namespace randlat::stats
