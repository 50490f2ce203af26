#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "durasim/distributions.hpp"

namespace durasim {

struct FitResult {
    Family family = Family::point;
    Distribution fitted;
    double ks_statistic = 0.0;  ///< in [0, 1], lower is better
    std::size_t sample_count = 0;
};

/// Smallest dataset any fit accepts.
inline constexpr std::size_t kMinFitPoints = 3;

/// Method-of-moments fit of one family:
///   normal      (mean, sd)
///   uniform     mean -/+ sqrt(3) sd
///   triangular  symmetric (mean - sqrt(6) sd, mean, mean + sqrt(6) sd)
///   logistic    (mean, sd sqrt(3) / pi)
///   point       mean
/// sd uses the n-1 denominator. Throws InsufficientDataError below
/// kMinFitPoints and ValidationError for zero-variance data with a
/// non-point family.
Distribution fit_family(std::span<const double> data, Family family);

/// Two-sided Kolmogorov-Smirnov distance between the empirical CDF of `data`
/// and `d`:  max_i max(i/n - F(x_(i)), F(x_(i)-) - (i-1)/n).
/// F(x-) is the left limit, so a PointValue matched by identical data scores 0.
double ks_statistic(std::span<const double> data, const Distribution& d);

/// Fits every feasible family and ranks by ascending K-S distance, then fewer
/// parameters, then Family order. Zero-variance data admits only `point`.
/// Bounded fits (uniform, triangular) are widened to cover every data point.
/// Throws InsufficientDataError or, when nothing is feasible, ValidationError.
std::vector<FitResult> best_fit(std::span<const double> data, std::span<const Family> families);

}  // namespace durasim
