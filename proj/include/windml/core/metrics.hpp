#pragma once

#include <span>

namespace windml {

struct SeriesStats {
  double mean = 0.0;
  double rms = 0.0;
};

/// Mean and root-mean-square fluctuation about the mean (population
/// denominator). Requires at least two finite samples.
SeriesStats stats_from_series(std::span<const double> series);

/// Mean squared elementwise difference. Shape error on length mismatch.
double mse(std::span<const double> pred, std::span<const double> truth);

/// Coefficient of determination 1 - SSres/SStot, SStot about the truth mean.
/// UndefinedVariance if truth is constant.
double r2(std::span<const double> pred, std::span<const double> truth);

}  // namespace windml
