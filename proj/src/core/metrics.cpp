#include "windml/core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "windml/error.hpp"

namespace windml {

SeriesStats stats_from_series(std::span<const double> series) {
  if (series.size() < 2) {
    fail(ErrorKind::InsufficientSamples, "series needs at least 2 samples, got " + std::to_string(series.size()));
  }
  double sum = 0.0;
  for (const double x : series) {
    if (!std::isfinite(x)) fail(ErrorKind::Data, "non-finite sample in series");
    sum += x;
  }
  const double n = static_cast<double>(series.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (const double x : series) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / n)};
}

double mse(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size()) {
    fail(ErrorKind::Shape, "mse: length " + std::to_string(pred.size()) + " vs " + std::to_string(truth.size()));
  }
  if (pred.empty()) fail(ErrorKind::EmptyInput, "mse of empty inputs");
  double ss = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - truth[i];
    ss += d * d;
  }
  return ss / static_cast<double>(pred.size());
}

double r2(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size()) {
    fail(ErrorKind::Shape, "r2: length " + std::to_string(pred.size()) + " vs " + std::to_string(truth.size()));
  }
  if (truth.size() < 2) fail(ErrorKind::InsufficientSamples, "r2 needs at least 2 values");
  if (std::all_of(truth.begin(), truth.end(), [&](double t) { return t == truth[0]; })) {
    fail(ErrorKind::UndefinedVariance, "r2: truth is constant");
  }
  double mean = 0.0;
  for (const double t : truth) mean += t;
  mean /= static_cast<double>(truth.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ss_res += (truth[i] - pred[i]) * (truth[i] - pred[i]);
    ss_tot += (truth[i] - mean) * (truth[i] - mean);
  }
  return 1.0 - ss_res / ss_tot;
}

}  // namespace windml
