#include "windml/trees/samples.hpp"

#include <cmath>
#include <string>

#include "windml/error.hpp"

namespace windml::trees {

TapFeatures tap_features(const CaseCondition& cond, std::size_t tap) {
  const auto pos = tap_to_grid(tap);
  return {cond.sx, cond.sy, cond.theta, static_cast<double>(pos.col), static_cast<double>(pos.row)};
}

SampleSet::SampleSet(std::size_t n_features) : n_features_(n_features) {
  if (n_features == 0) fail(ErrorKind::Argument, "sample set needs at least one feature");
}

void SampleSet::reserve(std::size_t rows) {
  x_.reserve(rows * n_features_);
  targets_.reserve(rows);
}

void SampleSet::add(std::span<const double> features, double target) {
  if (features.size() != n_features_) {
    fail(ErrorKind::Shape, "sample has " + std::to_string(features.size()) + " features, expected " +
                               std::to_string(n_features_));
  }
  for (const double v : features) {
    if (!std::isfinite(v)) fail(ErrorKind::Data, "non-finite feature value");
  }
  if (!std::isfinite(target)) fail(ErrorKind::Data, "non-finite target value");
  x_.insert(x_.end(), features.begin(), features.end());
  targets_.push_back(target);
}

SampleSet tap_samples(std::span<const CaseRecord* const> cases, MapKind kind) {
  SampleSet out(kTapFeatures);
  out.reserve(cases.size() * tapgrid::kTaps);
  for (const CaseRecord* c : cases) {
    const auto& map = c->map(kind);
    for (std::size_t tap = 0; tap < tapgrid::kTaps; ++tap) out.add(tap_features(c->condition, tap), map[tap]);
  }
  return out;
}

SampleSet tap_samples(const std::vector<CaseRecord>& cases, MapKind kind) {
  std::vector<const CaseRecord*> ptrs;
  ptrs.reserve(cases.size());
  for (const auto& c : cases) ptrs.push_back(&c);
  return tap_samples(ptrs, kind);
}

}  // namespace windml::trees
