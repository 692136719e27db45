#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "windml/core/types.hpp"

namespace windml::trees {

/// Per-tap feature layout: [sx, sy, theta_deg, col, row].
inline constexpr std::size_t kTapFeatures = 5;
using TapFeatures = std::array<double, kTapFeatures>;

TapFeatures tap_features(const CaseCondition& cond, std::size_t tap);

/// Dense row-major feature matrix with one regression target per row.
class SampleSet {
 public:
  explicit SampleSet(std::size_t n_features);

  void reserve(std::size_t rows);
  /// Shape error on wrong arity, Data error on non-finite input.
  void add(std::span<const double> features, double target);

  std::size_t size() const noexcept { return targets_.size(); }
  bool empty() const noexcept { return targets_.empty(); }
  std::size_t n_features() const noexcept { return n_features_; }

  std::span<const double> row(std::size_t r) const { return {x_.data() + r * n_features_, n_features_}; }
  double feature(std::size_t r, std::size_t f) const { return x_[r * n_features_ + f]; }
  double target(std::size_t r) const { return targets_[r]; }
  std::span<const double> targets() const noexcept { return targets_; }

 private:
  std::size_t n_features_;
  std::vector<double> x_;
  std::vector<double> targets_;
};

/// 252 samples per case, target taken from the requested map.
SampleSet tap_samples(std::span<const CaseRecord* const> cases, MapKind kind);
SampleSet tap_samples(const std::vector<CaseRecord>& cases, MapKind kind);

}  // namespace windml::trees
