#pragma once

#include <cstdint>
#include <vector>

#include "windml/trees/tree.hpp"

namespace windml::trees {

struct BoostConfig {
  double gamma = 0.0;          // minimum loss reduction to split
  double learning_rate = 0.1;  // (0, 1], 0 allowed for a no-op ensemble
  std::size_t max_depth = 6;
  double subsample = 1.0;      // (0, 1]
  std::size_t n_trees = 100;
  double l1_reg = 0.0;
  double l2_reg = 1.0;
  double base_score = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const BoostConfig&, const BoostConfig&) = default;
};

class BoostedModel {
 public:
  BoostedModel() = default;
  BoostedModel(double base_score, double learning_rate, std::vector<TreeModel> trees);

  /// base_score + learning_rate * sum of tree outputs.
  double predict(std::span<const double> features) const;

  double base_score() const noexcept { return base_score_; }
  double learning_rate() const noexcept { return learning_rate_; }
  const std::vector<TreeModel>& trees() const noexcept { return trees_; }
  std::size_t n_features() const;

  friend bool operator==(const BoostedModel&, const BoostedModel&) = default;

 private:
  double base_score_ = 0.0;
  double learning_rate_ = 0.0;
  std::vector<TreeModel> trees_;
};

/// Squared-error boosting with exact greedy splits. Each stage fits a
/// depth-limited tree to the current residuals on a seeded subsample;
/// leaf weight = soft_threshold(sum residual, l1) / (count + l2); a split is
/// kept only if its gain 0.5*[S(L) + S(R) - S(P)] exceeds gamma, with
/// S = soft_threshold(G, l1)^2 / (count + l2).
BoostedModel gbt_fit(const SampleSet& samples, const BoostConfig& cfg);

}  // namespace windml::trees
