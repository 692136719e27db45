#pragma once

#include <cstdint>
#include <vector>

#include "windml/trees/tree.hpp"

namespace windml::trees {

struct ForestConfig {
  std::size_t n_trees = 100;
  std::size_t n_features_per_split = 3;
  std::size_t max_depth = 25;
  bool bootstrap = true;
  std::uint64_t seed = 0;

  /// Config error unless 1 <= n_features_per_split <= n_features.
  void validate(std::size_t n_features) const;
  friend bool operator==(const ForestConfig&, const ForestConfig&) = default;
};

class ForestModel {
 public:
  ForestModel() = default;
  explicit ForestModel(std::vector<TreeModel> trees);

  /// Unweighted mean over member trees.
  double predict(std::span<const double> features) const;

  const std::vector<TreeModel>& trees() const noexcept { return trees_; }
  std::size_t n_features() const;

  friend bool operator==(const ForestModel&, const ForestModel&) = default;

 private:
  std::vector<TreeModel> trees_;
};

/// Each tree: optional seeded bootstrap, n candidate features drawn without
/// replacement at every node, grown to max_depth with single-sample leaves.
/// Trees are fitted in parallel (WINDML_THREADS) with per-tree seed streams.
ForestModel rf_fit(const SampleSet& samples, const ForestConfig& cfg);

}  // namespace windml::trees
