#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "windml/trees/samples.hpp"

namespace windml::trees {

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::uint32_t>::max();

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

/// Exhaustive search over midpoints between consecutive distinct values of
/// each candidate feature, maximizing the sum-of-squares reduction. Ties go
/// to the lowest feature index, then the lowest threshold. Gains within
/// 1e-12 of the node's sum of squares count as zero, and a zero-gain split
/// is still returned. nullopt when the targets are constant or no split
/// satisfies min_samples_leaf.
std::optional<Split> find_best_split(const SampleSet& samples, std::span<const std::size_t> rows,
                                     std::span<const std::size_t> candidate_features,
                                     std::size_t min_samples_leaf = 1);

/// Same, over every row of the set.
std::optional<Split> find_best_split(const SampleSet& samples, std::span<const std::size_t> candidate_features,
                                     std::size_t min_samples_leaf = 1);

struct TreeConfig {
  std::size_t max_depth = kUnlimited;
  std::size_t max_leaf_nodes = kUnlimited;
  std::size_t min_samples_leaf = 1;

  void validate() const;
  friend bool operator==(const TreeConfig&, const TreeConfig&) = default;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double threshold = 0.0;
  double value = 0.0;

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Binary regression tree; node 0 is the root, "x[feature] < threshold" goes left.
class TreeModel {
 public:
  TreeModel() = default;
  TreeModel(std::size_t n_features, std::vector<TreeNode> nodes);

  /// Shape error on wrong arity.
  double predict(std::span<const double> features) const;
  /// Index of the leaf reached by these features.
  std::size_t leaf_index(std::span<const double> features) const;

  std::size_t n_features() const noexcept { return n_features_; }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t n_leaves() const;
  std::size_t depth() const;

  friend bool operator==(const TreeModel&, const TreeModel&) = default;

 private:
  std::size_t n_features_ = 0;
  std::vector<TreeNode> nodes_;
};

/// Best-first CART: the leaf with the largest gain is expanded next, until
/// max_depth, max_leaf_nodes or min_samples_leaf binds.
TreeModel cart_fit(const SampleSet& samples, const TreeConfig& cfg);

}  // namespace windml::trees
