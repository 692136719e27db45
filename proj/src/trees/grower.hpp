#pragma once

// Shared tree-growing machinery for CART, random forests and boosting.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "windml/rng.hpp"
#include "windml/trees/tree.hpp"

namespace windml::trees::detail {

/// Per-feature sorted distinct values and each row's bin index.
class BinnedColumns {
 public:
  explicit BinnedColumns(const SampleSet& samples);

  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_features() const noexcept { return values_.size(); }
  std::span<const double> distinct(std::size_t f) const { return values_[f]; }
  std::span<const std::uint32_t> bins(std::size_t f) const { return bins_[f]; }
  double value(std::size_t row, std::size_t f) const { return values_[f][bins_[f][row]]; }

 private:
  std::size_t n_rows_;
  std::vector<std::vector<double>> values_;
  std::vector<std::vector<std::uint32_t>> bins_;
};

struct GrowParams {
  std::size_t max_depth = kUnlimited;
  std::size_t max_leaves = kUnlimited;
  std::size_t min_samples_leaf = 1;
  /// 0 = every feature is a candidate at every node.
  std::size_t features_per_split = 0;
  /// false: CART (variance reduction, leaf = mean). true: boosting objective.
  bool boosted = false;
  double l1 = 0.0;
  double l2 = 0.0;
  double gamma = 0.0;
};

/// Split search over the rows of one node. Targets are indexed by row.
class SplitFinder {
 public:
  SplitFinder(const BinnedColumns& cols, std::span<const double> targets, const GrowParams& params);

  std::optional<Split> best(std::span<const std::uint32_t> rows, std::span<const std::size_t> features);
  double leaf_value(std::span<const std::uint32_t> rows) const;

 private:
  struct BinStat {
    double sum = 0.0;
    std::uint32_t count = 0;
  };

  double score(double sum, double count) const;
  void scan_feature(std::span<const std::uint32_t> rows, std::size_t f, double shift, double parent_score,
                    double total_sum, double floor, std::optional<Split>& best);

  const BinnedColumns& cols_;
  std::span<const double> targets_;
  GrowParams params_;
  std::vector<BinStat> hist_;
  std::vector<std::pair<std::uint32_t, double>> scratch_;
};

/// Grows one tree over `rows` (duplicates allowed, e.g. bootstrap draws).
/// rng is required when features_per_split > 0.
TreeModel grow_tree(const BinnedColumns& cols, std::span<const double> targets, std::vector<std::uint32_t> rows,
                    const GrowParams& params, Rng* rng);

}  // namespace windml::trees::detail
