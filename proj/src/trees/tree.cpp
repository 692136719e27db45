#include "windml/trees/tree.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "grower.hpp"
#include "windml/error.hpp"

namespace windml::trees {

void TreeConfig::validate() const {
  if (max_depth < 1 || max_leaf_nodes < 1 || min_samples_leaf < 1) {
    fail(ErrorKind::Config, "tree config: max_depth, max_leaf_nodes and min_samples_leaf must all be >= 1");
  }
}

TreeModel::TreeModel(std::size_t n_features, std::vector<TreeNode> nodes)
    : n_features_(n_features), nodes_(std::move(nodes)) {
  if (nodes_.empty()) fail(ErrorKind::Data, "tree has no nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (n.is_leaf()) continue;
    if (static_cast<std::size_t>(n.feature) >= n_features_ || n.left <= i || n.right <= i ||
        n.left >= nodes_.size() || n.right >= nodes_.size()) {
      fail(ErrorKind::Data, "malformed tree node " + std::to_string(i));
    }
  }
}

std::size_t TreeModel::leaf_index(std::span<const double> features) const {
  if (features.size() != n_features_) {
    fail(ErrorKind::Shape, "tree expects " + std::to_string(n_features_) + " features, got " +
                               std::to_string(features.size()));
  }
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& n = nodes_[i];
    i = features[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
  }
  return i;
}

double TreeModel::predict(std::span<const double> features) const { return nodes_[leaf_index(features)].value; }

std::size_t TreeModel::n_leaves() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t TreeModel::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes_[i].is_leaf()) d[nodes_[i].left] = d[nodes_[i].right] = d[i] + 1;
  }
  return best;
}

namespace {
std::vector<std::uint32_t> identity_rows(std::size_t n) {
  std::vector<std::uint32_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::uint32_t{0});
  return rows;
}
}  // namespace

std::optional<Split> find_best_split(const SampleSet& samples, std::span<const std::size_t> rows,
                                     std::span<const std::size_t> candidate_features, std::size_t min_samples_leaf) {
  if (candidate_features.empty()) fail(ErrorKind::Argument, "split search needs at least one candidate feature");
  for (const auto f : candidate_features) {
    if (f >= samples.n_features()) fail(ErrorKind::Argument, "candidate feature " + std::to_string(f) + " out of range");
  }
  if (rows.size() < 2) fail(ErrorKind::InsufficientSamples, "split search needs at least 2 samples");
  std::vector<std::size_t> features(candidate_features.begin(), candidate_features.end());
  std::sort(features.begin(), features.end());
  features.erase(std::unique(features.begin(), features.end()), features.end());

  const detail::BinnedColumns cols(samples);
  detail::GrowParams params;
  params.min_samples_leaf = min_samples_leaf;
  detail::SplitFinder finder(cols, samples.targets(), params);
  std::vector<std::uint32_t> node_rows;
  node_rows.reserve(rows.size());
  for (const auto r : rows) {
    if (r >= samples.size()) fail(ErrorKind::Argument, "row index out of range");
    node_rows.push_back(static_cast<std::uint32_t>(r));
  }
  return finder.best(node_rows, features);
}

std::optional<Split> find_best_split(const SampleSet& samples, std::span<const std::size_t> candidate_features,
                                     std::size_t min_samples_leaf) {
  std::vector<std::size_t> rows(samples.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return find_best_split(samples, rows, candidate_features, min_samples_leaf);
}

TreeModel cart_fit(const SampleSet& samples, const TreeConfig& cfg) {
  cfg.validate();
  if (samples.empty()) fail(ErrorKind::EmptyInput, "cart_fit needs at least one sample");
  const detail::BinnedColumns cols(samples);
  detail::GrowParams params;
  params.max_depth = cfg.max_depth;
  params.max_leaves = cfg.max_leaf_nodes;
  params.min_samples_leaf = cfg.min_samples_leaf;
  return detail::grow_tree(cols, samples.targets(), identity_rows(samples.size()), params, nullptr);
}

}  // namespace windml::trees
