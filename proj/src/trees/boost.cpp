#include "windml/trees/boost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "grower.hpp"
#include "windml/error.hpp"
#include "windml/rng.hpp"

namespace windml::trees {

void BoostConfig::validate() const {
  if (!(gamma >= 0.0)) fail(ErrorKind::Config, "boost gamma must be >= 0");
  if (!(learning_rate >= 0.0 && learning_rate <= 1.0)) fail(ErrorKind::Config, "boost learning_rate must be in [0, 1]");
  if (max_depth < 1) fail(ErrorKind::Config, "boost max_depth must be >= 1");
  if (!(subsample > 0.0 && subsample <= 1.0)) fail(ErrorKind::Config, "boost subsample must be in (0, 1]");
  if (!(l1_reg >= 0.0) || !(l2_reg >= 0.0)) fail(ErrorKind::Config, "boost regularization must be >= 0");
  if (!std::isfinite(base_score)) fail(ErrorKind::Config, "boost base_score must be finite");
}

BoostedModel::BoostedModel(double base_score, double learning_rate, std::vector<TreeModel> trees)
    : base_score_(base_score), learning_rate_(learning_rate), trees_(std::move(trees)) {}

std::size_t BoostedModel::n_features() const { return trees_.empty() ? 0 : trees_.front().n_features(); }

double BoostedModel::predict(std::span<const double> features) const {
  double sum = 0.0;
  for (const auto& t : trees_) sum += t.predict(features);
  return base_score_ + learning_rate_ * sum;
}

BoostedModel gbt_fit(const SampleSet& samples, const BoostConfig& cfg) {
  cfg.validate();
  if (samples.empty()) fail(ErrorKind::EmptyInput, "gbt_fit needs at least one sample");
  const detail::BinnedColumns cols(samples);
  detail::GrowParams params;
  params.max_depth = cfg.max_depth;
  params.boosted = true;
  params.l1 = cfg.l1_reg;
  params.l2 = cfg.l2_reg;
  params.gamma = cfg.gamma;

  const std::size_t n = samples.size();
  const auto n_sub = std::clamp<std::size_t>(static_cast<std::size_t>(std::floor(cfg.subsample * static_cast<double>(n) + 1e-9)), 1, n);
  std::vector<double> pred(n, cfg.base_score);
  std::vector<double> residual(n);
  std::vector<std::uint32_t> pool(n);
  std::vector<TreeModel> trees;
  trees.reserve(cfg.n_trees);

  for (std::size_t k = 0; k < cfg.n_trees; ++k) {
    for (std::size_t i = 0; i < n; ++i) residual[i] = samples.target(i) - pred[i];
    std::iota(pool.begin(), pool.end(), std::uint32_t{0});
    if (n_sub < n) {
      Rng rng(cfg.seed, k);
      for (std::size_t i = 0; i < n_sub; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(pool[i], pool[j]);
      }
    }
    std::vector<std::uint32_t> rows(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_sub));
    std::sort(rows.begin(), rows.end());
    TreeModel tree = detail::grow_tree(cols, residual, std::move(rows), params, nullptr);
    for (std::size_t i = 0; i < n; ++i) pred[i] += cfg.learning_rate * tree.predict(samples.row(i));
    trees.push_back(std::move(tree));
  }
  return BoostedModel(cfg.base_score, cfg.learning_rate, std::move(trees));
}

}  // namespace windml::trees
