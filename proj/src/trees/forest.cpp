#include "windml/trees/forest.hpp"

#include <numeric>
#include <string>

#include "grower.hpp"
#include "windml/error.hpp"
#include "windml/parallel.hpp"
#include "windml/rng.hpp"

namespace windml::trees {

void ForestConfig::validate(std::size_t n_features) const {
  if (n_trees < 1) fail(ErrorKind::Config, "forest needs at least one tree");
  if (max_depth < 1) fail(ErrorKind::Config, "forest max_depth must be >= 1");
  if (n_features_per_split < 1 || n_features_per_split > n_features) {
    fail(ErrorKind::Config, "features per split " + std::to_string(n_features_per_split) + " not in [1, " +
                                std::to_string(n_features) + "]");
  }
}

ForestModel::ForestModel(std::vector<TreeModel> trees) : trees_(std::move(trees)) {
  if (trees_.empty()) fail(ErrorKind::Data, "forest has no trees");
  for (const auto& t : trees_) {
    if (t.n_features() != trees_.front().n_features()) fail(ErrorKind::Data, "forest trees disagree on feature count");
  }
}

std::size_t ForestModel::n_features() const { return trees_.empty() ? 0 : trees_.front().n_features(); }

double ForestModel::predict(std::span<const double> features) const {
  double sum = 0.0;
  for (const auto& t : trees_) sum += t.predict(features);
  return sum / static_cast<double>(trees_.size());
}

ForestModel rf_fit(const SampleSet& samples, const ForestConfig& cfg) {
  cfg.validate(samples.n_features());
  if (samples.empty()) fail(ErrorKind::EmptyInput, "rf_fit needs at least one sample");
  const detail::BinnedColumns cols(samples);
  detail::GrowParams params;
  params.max_depth = cfg.max_depth;
  params.features_per_split = cfg.n_features_per_split;

  const std::size_t n = samples.size();
  std::vector<TreeModel> trees(cfg.n_trees);
  parallel_for(cfg.n_trees, [&](std::size_t t) {
    Rng rng(cfg.seed, t);
    std::vector<std::uint32_t> rows(n);
    if (cfg.bootstrap) {
      for (auto& r : rows) r = static_cast<std::uint32_t>(rng.below(n));
    } else {
      std::iota(rows.begin(), rows.end(), std::uint32_t{0});
    }
    trees[t] = detail::grow_tree(cols, samples.targets(), std::move(rows), params, &rng);
  });
  return ForestModel(std::move(trees));
}

}  // namespace windml::trees
