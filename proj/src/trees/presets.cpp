#include "windml/trees/presets.hpp"

namespace windml::trees {

TreeConfig dtr_preset(MapKind target) {
  if (target == MapKind::Mean) return {.max_depth = 20, .max_leaf_nodes = 20000, .min_samples_leaf = 20};
  return {.max_depth = 25, .max_leaf_nodes = 25000, .min_samples_leaf = 15};
}

ForestConfig rf_preset(MapKind target) {
  ForestConfig cfg;
  cfg.n_trees = target == MapKind::Mean ? 100 : 150;
  cfg.n_features_per_split = 3;
  cfg.max_depth = 25;
  cfg.bootstrap = true;
  return cfg;
}

BoostConfig xgb_preset(MapKind target) {
  BoostConfig cfg;
  cfg.gamma = 0.0;
  cfg.learning_rate = 0.1;
  if (target == MapKind::Mean) {
    cfg.max_depth = 10;
    cfg.subsample = 0.66;
    cfg.n_trees = 200;
  } else {
    cfg.max_depth = 12;
    cfg.subsample = 0.2;
    cfg.n_trees = 120;
  }
  // Library defaults of the reference boosting package.
  cfg.l1_reg = 0.0;
  cfg.l2_reg = 1.0;
  cfg.base_score = 0.5;
  return cfg;
}

}  // namespace windml::trees
