#pragma once

#include <string_view>

#include "windml/core/types.hpp"
#include "windml/trees/boost.hpp"
#include "windml/trees/forest.hpp"
#include "windml/trees/tree.hpp"

namespace windml::trees {

// Tuned settings reported for the wind-tunnel database, one per target.

/// max_depth / max_leaf_nodes / min_samples_leaf: 20/20000/20 (mean), 25/25000/15 (rms).
TreeConfig dtr_preset(MapKind target);
/// n_trees / features per split / max_depth: 100/3/25 (mean), 150/3/25 (rms).
ForestConfig rf_preset(MapKind target);
/// gamma / learning rate / depth / subsample / trees: 0/0.1/10/0.66/200 (mean), 0/0.1/12/0.2/120 (rms).
BoostConfig xgb_preset(MapKind target);

}  // namespace windml::trees
