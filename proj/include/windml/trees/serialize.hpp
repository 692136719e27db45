#pragma once

#include <iosfwd>

#include "windml/trees/boost.hpp"
#include "windml/trees/forest.hpp"
#include "windml/trees/tree.hpp"

namespace windml::trees {

// Portable little-endian binary blobs, each prefixed with a type tag and a
// format version. Doubles are stored bit-exact.

void write_model(std::ostream& out, const TreeModel& model);
void write_model(std::ostream& out, const ForestModel& model);
void write_model(std::ostream& out, const BoostedModel& model);

TreeModel read_tree_model(std::istream& in);
ForestModel read_forest_model(std::istream& in);
BoostedModel read_boosted_model(std::istream& in);

}  // namespace windml::trees
