#include "windml/trees/serialize.hpp"

#include <cereal/archives/portable_binary.hpp>
#include <cereal/types/string.hpp>
#include <cereal/types/vector.hpp>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "windml/error.hpp"

namespace windml::trees {

template <class Archive>
void serialize(Archive& ar, TreeNode& node) {
  ar(node.feature, node.left, node.right, node.threshold, node.value);
}

namespace {

constexpr std::uint32_t kFormatVersion = 1;

void write_tag(cereal::PortableBinaryOutputArchive& ar, const std::string& tag) {
  ar(tag, kFormatVersion);
}

void expect_tag(cereal::PortableBinaryInputArchive& ar, const std::string& tag) {
  std::string got;
  std::uint32_t version = 0;
  ar(got, version);
  if (got != tag) fail(ErrorKind::Parse, "expected model blob '" + tag + "', found '" + got + "'");
  if (version != kFormatVersion) fail(ErrorKind::Parse, "unsupported " + tag + " version " + std::to_string(version));
}

void put_tree(cereal::PortableBinaryOutputArchive& ar, const TreeModel& t) {
  ar(static_cast<std::uint64_t>(t.n_features()), t.nodes());
}

TreeModel get_tree(cereal::PortableBinaryInputArchive& ar) {
  std::uint64_t n_features = 0;
  std::vector<TreeNode> nodes;
  ar(n_features, nodes);
  return TreeModel(static_cast<std::size_t>(n_features), std::move(nodes));
}

template <typename Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const cereal::Exception& e) {
    fail(ErrorKind::Parse, std::string("truncated or corrupt model blob: ") + e.what());
  }
}

}  // namespace

void write_model(std::ostream& out, const TreeModel& model) {
  cereal::PortableBinaryOutputArchive ar(out);
  write_tag(ar, "tree");
  put_tree(ar, model);
}

void write_model(std::ostream& out, const ForestModel& model) {
  cereal::PortableBinaryOutputArchive ar(out);
  write_tag(ar, "forest");
  ar(static_cast<std::uint64_t>(model.trees().size()));
  for (const auto& t : model.trees()) put_tree(ar, t);
}

void write_model(std::ostream& out, const BoostedModel& model) {
  cereal::PortableBinaryOutputArchive ar(out);
  write_tag(ar, "boosted");
  ar(model.base_score(), model.learning_rate(), static_cast<std::uint64_t>(model.trees().size()));
  for (const auto& t : model.trees()) put_tree(ar, t);
}

TreeModel read_tree_model(std::istream& in) {
  return guarded([&] {
    cereal::PortableBinaryInputArchive ar(in);
    expect_tag(ar, "tree");
    return get_tree(ar);
  });
}

ForestModel read_forest_model(std::istream& in) {
  return guarded([&] {
    cereal::PortableBinaryInputArchive ar(in);
    expect_tag(ar, "forest");
    std::uint64_t n = 0;
    ar(n);
    std::vector<TreeModel> trees;
    trees.reserve(static_cast<std::size_t>(n));
    for (std::uint64_t i = 0; i < n; ++i) trees.push_back(get_tree(ar));
    return ForestModel(std::move(trees));
  });
}

BoostedModel read_boosted_model(std::istream& in) {
  return guarded([&] {
    cereal::PortableBinaryInputArchive ar(in);
    expect_tag(ar, "boosted");
    double base = 0.0;
    double lr = 0.0;
    std::uint64_t n = 0;
    ar(base, lr, n);
    std::vector<TreeModel> trees;
    trees.reserve(static_cast<std::size_t>(n));
    for (std::uint64_t i = 0; i < n; ++i) trees.push_back(get_tree(ar));
    return BoostedModel(base, lr, std::move(trees));
  });
}

}  // namespace windml::trees
