#pragma once

#include <filesystem>
#include <iosfwd>

#include "windml/eval/surrogate.hpp"

namespace windml::eval {

/// Split parameters the model was trained under, so a saved model can be
/// re-evaluated on the same test cases.
struct TrainContext {
  double portion = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t n_set_aside = 6;

  friend bool operator==(const TrainContext&, const TrainContext&) = default;
};

struct ModelFile {
  Surrogate model;
  TrainContext context;
};

/// Tagged container: family, config echo, context, then the family's model
/// blobs. Byte-identical for identical models.
void write_model_file(std::ostream& out, const Surrogate& model, const TrainContext& ctx);
void write_model_file(const std::filesystem::path& path, const Surrogate& model, const TrainContext& ctx);
ModelFile read_model_file(std::istream& in);
ModelFile read_model_file(const std::filesystem::path& path);

}  // namespace windml::eval
