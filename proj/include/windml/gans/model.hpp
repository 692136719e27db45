#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "windml/core/types.hpp"
#include "windml/nn/layers.hpp"

namespace windml::gans {

inline constexpr std::size_t kResBlocks = 5;
inline constexpr std::size_t kSideMaps = kResBlocks + 1;  // M_0 .. M_5
inline constexpr std::size_t kFeatures = 32;
inline constexpr std::size_t kPatchRows = 3;
inline constexpr std::size_t kPatchCols = 7;
inline constexpr std::size_t kPatches = kPatchRows * kPatchCols;
inline constexpr std::size_t kPoolH = 3;
inline constexpr std::size_t kPoolW = 4;

struct GanConfig {
  double alpha = 100.0;
  std::size_t batch_size = 32;
  std::size_t epochs = 2000;
  double lr0 = 1e-4;
  std::size_t decay_start_epoch = 1000;
  std::uint64_t seed = 0;
  /// Feed (sx, sy, sin theta, cos theta) instead of raw theta.
  bool sincos_theta = false;

  /// Config error on alpha < 0, zero batch/epochs, lr0 <= 0, or
  /// decay_start_epoch > epochs.
  void validate() const;
  std::size_t n_inputs() const { return sincos_theta ? 4 : 3; }

  friend bool operator==(const GanConfig&, const GanConfig&) = default;
};

/// Per-input min/max of the training conditions, mapped onto [-1, 1].
struct InputNormalization {
  std::vector<double> lo;
  std::vector<double> hi;

  static InputNormalization fit(std::span<const CaseCondition> conditions, bool sincos_theta);
  /// Raw network inputs for a condition (before scaling).
  static std::vector<double> raw_inputs(const CaseCondition& cond, bool sincos_theta);
  /// Scaled inputs; a constant training input maps to 0.
  std::vector<double> apply(const CaseCondition& cond, bool sincos_theta) const;

  friend bool operator==(const InputNormalization&, const InputNormalization&) = default;
};

struct ResBlock {
  nn::ConvLayer first;
  nn::ConvLayer second;
};

/// Local refinement of one stream: encoder, residual blocks, side outputs.
struct RefineStream {
  nn::ConvLayer encoder;
  std::array<ResBlock, kResBlocks> blocks;
  std::array<nn::ConvLayer, kResBlocks> side;
};

struct Generator {
  std::array<nn::DenseLayer, 5> trunk;  // n_inputs -> 64 -> 128 -> 256 -> 512 -> 1024
  nn::DenseLayer mean_hidden, mean_out;  // 1024 -> 512 -> 252
  nn::DenseLayer rms_hidden, rms_out;
  RefineStream mean_stream;
  RefineStream rms_stream;

  std::vector<nn::Param*> params();
  std::size_t trunk_parameter_count() const;
};

struct Discriminator {
  nn::ConvLayer conv1, conv2, conv3, head;

  std::vector<nn::Param*> params();
};

struct GanModel {
  GanConfig config;
  InputNormalization normalization;
  Generator generator;
  Discriminator mean_disc;
  Discriminator rms_disc;

  GanModel() = default;
  /// Fresh Gaussian-initialized networks seeded from config.seed.
  GanModel(const GanConfig& config, InputNormalization normalization);

  std::vector<nn::Param*> generator_params() { return generator.params(); }
  std::vector<nn::Param*> discriminator_params();
  /// Every tensor in a fixed order (generator, mean disc, rms disc).
  std::vector<nn::Param*> all_params();
};

std::size_t parameter_count(std::span<nn::Param* const> params);

}  // namespace windml::gans
