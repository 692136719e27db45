#pragma once

// Batched forward/backward passes. Maps use the (1, N, 9, 28) layout.

#include <array>

#include "windml/gans/model.hpp"
#include "windml/nn/ops.hpp"

namespace windml::gans {

using MapStack = std::array<nn::Tensor, kSideMaps>;

struct StreamTrace {
  nn::Tensor encoder_pre;  // conv(M_0) before ReLU
  std::array<nn::Tensor, kSideMaps> features;  // f^0 .. f^5
  std::array<nn::Tensor, kResBlocks> block_pre;  // first conv of block i before ReLU
  std::array<nn::Tensor, kResBlocks> block_mid;  // after ReLU
  MapStack maps;  // M_0 .. M_5
};

struct GeneratorTrace {
  nn::Tensor input;  // (N, n_inputs)
  std::array<nn::Tensor, 5> trunk_pre;  // FC outputs before ReLU
  std::array<nn::Tensor, 5> trunk_act;
  nn::Tensor mean_pre, mean_act, rms_pre, rms_act;
  StreamTrace mean, rms;
};

GeneratorTrace generator_forward_batch(const Generator& g, const nn::Tensor& inputs);

/// Accumulates parameter gradients for upstream gradients on every side map.
void generator_backward(Generator& g, const GeneratorTrace& trace, const MapStack& d_mean, const MapStack& d_rms);

struct DiscTrace {
  nn::Tensor input;
  nn::Tensor pre1, act1, pre2, act2;
  nn::PoolResult pool;
  nn::Tensor pre3, act3;
  nn::Tensor logits;  // (1, N, 3, 7)
  nn::Tensor probs;
};

DiscTrace discriminator_forward_batch(const Discriminator& d, const nn::Tensor& maps);

/// Gradient with respect to the input maps, from an upstream gradient on the
/// logits. Adds parameter gradients only when accumulate_params is set.
nn::Tensor discriminator_backward(Discriminator& d, const DiscTrace& trace, const nn::Tensor& d_logits,
                                  bool accumulate_params);

}  // namespace windml::gans
