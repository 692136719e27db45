#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "windml/nn/tensor.hpp"

namespace windml::nn {

/// Bias-corrected Adam moments for a fixed list of parameters.
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t step = 0;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;

  AdamState() = default;
  explicit AdamState(std::span<Param* const> params);

  friend bool operator==(const AdamState&, const AdamState&) = default;
};

/// One Adam update of every param from its grad. Shape error if state and
/// params disagree. Gradients are left untouched.
void adam_step(std::span<Param* const> params, AdamState& state, double lr);

/// Seeded N(0, std^2) draws; std defaults to the 0.02 network initialization.
Tensor gaussian_init(const Shape& shape, std::uint64_t seed, double stddev = 0.02);

}  // namespace windml::nn
