#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "windml/nn/ops.hpp"
#include "windml/nn/tensor.hpp"

namespace windml::nn {

/// Weights and biases drawn from Gaussian(0, 0.02), each tensor seeded from
/// (seed, tensor name).
struct DenseLayer {
  Param weight;  // (in, out)
  Param bias;    // (out)

  DenseLayer() = default;
  DenseLayer(const std::string& name, std::size_t in, std::size_t out, std::uint64_t seed);

  Tensor forward(const Tensor& x) const { return fully_connected(x, weight.value, bias.value); }
  Tensor backward(const Tensor& x, const Tensor& dy) {
    return fully_connected_backward(x, weight.value, dy, weight.grad, bias.grad);
  }
  std::size_t parameter_count() const { return weight.value.size() + bias.value.size(); }
  void collect(std::vector<Param*>& out) { out.push_back(&weight); out.push_back(&bias); }
};

struct ConvLayer {
  Param kernel;  // (out, in, k, k)
  Param bias;    // (out)

  ConvLayer() = default;
  ConvLayer(const std::string& name, std::size_t in, std::size_t out, std::size_t k, std::uint64_t seed);

  Tensor forward(const Tensor& x) const { return conv2d(x, kernel.value, bias.value); }
  Tensor backward(const Tensor& x, const Tensor& dy, bool need_input_grad = true) {
    return conv2d_backward(x, kernel.value, dy, {&kernel.grad, &bias.grad, need_input_grad});
  }
  /// Input gradient only; parameter gradients are not touched.
  Tensor backward_input(const Tensor& x, const Tensor& dy) const {
    return conv2d_backward(x, kernel.value, dy, {nullptr, nullptr, true});
  }
  std::size_t parameter_count() const { return kernel.value.size() + bias.value.size(); }
  void collect(std::vector<Param*>& out) { out.push_back(&kernel); out.push_back(&bias); }
};

std::uint64_t name_seed(std::uint64_t seed, const std::string& name);

}  // namespace windml::nn
