#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "windml/nn/tensor.hpp"

namespace windml::nn {

// Forward ops return fresh tensors. Backward ops take the forward inputs and
// the upstream gradient, return the input gradient, and ADD parameter
// gradients into the supplied accumulators.

/// x: (N, n), weight: (n, p), bias: (p) -> (N, p); y = x W + b.
Tensor fully_connected(const Tensor& x, const Tensor& weight, const Tensor& bias);
Tensor fully_connected_backward(const Tensor& x, const Tensor& weight, const Tensor& dy, Tensor& dweight,
                                Tensor& dbias);

/// x: (C_in, N, H, W), kernel: (C_out, C_in, k, k) with k in {1, 3},
/// bias: (C_out). Cross-correlation with zero "same" padding.
Tensor conv2d(const Tensor& x, const Tensor& kernel, const Tensor& bias);

struct ConvGrads {
  Tensor* dkernel = nullptr;  // null: skip parameter gradients
  Tensor* dbias = nullptr;
  bool need_input_grad = true;
};
Tensor conv2d_backward(const Tensor& x, const Tensor& kernel, const Tensor& dy, const ConvGrads& grads);

/// Non-overlapping max pooling over (C, N, H, W); H and W must divide evenly.
struct PoolResult {
  Tensor output;
  std::vector<std::uint32_t> argmax;  // flat input index per output element
};
PoolResult maxpool(const Tensor& x, std::size_t window_h, std::size_t window_w);
/// Routes each output gradient to its argmax (first maximum on ties).
Tensor maxpool_backward(const Shape& input_shape, const std::vector<std::uint32_t>& argmax, const Tensor& dy);

Tensor relu(const Tensor& x);
/// Derivative taken as 0 at x = 0.
Tensor relu_backward(const Tensor& x, const Tensor& dy);
Tensor leaky_relu(const Tensor& x, double slope = 0.2);
Tensor leaky_relu_backward(const Tensor& x, const Tensor& dy, double slope = 0.2);
Tensor sigmoid(const Tensor& x);
/// Takes the sigmoid OUTPUT y.
Tensor sigmoid_backward(const Tensor& y, const Tensor& dy);

/// a += b elementwise.
void add_inplace(Tensor& a, const Tensor& b);

/// Caps BLAS worker threads (results stay deterministic for a fixed count).
void set_blas_threads(int n);
/// Matrix-product backend in use: "openblas" (loaded at first use and
/// checked against a reference product) or the "eigen" fallback.
std::string gemm_backend();

}  // namespace windml::nn
