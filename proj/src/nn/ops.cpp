#include "windml/nn/ops.hpp"

#include <algorithm>
#include <cmath>

#include "gemm.hpp"
#include "windml/error.hpp"

namespace windml::nn {

namespace {

void require_rank(const Tensor& t, std::size_t rank, const char* what) {
  if (t.rank() != rank) {
    fail(ErrorKind::Shape, std::string(what) + " expects rank " + std::to_string(rank) + ", got shape " +
                               shape_string(t.shape()));
  }
}

using detail::gemm;

// Samples per im2col chunk: keeps the column buffer (ci*9 x chunk*H*W) in L2.
constexpr std::size_t kChunk = 2;

// Rows (ci, ky, kx), columns (n, h, w) for samples [n0, n0 + nc) of the
// zero-padded 3x3 neighbourhoods.
void im2col3(const Tensor& x, std::size_t n0, std::size_t nc, std::vector<double>& cols) {
  const std::size_t ci = x.dim(0), nb = x.dim(1), h = x.dim(2), w = x.dim(3);
  const std::size_t plane = h * w;
  const std::size_t q = nc * plane;
  cols.resize(ci * 9 * q);
  for (std::size_t c = 0; c < ci; ++c) {
    for (std::size_t ky = 0; ky < 3; ++ky) {
      for (std::size_t kx = 0; kx < 3; ++kx) {
        double* row = cols.data() + ((c * 9) + ky * 3 + kx) * q;
        for (std::size_t n = 0; n < nc; ++n) {
          const double* src = x.data() + (c * nb + n0 + n) * plane;
          double* dst = row + n * plane;
          for (std::size_t i = 0; i < h; ++i) {
            double* out = dst + i * w;
            const std::ptrdiff_t si = static_cast<std::ptrdiff_t>(i + ky) - 1;
            if (si < 0 || si >= static_cast<std::ptrdiff_t>(h)) {
              std::fill(out, out + w, 0.0);
              continue;
            }
            const double* in = src + static_cast<std::size_t>(si) * w;
            if (kx == 0) {
              out[0] = 0.0;
              std::copy(in, in + w - 1, out + 1);
            } else if (kx == 1) {
              std::copy(in, in + w, out);
            } else {
              std::copy(in + 1, in + w, out);
              out[w - 1] = 0.0;
            }
          }
        }
      }
    }
  }
}

void col2im3(const std::vector<double>& cols, std::size_t n0, std::size_t nc, Tensor& dx) {
  const std::size_t ci = dx.dim(0), nb = dx.dim(1), h = dx.dim(2), w = dx.dim(3);
  const std::size_t plane = h * w;
  const std::size_t q = nc * plane;
  for (std::size_t c = 0; c < ci; ++c) {
    for (std::size_t ky = 0; ky < 3; ++ky) {
      for (std::size_t kx = 0; kx < 3; ++kx) {
        const double* row = cols.data() + ((c * 9) + ky * 3 + kx) * q;
        for (std::size_t n = 0; n < nc; ++n) {
          double* dst = dx.data() + (c * nb + n0 + n) * plane;
          const double* src = row + n * plane;
          for (std::size_t i = 0; i < h; ++i) {
            const std::ptrdiff_t si = static_cast<std::ptrdiff_t>(i + ky) - 1;
            if (si < 0 || si >= static_cast<std::ptrdiff_t>(h)) continue;
            double* out = dst + static_cast<std::size_t>(si) * w;
            const double* in = src + i * w;
            if (kx == 0) {
              for (std::size_t j = 1; j < w; ++j) out[j - 1] += in[j];
            } else if (kx == 1) {
              for (std::size_t j = 0; j < w; ++j) out[j] += in[j];
            } else {
              for (std::size_t j = 0; j + 1 < w; ++j) out[j + 1] += in[j];
            }
          }
        }
      }
    }
  }
}

thread_local std::vector<double> tl_cols;
thread_local std::vector<double> tl_dcols;

std::size_t check_conv(const Tensor& x, const Tensor& kernel, const char* what) {
  require_rank(x, 4, what);
  require_rank(kernel, 4, "conv2d kernel");
  const std::size_t k = kernel.dim(2);
  if (kernel.dim(3) != k || (k != 1 && k != 3)) {
    fail(ErrorKind::Config, "conv2d supports 1x1 and 3x3 kernels, got " + shape_string(kernel.shape()));
  }
  if (kernel.dim(1) != x.dim(0)) {
    fail(ErrorKind::Shape, std::string(what) + ": kernel " + shape_string(kernel.shape()) + " vs input " +
                               shape_string(x.shape()));
  }
  return k;
}

}  // namespace

Tensor fully_connected(const Tensor& x, const Tensor& weight, const Tensor& bias) {
  require_rank(x, 2, "fully_connected input");
  require_rank(weight, 2, "fully_connected weight");
  require_rank(bias, 1, "fully_connected bias");
  const std::size_t nb = x.dim(0), n = x.dim(1), p = weight.dim(1);
  if (weight.dim(0) != n || bias.dim(0) != p) {
    fail(ErrorKind::Shape, "fully_connected: input " + shape_string(x.shape()) + ", weight " +
                               shape_string(weight.shape()) + ", bias " + shape_string(bias.shape()));
  }
  Tensor y({nb, p});
  for (std::size_t r = 0; r < nb; ++r) std::copy(bias.data(), bias.data() + p, y.data() + r * p);
  gemm(false, false, nb, p, n, x.data(), weight.data(), 1.0, y.data());
  return y;
}

Tensor fully_connected_backward(const Tensor& x, const Tensor& weight, const Tensor& dy, Tensor& dweight,
                                Tensor& dbias) {
  const std::size_t nb = x.dim(0), n = x.dim(1), p = weight.dim(1);
  if (dy.shape() != Shape{nb, p}) fail(ErrorKind::Shape, "fully_connected_backward: bad upstream gradient shape");
  require_same_shape(dweight, weight, "fully_connected_backward weight gradient");
  if (dbias.shape() != Shape{p}) fail(ErrorKind::Shape, "fully_connected_backward: bad bias gradient shape");
  gemm(true, false, n, p, nb, x.data(), dy.data(), 1.0, dweight.data());
  for (std::size_t r = 0; r < nb; ++r) {
    for (std::size_t j = 0; j < p; ++j) dbias[j] += dy[r * p + j];
  }
  Tensor dx({nb, n});
  gemm(false, true, nb, n, p, dy.data(), weight.data(), 0.0, dx.data());
  return dx;
}

Tensor conv2d(const Tensor& x, const Tensor& kernel, const Tensor& bias) {
  const std::size_t k = check_conv(x, kernel, "conv2d");
  const std::size_t co = kernel.dim(0), ci = x.dim(0);
  if (bias.shape() != Shape{co}) fail(ErrorKind::Shape, "conv2d: bias shape " + shape_string(bias.shape()));
  const std::size_t p = x.dim(1) * x.dim(2) * x.dim(3);
  Tensor y({co, x.dim(1), x.dim(2), x.dim(3)});
  for (std::size_t o = 0; o < co; ++o) std::fill(y.data() + o * p, y.data() + (o + 1) * p, bias[o]);
  if (k == 1) {
    gemm(false, false, co, p, ci, kernel.data(), x.data(), 1.0, y.data());
  } else {
    const std::size_t nb = x.dim(1), plane = x.dim(2) * x.dim(3), kk = ci * 9;
    for (std::size_t n0 = 0; n0 < nb; n0 += kChunk) {
      const std::size_t nc = std::min(kChunk, nb - n0);
      im2col3(x, n0, nc, tl_cols);
      gemm(false, false, co, nc * plane, kk, kernel.data(), kk, tl_cols.data(), nc * plane, 1.0,
           y.data() + n0 * plane, p);
    }
  }
  return y;
}

Tensor conv2d_backward(const Tensor& x, const Tensor& kernel, const Tensor& dy, const ConvGrads& grads) {
  const std::size_t k = check_conv(x, kernel, "conv2d_backward");
  const std::size_t co = kernel.dim(0), ci = x.dim(0);
  const std::size_t p = x.dim(1) * x.dim(2) * x.dim(3);
  if (dy.shape() != Shape{co, x.dim(1), x.dim(2), x.dim(3)}) {
    fail(ErrorKind::Shape, "conv2d_backward: upstream gradient shape " + shape_string(dy.shape()));
  }
  const std::size_t kk = ci * k * k;
  if (grads.dkernel) require_same_shape(*grads.dkernel, kernel, "conv2d_backward kernel gradient");
  if (grads.dbias) {
    if (grads.dbias->shape() != Shape{co}) fail(ErrorKind::Shape, "conv2d_backward: bias gradient shape");
    for (std::size_t o = 0; o < co; ++o) {
      double s = 0.0;
      const double* row = dy.data() + o * p;
      for (std::size_t i = 0; i < p; ++i) s += row[i];
      (*grads.dbias)[o] += s;
    }
  }
  Tensor dx;
  if (grads.need_input_grad) dx = Tensor(x.shape());
  if (k == 1) {
    if (grads.dkernel) gemm(false, true, co, kk, p, dy.data(), x.data(), 1.0, grads.dkernel->data());
    if (grads.need_input_grad) gemm(true, false, ci, p, co, kernel.data(), dy.data(), 0.0, dx.data());
    return dx;
  }
  const std::size_t nb = x.dim(1), plane = x.dim(2) * x.dim(3);
  for (std::size_t n0 = 0; n0 < nb; n0 += kChunk) {
    const std::size_t nc = std::min(kChunk, nb - n0);
    const std::size_t q = nc * plane;
    const double* dy_chunk = dy.data() + n0 * plane;
    if (grads.dkernel) {
      im2col3(x, n0, nc, tl_cols);
      gemm(false, true, co, kk, q, dy_chunk, p, tl_cols.data(), q, 1.0, grads.dkernel->data(), kk);
    }
    if (grads.need_input_grad) {
      tl_dcols.resize(kk * q);
      gemm(true, false, kk, q, co, kernel.data(), kk, dy_chunk, p, 0.0, tl_dcols.data(), q);
      col2im3(tl_dcols, n0, nc, dx);
    }
  }
  return dx;
}

PoolResult maxpool(const Tensor& x, std::size_t wh, std::size_t ww) {
  require_rank(x, 4, "maxpool");
  const std::size_t c = x.dim(0), nb = x.dim(1), h = x.dim(2), w = x.dim(3);
  if (wh == 0 || ww == 0 || h % wh != 0 || w % ww != 0) {
    fail(ErrorKind::Shape, "maxpool window " + std::to_string(wh) + "x" + std::to_string(ww) +
                               " does not tile input " + shape_string(x.shape()));
  }
  const std::size_t oh = h / wh, ow = w / ww;
  PoolResult out{Tensor({c, nb, oh, ow}), std::vector<std::uint32_t>(c * nb * oh * ow)};
  std::size_t o = 0;
  for (std::size_t plane = 0; plane < c * nb; ++plane) {
    const std::size_t base = plane * h * w;
    for (std::size_t i = 0; i < oh; ++i) {
      for (std::size_t j = 0; j < ow; ++j, ++o) {
        std::size_t best = base + i * wh * w + j * ww;
        for (std::size_t a = 0; a < wh; ++a) {
          for (std::size_t b = 0; b < ww; ++b) {
            const std::size_t idx = base + (i * wh + a) * w + j * ww + b;
            if (x[idx] > x[best]) best = idx;
          }
        }
        out.output[o] = x[best];
        out.argmax[o] = static_cast<std::uint32_t>(best);
      }
    }
  }
  return out;
}

Tensor maxpool_backward(const Shape& input_shape, const std::vector<std::uint32_t>& argmax, const Tensor& dy) {
  if (argmax.size() != dy.size()) fail(ErrorKind::Shape, "maxpool_backward: argmax/gradient size mismatch");
  Tensor dx(input_shape);
  for (std::size_t o = 0; o < dy.size(); ++o) {
    if (argmax[o] >= dx.size()) fail(ErrorKind::Shape, "maxpool_backward: argmax outside input");
    dx[argmax[o]] += dy[o];
  }
  return dx;
}

Tensor relu(const Tensor& x) {
  Tensor y = x;
  for (auto& v : y.values()) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor relu_backward(const Tensor& x, const Tensor& dy) {
  require_same_shape(x, dy, "relu_backward");
  Tensor dx(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) dx[i] = x[i] > 0.0 ? dy[i] : 0.0;
  return dx;
}

Tensor leaky_relu(const Tensor& x, double slope) {
  Tensor y = x;
  for (auto& v : y.values()) v = v > 0.0 ? v : slope * v;
  return y;
}

Tensor leaky_relu_backward(const Tensor& x, const Tensor& dy, double slope) {
  require_same_shape(x, dy, "leaky_relu_backward");
  Tensor dx(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) dx[i] = x[i] > 0.0 ? dy[i] : slope * dy[i];
  return dx;
}

Tensor sigmoid(const Tensor& x) {
  Tensor y = x;
  for (auto& v : y.values()) {
    // Split by sign so exp never overflows.
    if (v >= 0.0) {
      v = 1.0 / (1.0 + std::exp(-v));
    } else {
      const double e = std::exp(v);
      v = e / (1.0 + e);
    }
  }
  return y;
}

Tensor sigmoid_backward(const Tensor& y, const Tensor& dy) {
  require_same_shape(y, dy, "sigmoid_backward");
  Tensor dx(y.shape());
  for (std::size_t i = 0; i < y.size(); ++i) dx[i] = dy[i] * y[i] * (1.0 - y[i]);
  return dx;
}

void add_inplace(Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add_inplace");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

void set_blas_threads(int n) { detail::gemm_set_threads(n); }

std::string gemm_backend() { return detail::gemm_backend(); }

}  // namespace windml::nn
