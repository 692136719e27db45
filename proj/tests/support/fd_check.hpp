#pragma once

// Central finite differences for scalar functions of a tensor.

#include <algorithm>
#include <cmath>
#include <functional>

#include "windml/nn/tensor.hpp"
#include "windml/rng.hpp"

namespace fdcheck {

using windml::nn::Tensor;

inline Tensor random_tensor(const windml::nn::Shape& shape, windml::Rng& rng, double scale = 1.0) {
  Tensor t(shape);
  for (auto& v : t.values()) v = scale * rng.uniform(-1.0, 1.0);
  return t;
}

/// Numerical gradient of f with respect to every entry of x (x is restored).
inline Tensor numeric_grad(Tensor& x, const std::function<double()>& f, double step = 1e-5) {
  Tensor g(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + step;
    const double up = f();
    x[i] = keep - step;
    const double down = f();
    x[i] = keep;
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

/// ||a - b|| / (||a|| + ||b||), 0 when both vanish.
inline double rel_error(const Tensor& a, const Tensor& b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double denom = std::sqrt(na) + std::sqrt(nb);
  return denom == 0.0 ? 0.0 : std::sqrt(diff) / denom;
}

/// <y, r>: a scalar probe whose gradient with respect to y is r.
inline double dot(const Tensor& y, const Tensor& r) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * r[i];
  return s;
}

}  // namespace fdcheck
