#include "windml/nn/optim.hpp"

#include <cmath>

#include "windml/error.hpp"
#include "windml/rng.hpp"

namespace windml::nn {

AdamState::AdamState(std::span<Param* const> params) {
  first_moment.reserve(params.size());
  second_moment.reserve(params.size());
  for (const Param* p : params) {
    first_moment.emplace_back(p->value.shape());
    second_moment.emplace_back(p->value.shape());
  }
}

void adam_step(std::span<Param* const> params, AdamState& state, double lr) {
  if (state.first_moment.size() != params.size() || state.second_moment.size() != params.size()) {
    fail(ErrorKind::Shape, "adam_step: optimizer state tracks " + std::to_string(state.first_moment.size()) +
                               " tensors, given " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    require_same_shape(params[i]->value, params[i]->grad, "adam_step gradient");
    require_same_shape(params[i]->value, state.first_moment[i], "adam_step moment");
    require_same_shape(params[i]->value, state.second_moment[i], "adam_step moment");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& w = params[i]->value;
    const Tensor& g = params[i]->grad;
    Tensor& m = state.first_moment[i];
    Tensor& v = state.second_moment[i];
    for (std::size_t j = 0; j < w.size(); ++j) {
      m[j] = state.beta1 * m[j] + (1.0 - state.beta1) * g[j];
      v[j] = state.beta2 * v[j] + (1.0 - state.beta2) * g[j] * g[j];
      const double mhat = m[j] / c1;
      const double vhat = v[j] / c2;
      w[j] -= lr * mhat / (std::sqrt(vhat) + state.eps);
    }
  }
}

Tensor gaussian_init(const Shape& shape, std::uint64_t seed, double stddev) {
  Tensor t(shape);
  Rng rng(seed);
  for (auto& v : t.values()) v = stddev * rng.normal();
  return t;
}

}  // namespace windml::nn
