#include <gtest/gtest.h>

#include <cmath>

#include "support/fd_check.hpp"
#include "windml/error.hpp"
#include "windml/nn/layers.hpp"
#include "windml/nn/ops.hpp"
#include "windml/nn/optim.hpp"

using namespace windml;
using namespace windml::nn;
using fdcheck::dot;
using fdcheck::numeric_grad;
using fdcheck::random_tensor;
using fdcheck::rel_error;

namespace {

Tensor map_tensor(std::size_t c, std::size_t h, std::size_t w, std::vector<double> v) {
  return Tensor({c, 1, h, w}, std::move(v));
}

}  // namespace

TEST(FullyConnected, IdentityWeights) {
  Tensor x({1, 3}, {1.5, -2.0, 0.25});
  Tensor w({3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  EXPECT_EQ(fully_connected(x, w, Tensor({3})), x);
}

TEST(FullyConnected, DirectArithmetic) {
  const Tensor y = fully_connected(Tensor({1, 2}, {1, 1}), Tensor({2, 1}, {1, 1}), Tensor({1}, {1}));
  ASSERT_EQ(y.size(), 1u);
  EXPECT_DOUBLE_EQ(y[0], 3.0);
}

TEST(FullyConnected, ShapeMismatch) {
  try {
    fully_connected(Tensor({1, 2}), Tensor({3, 1}), Tensor({1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Shape);
  }
  EXPECT_THROW(fully_connected(Tensor({1, 2}), Tensor({2, 1}), Tensor({2})), Error);
}

TEST(FullyConnected, GradientsMatchFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    Rng rng(seed);
    const std::size_t nb = 1 + rng.below(3), n = 1 + rng.below(8), p = 1 + rng.below(8);
    Tensor x = random_tensor({nb, n}, rng), w = random_tensor({n, p}, rng), b = random_tensor({p}, rng);
    const Tensor r = random_tensor({nb, p}, rng);
    auto loss = [&] { return dot(fully_connected(x, w, b), r); };
    Tensor dw(w.shape()), db(b.shape());
    const Tensor dx = fully_connected_backward(x, w, r, dw, db);
    ASSERT_LT(rel_error(dx, numeric_grad(x, loss)), 1e-4) << seed;
    ASSERT_LT(rel_error(dw, numeric_grad(w, loss)), 1e-4) << seed;
    ASSERT_LT(rel_error(db, numeric_grad(b, loss)), 1e-4) << seed;
  }
}

TEST(FullyConnected, BackwardAccumulates) {
  Rng rng(3);
  Tensor x = random_tensor({2, 3}, rng), w = random_tensor({3, 2}, rng);
  const Tensor r = random_tensor({2, 2}, rng);
  Tensor dw1(w.shape()), db1({2}), dw2(w.shape()), db2({2});
  fully_connected_backward(x, w, r, dw1, db1);
  fully_connected_backward(x, w, r, dw2, db2);
  fully_connected_backward(x, w, r, dw2, db2);
  for (std::size_t i = 0; i < dw1.size(); ++i) EXPECT_DOUBLE_EQ(dw2[i], 2 * dw1[i]);
  for (std::size_t i = 0; i < db1.size(); ++i) EXPECT_DOUBLE_EQ(db2[i], 2 * db1[i]);
}

TEST(Conv2d, IdentityKernel) {
  Rng rng(1);
  const Tensor x = random_tensor({1, 1, 9, 28}, rng);
  Tensor k({1, 1, 3, 3});
  k[4] = 1.0;
  EXPECT_EQ(conv2d(x, k, Tensor({1})), x);
}

TEST(Conv2d, OnesKernelWindowSums) {
  const Tensor y = conv2d(map_tensor(1, 3, 3, std::vector<double>(9, 1.0)), Tensor({1, 1, 3, 3}, 1.0), Tensor({1}));
  const std::vector<double> expect{4, 6, 4, 6, 9, 6, 4, 6, 4};
  for (std::size_t i = 0; i < 9; ++i) EXPECT_DOUBLE_EQ(y[i], expect[i]) << i;
}

// Brute-force zero-padded cross-correlation.
TEST(Conv2d, MatchesDirectLoops) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed + 100);
    const std::size_t ci = 1 + rng.below(3), co = 1 + rng.below(3), nb = 1 + rng.below(2);
    const std::size_t h = 1 + rng.below(5), w = 1 + rng.below(5);
    const Tensor x = random_tensor({ci, nb, h, w}, rng), k = random_tensor({co, ci, 3, 3}, rng);
    const Tensor b = random_tensor({co}, rng);
    const Tensor y = conv2d(x, k, b);
    for (std::size_t o = 0; o < co; ++o)
      for (std::size_t n = 0; n < nb; ++n)
        for (std::size_t i = 0; i < h; ++i)
          for (std::size_t j = 0; j < w; ++j) {
            double s = b[o];
            for (std::size_t c = 0; c < ci; ++c)
              for (int a = -1; a <= 1; ++a)
                for (int d = -1; d <= 1; ++d) {
                  const long si = static_cast<long>(i) + a, sj = static_cast<long>(j) + d;
                  if (si < 0 || sj < 0 || si >= static_cast<long>(h) || sj >= static_cast<long>(w)) continue;
                  s += k[((o * ci + c) * 3 + (a + 1)) * 3 + (d + 1)] *
                       x[((c * nb + n) * h + static_cast<std::size_t>(si)) * w + static_cast<std::size_t>(sj)];
                }
            ASSERT_NEAR(y[((o * nb + n) * h + i) * w + j], s, 1e-12);
          }
  }
}

TEST(Conv2d, UnsupportedKernelSize) {
  try {
    conv2d(Tensor({1, 1, 5, 5}), Tensor({1, 1, 5, 5}), Tensor({1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
  EXPECT_THROW(conv2d(Tensor({2, 1, 5, 5}), Tensor({1, 1, 3, 3}), Tensor({1})), Error);
}

TEST(Conv2d, ZeroKernelGivesZeros) {
  Rng rng(5);
  for (std::size_t k : {1u, 3u}) {
    const Tensor y = conv2d(random_tensor({4, 2, 9, 28}, rng), Tensor({3, 4, k, k}), Tensor({3}));
    for (const double v : y.values()) EXPECT_EQ(v, 0.0);
  }
}

TEST(Conv2d, GradientsMatchFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 110; ++seed) {
    Rng rng(seed + 7);
    const std::size_t k = rng.below(2) ? 3 : 1;
    const std::size_t ci = 1 + rng.below(3), co = 1 + rng.below(3), nb = 1 + rng.below(2);
    const std::size_t h = 1 + rng.below(5), w = 1 + rng.below(6);
    Tensor x = random_tensor({ci, nb, h, w}, rng), ker = random_tensor({co, ci, k, k}, rng);
    Tensor b = random_tensor({co}, rng);
    const Tensor r = random_tensor({co, nb, h, w}, rng);
    auto loss = [&] { return dot(conv2d(x, ker, b), r); };
    Tensor dk(ker.shape()), db(b.shape());
    const Tensor dx = conv2d_backward(x, ker, r, {&dk, &db, true});
    ASSERT_LT(rel_error(dx, numeric_grad(x, loss)), 1e-4) << seed;
    ASSERT_LT(rel_error(dk, numeric_grad(ker, loss)), 1e-4) << seed;
    ASSERT_LT(rel_error(db, numeric_grad(b, loss)), 1e-4) << seed;
  }
}

TEST(Conv2d, ForwardIsPure) {
  Rng rng(9);
  const Tensor x = random_tensor({3, 4, 9, 28}, rng), k = random_tensor({5, 3, 3, 3}, rng);
  const Tensor b = random_tensor({5}, rng);
  EXPECT_EQ(conv2d(x, k, b), conv2d(x, k, b));
}

TEST(MaxPool, TapGridShape) {
  const PoolResult r = maxpool(Tensor({2, 3, 9, 28}), 3, 4);
  EXPECT_EQ(r.output.shape(), (Shape{2, 3, 3, 7}));
}

TEST(MaxPool, ConstantInput) {
  const PoolResult r = maxpool(Tensor({1, 1, 9, 28}, -1.25), 3, 4);
  for (const double v : r.output.values()) EXPECT_EQ(v, -1.25);
}

TEST(MaxPool, SingleMaximum) {
  Tensor x({1, 1, 9, 28});
  x[0] = 5.0;
  const PoolResult r = maxpool(x, 3, 4);
  EXPECT_EQ(r.output[0], 5.0);
  for (std::size_t i = 1; i < r.output.size(); ++i) EXPECT_EQ(r.output[i], 0.0);
}

TEST(MaxPool, IndivisibleDims) {
  try {
    maxpool(Tensor({1, 1, 8, 28}), 3, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Shape);
  }
  EXPECT_THROW(maxpool(Tensor({1, 1, 9, 27}), 3, 4), Error);
}

TEST(MaxPool, BackwardRoutesToFirstMaximum) {
  const PoolResult r = maxpool(Tensor({1, 1, 3, 4}, 2.0), 3, 4);
  const Tensor dx = maxpool_backward({1, 1, 3, 4}, r.argmax, Tensor({1, 1, 1, 1}, 7.0));
  EXPECT_EQ(dx[0], 7.0);
  for (std::size_t i = 1; i < dx.size(); ++i) EXPECT_EQ(dx[i], 0.0);
}

TEST(MaxPool, GradientsMatchFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed + 11);
    const std::size_t c = 1 + rng.below(3), nb = 1 + rng.below(2);
    // Shuffled, evenly spaced values: no two entries within the probe step.
    Tensor x({c, nb, 9, 28});
    std::vector<double> levels(x.size());
    for (std::size_t i = 0; i < levels.size(); ++i) levels[i] = 0.01 * static_cast<double>(i);
    rng.shuffle(std::span<double>(levels));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = levels[i];
    const Tensor r = random_tensor({c, nb, 3, 7}, rng);
    auto loss = [&] { return dot(maxpool(x, 3, 4).output, r); };
    const PoolResult p = maxpool(x, 3, 4);
    ASSERT_LT(rel_error(maxpool_backward(x.shape(), p.argmax, r), numeric_grad(x, loss)), 1e-4) << seed;
  }
}

TEST(Activations, Values) {
  const Tensor y = relu(Tensor({2}, {-1.0, 2.0}));
  EXPECT_EQ(y[0], 0.0);
  EXPECT_EQ(y[1], 2.0);
  EXPECT_EQ(sigmoid(Tensor({1}, {0.0}))[0], 0.5);
  EXPECT_DOUBLE_EQ(leaky_relu(Tensor({1}, {-2.0}))[0], -0.4);
  EXPECT_EQ(relu_backward(Tensor({1}, {0.0}), Tensor({1}, {1.0}))[0], 0.0);
  const Tensor s = sigmoid(Tensor({2}, {-800.0, 800.0}));
  EXPECT_TRUE(std::isfinite(s[0]));
  EXPECT_EQ(s[1], 1.0);
}

TEST(Activations, GradientsMatchFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed + 13);
    Tensor x = random_tensor({1 + rng.below(20)}, rng, 3.0);
    for (auto& v : x.values()) {
      if (std::abs(v) < 1e-3) v = 0.5;  // keep away from the kink
    }
    const Tensor r = random_tensor(x.shape(), rng);
    auto lr = [&] { return dot(relu(x), r); };
    auto ll = [&] { return dot(leaky_relu(x), r); };
    auto ls = [&] { return dot(sigmoid(x), r); };
    ASSERT_LT(rel_error(relu_backward(x, r), numeric_grad(x, lr)), 1e-4);
    ASSERT_LT(rel_error(leaky_relu_backward(x, r), numeric_grad(x, ll)), 1e-4);
    ASSERT_LT(rel_error(sigmoid_backward(sigmoid(x), r), numeric_grad(x, ls)), 1e-4);
  }
}

TEST(Adam, ZeroGradientLeavesParams) {
  Param p("w", Tensor({3}, {1.0, -2.0, 3.0}));
  Param* ps[] = {&p};
  AdamState st(ps);
  const Tensor before = p.value;
  for (int i = 0; i < 5; ++i) adam_step(ps, st, 1e-3);
  EXPECT_EQ(p.value, before);
  EXPECT_EQ(st.step, 5u);
}

TEST(Adam, FirstStepClosedForm) {
  for (const double g : {1.0, -3.0}) {
    Param p("w", Tensor({1}, {0.0}));
    p.grad[0] = g;
    Param* ps[] = {&p};
    AdamState st(ps);
    adam_step(ps, st, 1e-4);
    const double expect = -std::copysign(1e-4 * std::abs(g) / (std::abs(g) + 1e-8), g);
    EXPECT_NEAR(p.value[0], expect, 1e-18);
    EXPECT_NEAR(std::abs(p.value[0]), 1e-4, 1e-11);
  }
}

// Second step against the textbook recurrence written out by hand.
TEST(Adam, SecondStepRecurrence) {
  Param p("w", Tensor({1}, {0.5}));
  Param* ps[] = {&p};
  AdamState st(ps);
  p.grad[0] = 2.0;
  adam_step(ps, st, 0.1);
  p.grad[0] = -1.0;
  adam_step(ps, st, 0.1);
  const double m1 = 0.1 * 2.0, v1 = 0.001 * 4.0;
  const double w1 = 0.5 - 0.1 * (m1 / 0.1) / (std::sqrt(v1 / 0.001) + 1e-8);
  const double m2 = 0.9 * m1 + 0.1 * -1.0, v2 = 0.999 * v1 + 0.001 * 1.0;
  const double c1 = 1 - 0.81, c2 = 1 - 0.999 * 0.999;
  const double w2 = w1 - 0.1 * (m2 / c1) / (std::sqrt(v2 / c2) + 1e-8);
  EXPECT_NEAR(p.value[0], w2, 1e-15);
}

TEST(Adam, ShapeMismatch) {
  Param p("w", Tensor({2}));
  Param q("v", Tensor({3}));
  Param* one[] = {&p};
  Param* two[] = {&p, &q};
  AdamState st(one);
  try {
    adam_step(two, st, 1e-3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Shape);
  }
}

TEST(GaussianInit, Deterministic) {
  EXPECT_EQ(gaussian_init({4, 5}, 42), gaussian_init({4, 5}, 42));
  EXPECT_NE(gaussian_init({4, 5}, 42), gaussian_init({4, 5}, 43));
}

TEST(GaussianInit, Moments) {
  const Tensor t = gaussian_init({100000}, 7);
  double s = 0.0;
  for (const double v : t.values()) s += v;
  const double mean = s / static_cast<double>(t.size());
  double ss = 0.0;
  for (const double v : t.values()) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(t.size()));
  EXPECT_NEAR(mean, 0.0, 0.0005);
  EXPECT_NEAR(sd, 0.02, 0.001);
}

TEST(Layers, ParameterShapes) {
  const DenseLayer d("fc", 3, 64, 1);
  EXPECT_EQ(d.weight.value.shape(), (Shape{3, 64}));
  EXPECT_EQ(d.parameter_count(), 3u * 64 + 64);
  const ConvLayer c("conv", 1, 32, 3, 1);
  EXPECT_EQ(c.kernel.value.shape(), (Shape{32, 1, 3, 3}));
  EXPECT_EQ(c.parameter_count(), 320u);
  EXPECT_NE(c.bias.value, Tensor({32}));
  EXPECT_NE(DenseLayer("a", 2, 2, 1).weight.value, DenseLayer("b", 2, 2, 1).weight.value);
}

TEST(Tensor, ReshapeChecksCount) {
  EXPECT_THROW(Tensor({2, 3}).reshaped({5}), Error);
  EXPECT_EQ(Tensor({2, 3}, 1.0).reshaped({6}).shape(), (Shape{6}));
}
