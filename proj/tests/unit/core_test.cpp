#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "windml/core/metrics.hpp"
#include "windml/core/types.hpp"
#include "windml/error.hpp"
#include "windml/rng.hpp"

using namespace windml;

namespace {
ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a windml::Error";
  return ErrorKind::Io;
}
}  // namespace

TEST(TapGrid, Corners) {
  EXPECT_EQ(tap_to_grid(0), (GridPos{0, 0}));
  EXPECT_EQ(tap_to_grid(251), (GridPos{8, 27}));
  EXPECT_EQ(tap_to_grid(29), (GridPos{1, 1}));
}

TEST(TapGrid, BijectionOverAllTaps) {
  for (std::size_t i = 0; i < tapgrid::kTaps; ++i) {
    const auto p = tap_to_grid(i);
    EXPECT_EQ(grid_to_tap(p.row, p.col), i);
  }
}

TEST(TapGrid, OutOfRange) {
  EXPECT_EQ(kind_of([] { tap_to_grid(252); }), ErrorKind::Range);
  EXPECT_EQ(kind_of([] { grid_to_tap(9, 0); }), ErrorKind::Range);
  EXPECT_EQ(kind_of([] { grid_to_tap(0, 28); }), ErrorKind::Range);
}

TEST(TapGrid, FaceOrdering) {
  EXPECT_EQ(face_of_column(0), Face::Front);
  EXPECT_EQ(face_of_column(7), Face::Right);
  EXPECT_EQ(face_of_column(14), Face::Back);
  EXPECT_EQ(face_of_column(27), Face::Left);
}

TEST(CaseCondition, ThetaNormalized) {
  EXPECT_DOUBLE_EQ(CaseCondition::make(1, 2, 365).theta, 5.0);
  EXPECT_DOUBLE_EQ(CaseCondition::make(1, 2, -10).theta, 350.0);
  EXPECT_DOUBLE_EQ(CaseCondition::make(1, 2, 360).theta, 0.0);
  EXPECT_EQ(kind_of([] { CaseCondition::make(std::nan(""), 0, 0); }), ErrorKind::Data);
}

TEST(PressureMap, RejectsBadValues) {
  MapValues v{};
  v[3] = -0.1;
  EXPECT_NO_THROW(PressureMap(MapKind::Mean, v));
  EXPECT_EQ(kind_of([&] { PressureMap(MapKind::Rms, v); }), ErrorKind::Data);
  v[3] = INFINITY;
  EXPECT_EQ(kind_of([&] { PressureMap(MapKind::Mean, v); }), ErrorKind::Data);
  std::vector<double> short_values(10, 0.0);
  EXPECT_EQ(kind_of([&] { PressureMap(MapKind::Mean, short_values); }), ErrorKind::Shape);
}

TEST(Dataset, DuplicateIdsRejected) {
  MapValues z{};
  CaseRecord a("a", CaseCondition::make(0, 0, 0), PressureMap(MapKind::Mean, z), PressureMap(MapKind::Rms, z));
  EXPECT_EQ(kind_of([&] { Dataset({a, a}, Provenance::Synthetic); }), ErrorKind::Data);
  EXPECT_EQ(kind_of([&] {
              CaseRecord("b", CaseCondition{}, PressureMap(MapKind::Rms, z), PressureMap(MapKind::Rms, z));
            }),
            ErrorKind::Data);
}

TEST(SeriesStats, Examples) {
  const std::vector<double> constant{0.5, 0.5, 0.5};
  auto s = stats_from_series(constant);
  EXPECT_DOUBLE_EQ(s.mean, 0.5);
  EXPECT_DOUBLE_EQ(s.rms, 0.0);

  const std::vector<double> pair{1.0, -1.0};
  s = stats_from_series(pair);
  EXPECT_DOUBLE_EQ(s.mean, 0.0);
  EXPECT_DOUBLE_EQ(s.rms, 1.0);

  const std::vector<double> ramp{1.0, 2.0, 3.0};
  s = stats_from_series(ramp);
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_NEAR(s.rms, std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(s.rms, 0.816497, 1e-6);
}

TEST(SeriesStats, Errors) {
  const std::vector<double> one{1.0};
  EXPECT_EQ(kind_of([&] { stats_from_series(one); }), ErrorKind::InsufficientSamples);
  const std::vector<double> bad{1.0, NAN};
  EXPECT_EQ(kind_of([&] { stats_from_series(bad); }), ErrorKind::Data);
}

TEST(SeriesStats, ShiftAndScaleEquivariance) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(2 + rng.below(40));
    for (auto& v : x) v = rng.uniform(-2, 2);
    const double c = rng.uniform(-3, 3);
    const auto base = stats_from_series(x);
    std::vector<double> shifted = x, scaled = x;
    for (auto& v : shifted) v += c;
    for (auto& v : scaled) v *= c;
    const auto sh = stats_from_series(shifted);
    const auto sc = stats_from_series(scaled);
    EXPECT_NEAR(sh.mean, base.mean + c, 1e-12);
    EXPECT_NEAR(sh.rms, base.rms, 1e-12);
    EXPECT_NEAR(sc.mean, base.mean * c, 1e-12);
    EXPECT_NEAR(sc.rms, base.rms * std::abs(c), 1e-12);
  }
}

TEST(Metrics, MseExamples) {
  const std::vector<double> a{0.0, 0.0}, b{1.0, 3.0};
  EXPECT_DOUBLE_EQ(mse(a, b), 5.0);
  EXPECT_DOUBLE_EQ(mse(b, b), 0.0);
  const std::vector<double> c{1.0};
  EXPECT_EQ(kind_of([&] { mse(a, c); }), ErrorKind::Shape);
}

TEST(Metrics, MseMatchesResummationAndIsSymmetric) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    MapValues p{}, t{};
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = rng.uniform(-1, 1);
      t[i] = rng.uniform(-1, 1);
    }
    long double acc = 0;
    for (std::size_t r = 0; r < 9; ++r)
      for (std::size_t c = 0; c < 28; ++c) {
        const long double d = static_cast<long double>(p[r * 28 + c]) - t[r * 28 + c];
        acc += d * d;
      }
    EXPECT_NEAR(mse(p, t), static_cast<double>(acc / 252), 1e-15);
    EXPECT_EQ(mse(p, t), mse(t, p));
    EXPECT_EQ(mse(p, p), 0.0);
  }
}

TEST(Metrics, R2Examples) {
  const std::vector<double> truth{1.0, 2.0}, pred{0.0, 2.0};
  EXPECT_DOUBLE_EQ(r2(truth, truth), 1.0);
  EXPECT_DOUBLE_EQ(r2(pred, truth), -1.0);
  const std::vector<double> mean_pred{1.5, 1.5};
  EXPECT_DOUBLE_EQ(r2(mean_pred, truth), 0.0);
  const std::vector<double> flat{2.0, 2.0};
  EXPECT_EQ(kind_of([&] { r2(pred, flat); }), ErrorKind::UndefinedVariance);
}

TEST(Metrics, R2Properties) {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> t(2 + rng.below(100)), p(t.size());
    for (auto& v : t) v = rng.uniform(-1, 1);
    for (auto& v : p) v = rng.uniform(-1, 1);
    EXPECT_LE(r2(p, t), 1.0);
    double mean = 0.0;
    for (double v : t) mean += v;
    mean /= static_cast<double>(t.size());
    std::vector<double> baseline(t.size(), mean);
    EXPECT_EQ(r2(baseline, t), 0.0);
  }
}
