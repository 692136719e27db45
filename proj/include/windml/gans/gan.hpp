#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "windml/core/types.hpp"
#include "windml/gans/model.hpp"

namespace windml::gans {

using SideMaps = std::array<MapValues, kSideMaps>;

struct GeneratorOutput {
  SideMaps mean_side;  // M_0 .. M_5
  SideMaps rms_side;   // F_0 .. F_5
  const MapValues& mean() const { return mean_side.back(); }
  const MapValues& rms() const { return rms_side.back(); }
};

/// 3 x 7 patch probabilities, row-major.
using PatchProbMap = std::array<double, kPatches>;

struct LossBreakdown {
  double l_g_e = 0.0;
  double l_g_a = 0.0;
  double l_g = 0.0;
  double l_d_m = 0.0;
  double l_d_f = 0.0;
  double l_d = 0.0;
};

inline constexpr double kProbClamp = 1e-7;

GeneratorOutput generator_forward(const GanModel& model, const CaseCondition& cond);
PatchProbMap discriminator_forward(const Discriminator& disc, std::span<const double> map);

/// Side maps are stacks of six equal-length maps (any length, so toy maps
/// work). Probabilities are clamped to [1e-7, 1 - 1e-7]; values outside
/// [0, 1] or NaN are a Numeric error. Fills the generator fields only.
LossBreakdown generator_loss(std::span<const std::vector<double>> m_side, std::span<const std::vector<double>> f_side,
                             std::span<const double> m_target, std::span<const double> f_target,
                             std::span<const double> dm_out, std::span<const double> df_out, double alpha);
/// Fills the discriminator fields only.
LossBreakdown discriminator_loss(std::span<const double> d_real_m, std::span<const double> d_fake_m,
                                 std::span<const double> d_real_f, std::span<const double> d_fake_f);

/// Range error unless 0 <= epoch <= cfg.epochs.
double lr_schedule(std::size_t epoch, const GanConfig& cfg);

struct EpochRecord {
  std::size_t epoch = 0;
  double lr = 0.0;
  LossBreakdown loss;
};
using TrainHistory = std::vector<EpochRecord>;

void write_history_csv(const TrainHistory& history, std::ostream& os);

struct TrainResult {
  GanModel model;
  TrainHistory history;
};

/// Optional per-epoch observer (progress output); may be empty.
using EpochCallback = void (*)(const EpochRecord&, void*);

TrainResult train_gan(std::span<const CaseRecord> train_cases, const GanConfig& cfg, EpochCallback on_epoch = nullptr,
                      void* user = nullptr);
TrainResult train_gan(std::span<const CaseRecord* const> train_cases, const GanConfig& cfg,
                      EpochCallback on_epoch = nullptr, void* user = nullptr);

/// Batch of training targets plus the generator loss and its parameter
/// gradients (accumulated into the generator's grads) against frozen
/// discriminators. Exposed for gradient checks.
struct GeneratorStep {
  LossBreakdown loss;
};
GeneratorStep generator_loss_and_grads(GanModel& model, std::span<const CaseRecord* const> batch, double alpha);

/// Batch-mean discriminator losses on real targets against the current
/// generator's fakes; gradients are accumulated into both discriminators.
LossBreakdown discriminator_loss_and_grads(GanModel& model, std::span<const CaseRecord* const> batch);

/// (M_5, F_5); the rms map is clipped at 0 so it forms a valid PressureMap.
std::pair<PressureMap, PressureMap> gan_predict(const GanModel& model, const CaseCondition& cond);

}  // namespace windml::gans
