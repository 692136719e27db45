#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "windml/core/types.hpp"
#include "windml/gans/model.hpp"
#include "windml/trees/boost.hpp"
#include "windml/trees/forest.hpp"
#include "windml/trees/tree.hpp"

namespace windml::eval {

enum class Family { Dtr, Rf, Xgb, Gan };

std::string_view to_string(Family f);
/// Accepts dtr, rf, xgb, gan; Argument error otherwise.
Family parse_family(std::string_view name);

/// Hyperparameters for every family. Tree families fit one model per target
/// and so carry a config per target; the GAN predicts both maps at once.
struct SurrogateConfig {
  Family family = Family::Dtr;
  trees::TreeConfig dtr_mean, dtr_rms;
  trees::ForestConfig rf_mean, rf_rms;
  trees::BoostConfig xgb_mean, xgb_rms;
  gans::GanConfig gan;

  /// Per-target tuned settings for each tree family, default GAN settings.
  static SurrogateConfig defaults(Family family);
  /// Re-seeds every stochastic component from one run seed.
  void reseed(std::uint64_t seed);
  void validate() const;

  friend bool operator==(const SurrogateConfig&, const SurrogateConfig&) = default;
};

/// Named presets: dtr-mean, dtr-rms, rf-mean, rf-rms, xgb-mean, xgb-rms
/// (that target's tuned setting applied to both targets) and gan-default.
/// A bare family name gives SurrogateConfig::defaults. Argument error on
/// unknown names.
SurrogateConfig preset_config(std::string_view name);
std::vector<std::string> preset_names();

/// GAN config with a different epoch budget; the decay start keeps its
/// fraction of the schedule.
gans::GanConfig with_epoch_budget(gans::GanConfig cfg, std::size_t epochs);

/// A trained model for one family.
class Surrogate {
 public:
  using TreePair = std::pair<trees::TreeModel, trees::TreeModel>;
  using ForestPair = std::pair<trees::ForestModel, trees::ForestModel>;
  using BoostPair = std::pair<trees::BoostedModel, trees::BoostedModel>;
  using Models = std::variant<TreePair, ForestPair, BoostPair, gans::GanModel>;

  Surrogate(SurrogateConfig config, Models models);

  Family family() const noexcept { return config_.family; }
  const SurrogateConfig& config() const noexcept { return config_; }
  const Models& models() const noexcept { return models_; }

  /// (mean map, rms map). Negative rms predictions are clipped at 0.
  std::pair<PressureMap, PressureMap> predict(const CaseCondition& cond) const;

 private:
  SurrogateConfig config_;
  Models models_;
};

Surrogate fit_surrogate(const SurrogateConfig& config, std::span<const CaseRecord* const> train);

}  // namespace windml::eval
