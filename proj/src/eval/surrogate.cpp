#include "windml/eval/surrogate.hpp"

#include <algorithm>
#include <cmath>

#include "windml/error.hpp"
#include "windml/gans/gan.hpp"
#include "windml/rng.hpp"
#include "windml/trees/presets.hpp"
#include "windml/trees/samples.hpp"

namespace windml::eval {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::Dtr: return "dtr";
    case Family::Rf: return "rf";
    case Family::Xgb: return "xgb";
    case Family::Gan: return "gan";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (const Family f : {Family::Dtr, Family::Rf, Family::Xgb, Family::Gan}) {
    if (name == to_string(f)) return f;
  }
  fail(ErrorKind::Argument, "unknown model family '" + std::string(name) + "' (expected dtr, rf, xgb or gan)");
}

SurrogateConfig SurrogateConfig::defaults(Family family) {
  SurrogateConfig c;
  c.family = family;
  c.dtr_mean = trees::dtr_preset(MapKind::Mean);
  c.dtr_rms = trees::dtr_preset(MapKind::Rms);
  c.rf_mean = trees::rf_preset(MapKind::Mean);
  c.rf_rms = trees::rf_preset(MapKind::Rms);
  c.xgb_mean = trees::xgb_preset(MapKind::Mean);
  c.xgb_rms = trees::xgb_preset(MapKind::Rms);
  return c;
}

void SurrogateConfig::reseed(std::uint64_t seed) {
  rf_mean.seed = derive_seed(seed, 1);
  rf_rms.seed = derive_seed(seed, 2);
  xgb_mean.seed = derive_seed(seed, 3);
  xgb_rms.seed = derive_seed(seed, 4);
  gan.seed = derive_seed(seed, 5);
}

void SurrogateConfig::validate() const {
  switch (family) {
    case Family::Dtr:
      dtr_mean.validate();
      dtr_rms.validate();
      break;
    case Family::Rf:
      rf_mean.validate(trees::kTapFeatures);
      rf_rms.validate(trees::kTapFeatures);
      break;
    case Family::Xgb:
      xgb_mean.validate();
      xgb_rms.validate();
      break;
    case Family::Gan: gan.validate(); break;
  }
}

SurrogateConfig preset_config(std::string_view name) {
  for (const Family f : {Family::Dtr, Family::Rf, Family::Xgb, Family::Gan}) {
    if (name == to_string(f)) return SurrogateConfig::defaults(f);
  }
  if (name == "gan-default") return SurrogateConfig::defaults(Family::Gan);
  const auto dash = name.find('-');
  if (dash != std::string_view::npos) {
    const auto target = name.substr(dash + 1);
    if (target == "mean" || target == "rms") {
      const MapKind kind = target == "mean" ? MapKind::Mean : MapKind::Rms;
      const auto fam = name.substr(0, dash);
      if (fam == "dtr" || fam == "rf" || fam == "xgb") {
        SurrogateConfig c = SurrogateConfig::defaults(parse_family(fam));
        c.dtr_mean = c.dtr_rms = trees::dtr_preset(kind);
        c.rf_mean = c.rf_rms = trees::rf_preset(kind);
        c.xgb_mean = c.xgb_rms = trees::xgb_preset(kind);
        return c;
      }
    }
  }
  fail(ErrorKind::Argument, "unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
  return {"dtr-mean", "dtr-rms", "rf-mean", "rf-rms", "xgb-mean", "xgb-rms", "gan-default"};
}

gans::GanConfig with_epoch_budget(gans::GanConfig cfg, std::size_t epochs) {
  if (epochs == 0) fail(ErrorKind::Config, "epoch budget must be positive");
  const double frac = static_cast<double>(cfg.decay_start_epoch) / static_cast<double>(cfg.epochs);
  cfg.decay_start_epoch = std::min(epochs, static_cast<std::size_t>(std::floor(frac * static_cast<double>(epochs))));
  cfg.epochs = epochs;
  return cfg;
}

Surrogate::Surrogate(SurrogateConfig config, Models models) : config_(std::move(config)), models_(std::move(models)) {
  const bool ok = (config_.family == Family::Dtr && std::holds_alternative<TreePair>(models_)) ||
                  (config_.family == Family::Rf && std::holds_alternative<ForestPair>(models_)) ||
                  (config_.family == Family::Xgb && std::holds_alternative<BoostPair>(models_)) ||
                  (config_.family == Family::Gan && std::holds_alternative<gans::GanModel>(models_));
  if (!ok) fail(ErrorKind::Argument, "model type does not match family " + std::string(to_string(config_.family)));
}

namespace {

template <typename Model>
MapValues tree_map(const Model& m, const CaseCondition& cond) {
  MapValues out;
  for (std::size_t t = 0; t < tapgrid::kTaps; ++t) out[t] = m.predict(trees::tap_features(cond, t));
  return out;
}

template <typename Pair>
std::pair<PressureMap, PressureMap> predict_pair(const Pair& p, const CaseCondition& cond) {
  MapValues rms = tree_map(p.second, cond);
  for (auto& v : rms) v = std::max(v, 0.0);
  return {PressureMap(MapKind::Mean, tree_map(p.first, cond)), PressureMap(MapKind::Rms, rms)};
}

}  // namespace

std::pair<PressureMap, PressureMap> Surrogate::predict(const CaseCondition& cond) const {
  return std::visit(
      [&](const auto& m) -> std::pair<PressureMap, PressureMap> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, gans::GanModel>) {
          return gans::gan_predict(m, cond);
        } else {
          return predict_pair(m, cond);
        }
      },
      models_);
}

Surrogate fit_surrogate(const SurrogateConfig& config, std::span<const CaseRecord* const> train) {
  config.validate();
  if (train.empty()) fail(ErrorKind::EmptyInput, "no training cases");
  if (config.family == Family::Gan) return Surrogate(config, gans::train_gan(train, config.gan).model);
  const trees::SampleSet mean_s = trees::tap_samples(train, MapKind::Mean);
  const trees::SampleSet rms_s = trees::tap_samples(train, MapKind::Rms);
  switch (config.family) {
    case Family::Dtr:
      return Surrogate(config, Surrogate::TreePair(trees::cart_fit(mean_s, config.dtr_mean),
                                                   trees::cart_fit(rms_s, config.dtr_rms)));
    case Family::Rf:
      return Surrogate(config, Surrogate::ForestPair(trees::rf_fit(mean_s, config.rf_mean),
                                                     trees::rf_fit(rms_s, config.rf_rms)));
    case Family::Xgb:
      return Surrogate(config, Surrogate::BoostPair(trees::gbt_fit(mean_s, config.xgb_mean),
                                                    trees::gbt_fit(rms_s, config.xgb_rms)));
    case Family::Gan: break;
  }
  fail(ErrorKind::Argument, "unhandled family");
}

}  // namespace windml::eval
