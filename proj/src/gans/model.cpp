#include "windml/gans/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "windml/error.hpp"

namespace windml::gans {

void GanConfig::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) fail(ErrorKind::Config, "alpha must be finite and >= 0");
  if (batch_size == 0) fail(ErrorKind::Config, "batch_size must be positive");
  if (epochs == 0) fail(ErrorKind::Config, "epochs must be positive");
  if (!(lr0 > 0.0) || !std::isfinite(lr0)) fail(ErrorKind::Config, "lr0 must be finite and positive");
  if (decay_start_epoch > epochs) fail(ErrorKind::Config, "decay_start_epoch exceeds epochs");
}

std::vector<double> InputNormalization::raw_inputs(const CaseCondition& cond, bool sincos_theta) {
  if (!std::isfinite(cond.sx) || !std::isfinite(cond.sy) || !std::isfinite(cond.theta)) {
    fail(ErrorKind::Data, "non-finite case condition");
  }
  if (!sincos_theta) return {cond.sx, cond.sy, cond.theta};
  const double rad = cond.theta * std::numbers::pi / 180.0;
  return {cond.sx, cond.sy, std::sin(rad), std::cos(rad)};
}

InputNormalization InputNormalization::fit(std::span<const CaseCondition> conditions, bool sincos_theta) {
  if (conditions.empty()) fail(ErrorKind::EmptyInput, "input normalization needs at least one condition");
  InputNormalization n;
  n.lo = raw_inputs(conditions[0], sincos_theta);
  n.hi = n.lo;
  for (const auto& c : conditions) {
    const auto x = raw_inputs(c, sincos_theta);
    for (std::size_t i = 0; i < x.size(); ++i) {
      n.lo[i] = std::min(n.lo[i], x[i]);
      n.hi[i] = std::max(n.hi[i], x[i]);
    }
  }
  return n;
}

std::vector<double> InputNormalization::apply(const CaseCondition& cond, bool sincos_theta) const {
  auto x = raw_inputs(cond, sincos_theta);
  if (x.size() != lo.size() || x.size() != hi.size()) {
    fail(ErrorKind::Shape, "normalization constants do not match the input encoding");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double span = hi[i] - lo[i];
    x[i] = span > 0.0 ? 2.0 * (x[i] - lo[i]) / span - 1.0 : 0.0;
  }
  return x;
}

namespace {

RefineStream make_stream(const std::string& prefix, std::uint64_t seed) {
  RefineStream s;
  s.encoder = nn::ConvLayer(prefix + ".encoder", 1, kFeatures, 3, seed);
  for (std::size_t i = 0; i < kResBlocks; ++i) {
    const std::string b = prefix + ".block" + std::to_string(i + 1);
    s.blocks[i].first = nn::ConvLayer(b + ".conv1", kFeatures, kFeatures, 3, seed);
    s.blocks[i].second = nn::ConvLayer(b + ".conv2", kFeatures, kFeatures, 3, seed);
    s.side[i] = nn::ConvLayer(prefix + ".side" + std::to_string(i + 1), kFeatures, 1, 1, seed);
  }
  return s;
}

Discriminator make_disc(const std::string& prefix, std::uint64_t seed) {
  return Discriminator{nn::ConvLayer(prefix + ".conv1", 1, kFeatures, 3, seed),
                       nn::ConvLayer(prefix + ".conv2", kFeatures, kFeatures, 3, seed),
                       nn::ConvLayer(prefix + ".conv3", kFeatures, kFeatures, 3, seed),
                       nn::ConvLayer(prefix + ".head", kFeatures, 1, 1, seed)};
}

void collect_stream(RefineStream& s, std::vector<nn::Param*>& out) {
  s.encoder.collect(out);
  for (std::size_t i = 0; i < kResBlocks; ++i) {
    s.blocks[i].first.collect(out);
    s.blocks[i].second.collect(out);
    s.side[i].collect(out);
  }
}

}  // namespace

std::vector<nn::Param*> Generator::params() {
  std::vector<nn::Param*> out;
  for (auto& l : trunk) l.collect(out);
  mean_hidden.collect(out);
  mean_out.collect(out);
  rms_hidden.collect(out);
  rms_out.collect(out);
  collect_stream(mean_stream, out);
  collect_stream(rms_stream, out);
  return out;
}

std::size_t Generator::trunk_parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : trunk) n += l.parameter_count();
  return n;
}

std::vector<nn::Param*> Discriminator::params() {
  std::vector<nn::Param*> out;
  conv1.collect(out);
  conv2.collect(out);
  conv3.collect(out);
  head.collect(out);
  return out;
}

GanModel::GanModel(const GanConfig& cfg, InputNormalization norm) : config(cfg), normalization(std::move(norm)) {
  config.validate();
  if (normalization.lo.size() != config.n_inputs() || normalization.hi.size() != config.n_inputs()) {
    fail(ErrorKind::Shape, "normalization constants do not match the input encoding");
  }
  const std::uint64_t seed = config.seed;
  constexpr std::array<std::size_t, 5> widths{64, 128, 256, 512, 1024};
  std::size_t in = config.n_inputs();
  for (std::size_t i = 0; i < widths.size(); ++i) {
    generator.trunk[i] = nn::DenseLayer("gen.trunk" + std::to_string(i + 1), in, widths[i], seed);
    in = widths[i];
  }
  generator.mean_hidden = nn::DenseLayer("gen.mean.fc1", 1024, 512, seed);
  generator.mean_out = nn::DenseLayer("gen.mean.fc2", 512, tapgrid::kTaps, seed);
  generator.rms_hidden = nn::DenseLayer("gen.rms.fc1", 1024, 512, seed);
  generator.rms_out = nn::DenseLayer("gen.rms.fc2", 512, tapgrid::kTaps, seed);
  generator.mean_stream = make_stream("gen.mean", seed);
  generator.rms_stream = make_stream("gen.rms", seed);
  mean_disc = make_disc("disc.mean", seed);
  rms_disc = make_disc("disc.rms", seed);
}

std::vector<nn::Param*> GanModel::discriminator_params() {
  auto out = mean_disc.params();
  const auto f = rms_disc.params();
  out.insert(out.end(), f.begin(), f.end());
  return out;
}

std::vector<nn::Param*> GanModel::all_params() {
  auto out = generator.params();
  const auto d = discriminator_params();
  out.insert(out.end(), d.begin(), d.end());
  return out;
}

std::size_t parameter_count(std::span<nn::Param* const> params) {
  std::size_t n = 0;
  for (const auto* p : params) n += p->value.size();
  return n;
}

}  // namespace windml::gans
