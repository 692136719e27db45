#include "windml/gans/gan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "windml/error.hpp"
#include "windml/gans/network.hpp"
#include "windml/nn/optim.hpp"
#include "windml/rng.hpp"

namespace windml::gans {

using nn::Shape;
using nn::Tensor;

namespace {

constexpr std::uint64_t kShuffleStream = 0x5bu;

double clamp_prob(double p) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::Numeric, "probability outside [0, 1]: " + std::to_string(p));
  return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}

// Mean of log(p) (or log(1 - p)) over a probability map.
double mean_log(std::span<const double> probs, bool complement) {
  if (probs.empty()) fail(ErrorKind::Shape, "empty probability map");
  double s = 0.0;
  for (const double p : probs) {
    const double q = clamp_prob(p);
    s += std::log(complement ? 1.0 - q : q);
  }
  return s / static_cast<double>(probs.size());
}

double mean_sq_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) fail(ErrorKind::Shape, "map size mismatch in reconstruction loss");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

Tensor batch_inputs(const GanModel& m, std::span<const CaseRecord* const> batch) {
  const std::size_t d = m.config.n_inputs();
  Tensor x({batch.size(), d});
  for (std::size_t r = 0; r < batch.size(); ++r) {
    const auto v = m.normalization.apply(batch[r]->condition, m.config.sincos_theta);
    std::copy(v.begin(), v.end(), x.data() + r * d);
  }
  return x;
}

Tensor batch_targets(std::span<const CaseRecord* const> batch, MapKind kind) {
  Tensor t({1, batch.size(), tapgrid::kRows, tapgrid::kCols});
  for (std::size_t r = 0; r < batch.size(); ++r) {
    const auto& v = batch[r]->map(kind).values();
    std::copy(v.begin(), v.end(), t.data() + r * tapgrid::kTaps);
  }
  return t;
}

// Sum over samples of the per-sample mean log term, and d/dlogit of
// -mean_log / n_samples. Gradients are those of the unclamped loss, which
// stay finite where the log saturates.
double log_term(const Tensor& probs, bool real_target, double weight, Tensor* d_logits) {
  const std::size_t n = probs.dim(1);
  double s = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double q = clamp_prob(probs[i]);
    s += std::log(real_target ? q : 1.0 - q);
  }
  if (d_logits) {
    *d_logits = Tensor(probs.shape());
    const double scale = weight / static_cast<double>(kPatches * n);
    for (std::size_t i = 0; i < probs.size(); ++i) {
      (*d_logits)[i] = real_target ? -(1.0 - probs[i]) * scale : probs[i] * scale;
    }
  }
  return s / static_cast<double>(kPatches);
}

// Reconstruction loss summed over samples, and its gradient on each side map
// for the batch mean.
double recon_term(const MapStack& maps, const Tensor& target, MapStack& grads) {
  const std::size_t n = target.dim(1);
  const double per_cell = 1.0 / static_cast<double>(tapgrid::kTaps);
  const double gscale = 2.0 * per_cell / (static_cast<double>(kSideMaps) * static_cast<double>(n));
  double s = 0.0;
  for (std::size_t i = 0; i < kSideMaps; ++i) {
    grads[i] = Tensor(target.shape());
    for (std::size_t j = 0; j < target.size(); ++j) {
      const double diff = maps[i][j] - target[j];
      s += diff * diff;
      grads[i][j] = gscale * diff;
    }
  }
  return s * per_cell / static_cast<double>(kSideMaps);
}

// Generator half-step: forward D on the fake maps, build all upstream
// gradients and backpropagate through the generator. Returns per-sample sums.
LossBreakdown generator_pass(GanModel& m, const GeneratorTrace& gt, const Tensor& mt, const Tensor& ft, double alpha) {
  MapStack dm, df;
  LossBreakdown l;
  l.l_g_e = recon_term(gt.mean.maps, mt, dm) + recon_term(gt.rms.maps, ft, df);
  const DiscTrace dmt = discriminator_forward_batch(m.mean_disc, gt.mean.maps.back());
  const DiscTrace dft = discriminator_forward_batch(m.rms_disc, gt.rms.maps.back());
  Tensor dlm, dlf;
  l.l_g_a = -(log_term(dmt.probs, true, alpha, alpha > 0.0 ? &dlm : nullptr) +
              log_term(dft.probs, true, alpha, alpha > 0.0 ? &dlf : nullptr));
  if (alpha > 0.0) {
    nn::add_inplace(dm[kResBlocks], discriminator_backward(m.mean_disc, dmt, dlm, false));
    nn::add_inplace(df[kResBlocks], discriminator_backward(m.rms_disc, dft, dlf, false));
  }
  l.l_g = l.l_g_e + alpha * l.l_g_a;
  generator_backward(m.generator, gt, dm, df);
  return l;
}

// Discriminator half-step gradients on real targets and frozen fakes.
void discriminator_pass(Discriminator& d, const Tensor& real, const Tensor& fake, double& loss_sum) {
  Tensor dl;
  const DiscTrace rt = discriminator_forward_batch(d, real);
  double s = log_term(rt.probs, true, 1.0, &dl);
  discriminator_backward(d, rt, dl, true);
  const DiscTrace ft = discriminator_forward_batch(d, fake);
  s += log_term(ft.probs, false, 1.0, &dl);
  discriminator_backward(d, ft, dl, true);
  loss_sum = -s;
}

void zero_grads(std::span<nn::Param* const> ps) {
  for (auto* p : ps) p->zero_grad();
}

bool finite(const LossBreakdown& l) {
  return std::isfinite(l.l_g_e) && std::isfinite(l.l_g_a) && std::isfinite(l.l_g) && std::isfinite(l.l_d_m) &&
         std::isfinite(l.l_d_f) && std::isfinite(l.l_d);
}

}  // namespace

GeneratorOutput generator_forward(const GanModel& model, const CaseCondition& cond) {
  const auto v = model.normalization.apply(cond, model.config.sincos_theta);
  const GeneratorTrace t = generator_forward_batch(model.generator, Tensor({1, v.size()}, v));
  GeneratorOutput out;
  for (std::size_t i = 0; i < kSideMaps; ++i) {
    std::copy_n(t.mean.maps[i].data(), tapgrid::kTaps, out.mean_side[i].begin());
    std::copy_n(t.rms.maps[i].data(), tapgrid::kTaps, out.rms_side[i].begin());
  }
  return out;
}

PatchProbMap discriminator_forward(const Discriminator& disc, std::span<const double> map) {
  if (map.size() != tapgrid::kTaps) fail(ErrorKind::Shape, "discriminator input must hold 252 values");
  const DiscTrace t =
      discriminator_forward_batch(disc, Tensor({1, 1, tapgrid::kRows, tapgrid::kCols}, {map.begin(), map.end()}));
  PatchProbMap p;
  std::copy_n(t.probs.data(), kPatches, p.begin());
  return p;
}

LossBreakdown generator_loss(std::span<const std::vector<double>> m_side, std::span<const std::vector<double>> f_side,
                             std::span<const double> m_target, std::span<const double> f_target,
                             std::span<const double> dm_out, std::span<const double> df_out, double alpha) {
  if (m_side.size() != kSideMaps || f_side.size() != kSideMaps) {
    fail(ErrorKind::Shape, "generator loss needs six side maps per stream");
  }
  LossBreakdown l;
  for (std::size_t i = 0; i < kSideMaps; ++i) {
    l.l_g_e += mean_sq_diff(m_target, m_side[i]) + mean_sq_diff(f_target, f_side[i]);
  }
  l.l_g_e /= static_cast<double>(kSideMaps);
  l.l_g_a = -(mean_log(dm_out, false) + mean_log(df_out, false));
  l.l_g = l.l_g_e + alpha * l.l_g_a;
  return l;
}

LossBreakdown discriminator_loss(std::span<const double> d_real_m, std::span<const double> d_fake_m,
                                 std::span<const double> d_real_f, std::span<const double> d_fake_f) {
  LossBreakdown l;
  l.l_d_m = -(mean_log(d_real_m, false) + mean_log(d_fake_m, true));
  l.l_d_f = -(mean_log(d_real_f, false) + mean_log(d_fake_f, true));
  l.l_d = l.l_d_m + l.l_d_f;
  return l;
}

double lr_schedule(std::size_t epoch, const GanConfig& cfg) {
  if (epoch > cfg.epochs) {
    fail(ErrorKind::Range, "epoch " + std::to_string(epoch) + " beyond schedule of " + std::to_string(cfg.epochs));
  }
  if (epoch < cfg.decay_start_epoch) return cfg.lr0;
  return cfg.lr0 * static_cast<double>(cfg.epochs - epoch) / static_cast<double>(cfg.epochs - cfg.decay_start_epoch);
}

void write_history_csv(const TrainHistory& history, std::ostream& os) {
  os << "epoch,lr,l_g_e,l_g_a,l_g,l_d_m,l_d_f,l_d\n";
  char buf[512];
  for (const auto& r : history) {
    const auto& l = r.loss;
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.epoch, r.lr, l.l_g_e, l.l_g_a,
                  l.l_g, l.l_d_m, l.l_d_f, l.l_d);
    os << buf;
  }
}

GeneratorStep generator_loss_and_grads(GanModel& model, std::span<const CaseRecord* const> batch, double alpha) {
  if (batch.empty()) fail(ErrorKind::EmptyInput, "empty batch");
  const GeneratorTrace gt = generator_forward_batch(model.generator, batch_inputs(model, batch));
  LossBreakdown l = generator_pass(model, gt, batch_targets(batch, MapKind::Mean), batch_targets(batch, MapKind::Rms),
                                   alpha);
  const double n = static_cast<double>(batch.size());
  l.l_g_e /= n;
  l.l_g_a /= n;
  l.l_g /= n;
  return {l};
}

LossBreakdown discriminator_loss_and_grads(GanModel& model, std::span<const CaseRecord* const> batch) {
  if (batch.empty()) fail(ErrorKind::EmptyInput, "empty batch");
  const GeneratorTrace gt = generator_forward_batch(model.generator, batch_inputs(model, batch));
  LossBreakdown l;
  discriminator_pass(model.mean_disc, batch_targets(batch, MapKind::Mean), gt.mean.maps.back(), l.l_d_m);
  discriminator_pass(model.rms_disc, batch_targets(batch, MapKind::Rms), gt.rms.maps.back(), l.l_d_f);
  const double n = static_cast<double>(batch.size());
  l.l_d_m /= n;
  l.l_d_f /= n;
  l.l_d = l.l_d_m + l.l_d_f;
  return l;
}

TrainResult train_gan(std::span<const CaseRecord* const> cases, const GanConfig& cfg, EpochCallback on_epoch,
                      void* user) {
  cfg.validate();
  if (cases.empty()) fail(ErrorKind::EmptyInput, "GAN training needs at least one case");
  std::vector<CaseCondition> conds;
  conds.reserve(cases.size());
  for (const auto* c : cases) conds.push_back(c->condition);

  TrainResult res{GanModel(cfg, InputNormalization::fit(conds, cfg.sincos_theta)), {}};
  GanModel& m = res.model;
  auto gparams = m.generator_params();
  auto dparams = m.discriminator_params();
  nn::AdamState gopt(gparams), dopt(dparams);

  std::vector<const CaseRecord*> order(cases.begin(), cases.end());
  std::vector<const CaseRecord*> batch;
  res.history.reserve(cfg.epochs);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = lr_schedule(epoch, cfg);
    std::copy(cases.begin(), cases.end(), order.begin());
    Rng(derive_seed(cfg.seed, kShuffleStream), epoch).shuffle(std::span<const CaseRecord*>(order));
    LossBreakdown sum;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      batch.assign(order.begin() + static_cast<std::ptrdiff_t>(start), order.begin() + static_cast<std::ptrdiff_t>(end));
      const Tensor x = batch_inputs(m, batch);
      const Tensor mt = batch_targets(batch, MapKind::Mean);
      const Tensor ft = batch_targets(batch, MapKind::Rms);
      const GeneratorTrace gt = generator_forward_batch(m.generator, x);

      zero_grads(dparams);
      double ldm = 0.0, ldf = 0.0;
      discriminator_pass(m.mean_disc, mt, gt.mean.maps.back(), ldm);
      discriminator_pass(m.rms_disc, ft, gt.rms.maps.back(), ldf);
      nn::adam_step(dparams, dopt, lr);

      zero_grads(gparams);
      const LossBreakdown gl = generator_pass(m, gt, mt, ft, cfg.alpha);
      nn::adam_step(gparams, gopt, lr);

      sum.l_g_e += gl.l_g_e;
      sum.l_g_a += gl.l_g_a;
      sum.l_g += gl.l_g;
      sum.l_d_m += ldm;
      sum.l_d_f += ldf;
    }
    const double n = static_cast<double>(order.size());
    EpochRecord rec{epoch, lr, {sum.l_g_e / n, sum.l_g_a / n, sum.l_g / n, sum.l_d_m / n, sum.l_d_f / n, 0.0}};
    rec.loss.l_d = rec.loss.l_d_m + rec.loss.l_d_f;
    if (!finite(rec.loss)) fail(ErrorKind::Divergence, "non-finite loss at epoch " + std::to_string(epoch));
    res.history.push_back(rec);
    if (on_epoch) on_epoch(rec, user);
  }
  return res;
}

TrainResult train_gan(std::span<const CaseRecord> cases, const GanConfig& cfg, EpochCallback on_epoch, void* user) {
  std::vector<const CaseRecord*> ptrs;
  ptrs.reserve(cases.size());
  for (const auto& c : cases) ptrs.push_back(&c);
  return train_gan(std::span<const CaseRecord* const>(ptrs), cfg, on_epoch, user);
}

std::pair<PressureMap, PressureMap> gan_predict(const GanModel& model, const CaseCondition& cond) {
  const GeneratorOutput out = generator_forward(model, cond);
  for (const double v : out.mean()) {
    if (!std::isfinite(v)) fail(ErrorKind::Numeric, "non-finite generator output");
  }
  MapValues rms = out.rms();
  for (auto& v : rms) {
    if (!std::isfinite(v)) fail(ErrorKind::Numeric, "non-finite generator output");
    v = std::max(v, 0.0);
  }
  return {PressureMap(MapKind::Mean, out.mean()), PressureMap(MapKind::Rms, rms)};
}

}  // namespace windml::gans
