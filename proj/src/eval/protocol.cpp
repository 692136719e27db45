#include "windml/eval/protocol.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "windml/core/metrics.hpp"
#include "windml/error.hpp"
#include "windml/eval/config_json.hpp"
#include "windml/parallel.hpp"
#include "windml/rng.hpp"

namespace windml::eval {

namespace {

constexpr std::uint64_t kSplitStream = 0x5011;
constexpr std::uint64_t kFoldStream = 0xf01d;

// Shortest text that parses back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<const CaseRecord*> lookup(const Dataset& ds, const std::vector<std::string>& ids) {
  std::vector<const CaseRecord*> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(&ds.find(id));
  return out;
}

double face_mse(const PressureMap& pred, const PressureMap& truth, std::size_t face) {
  double sum = 0.0;
  for (std::size_t r = 0; r < tapgrid::kRows; ++r) {
    for (std::size_t c = face * tapgrid::kColsPerFace; c < (face + 1) * tapgrid::kColsPerFace; ++c) {
      const double d = pred.at(r, c) - truth.at(r, c);
      sum += d * d;
    }
  }
  return sum / static_cast<double>(tapgrid::kRows * tapgrid::kColsPerFace);
}

TargetMetrics map_metrics(const PressureMap& pred, const PressureMap& truth) {
  TargetMetrics m;
  m.mse = mse(pred.values(), truth.values());
  try {
    m.r2 = r2(pred.values(), truth.values());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UndefinedVariance) throw;
    m.r2 = std::numeric_limits<double>::quiet_NaN();
  }
  return m;
}

}  // namespace

SplitPlan make_split(const Dataset& ds, double portion, std::uint64_t seed, std::size_t n_set_aside) {
  if (!(portion > 0.0 && portion <= 1.0)) fail(ErrorKind::Config, "portion must lie in (0, 1], got " + fmt(portion));
  if (ds.size() <= n_set_aside) {
    fail(ErrorKind::InsufficientSamples, "dataset has " + std::to_string(ds.size()) + " cases, needs more than " +
                                             std::to_string(n_set_aside) + " set-aside cases");
  }
  const std::size_t remaining = ds.size() - n_set_aside;
  // The epsilon keeps e.g. 0.3 * 2658 from rounding down a whole case.
  const auto n = static_cast<std::size_t>(std::floor(portion * static_cast<double>(remaining) + 1e-9));
  if (n < 2) fail(ErrorKind::Config, "portion " + fmt(portion) + " yields " + std::to_string(n) + " cases (need >= 2)");

  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed, kSplitStream);
  rng.shuffle(std::span<std::size_t>(order));

  SplitPlan plan;
  plan.portion = portion;
  plan.seed = seed;
  const std::size_t n_train = n * 8 / 10;
  for (std::size_t i = 0; i < n_set_aside + n; ++i) {
    const std::string& id = ds[order[i]].id;
    if (i < n_set_aside) {
      plan.set_aside_ids.push_back(id);
    } else if (i < n_set_aside + n_train) {
      plan.train_ids.push_back(id);
    } else {
      plan.test_ids.push_back(id);
    }
  }
  return plan;
}

CvPlan make_folds(const std::vector<std::string>& train_ids, std::size_t k, std::uint64_t seed) {
  if (k == 0) fail(ErrorKind::Config, "fold count must be positive");
  if (train_ids.size() < k) {
    fail(ErrorKind::InsufficientSamples,
         std::to_string(train_ids.size()) + " training cases cannot fill " + std::to_string(k) + " folds");
  }
  std::vector<std::string> ids = train_ids;
  Rng rng(seed, kFoldStream);
  rng.shuffle(std::span<std::string>(ids));
  CvPlan plan;
  plan.seed = seed;
  plan.folds.resize(k);
  const std::size_t base = ids.size() / k;
  const std::size_t extra = ids.size() % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t len = base + (f < extra ? 1 : 0);
    plan.folds[f].assign(ids.begin() + static_cast<std::ptrdiff_t>(pos),
                         ids.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  return plan;
}

Metrics evaluate(const Surrogate& model, std::span<const CaseRecord* const> cases) {
  if (cases.empty()) fail(ErrorKind::EmptyInput, "no cases to evaluate");
  std::vector<double> pm, tm, pr, tr;
  const std::size_t total = cases.size() * tapgrid::kTaps;
  pm.reserve(total);
  tm.reserve(total);
  pr.reserve(total);
  tr.reserve(total);
  for (const CaseRecord* c : cases) {
    const auto [mean, rms] = model.predict(c->condition);
    pm.insert(pm.end(), mean.values().begin(), mean.values().end());
    pr.insert(pr.end(), rms.values().begin(), rms.values().end());
    tm.insert(tm.end(), c->mean_map.values().begin(), c->mean_map.values().end());
    tr.insert(tr.end(), c->rms_map.values().begin(), c->rms_map.values().end());
  }
  Metrics m;
  m.mean = {mse(pm, tm), r2(pm, tm)};
  m.rms = {mse(pr, tr), r2(pr, tr)};
  return m;
}

TuneResult tune(const Dataset& ds, const CvPlan& plan, const std::vector<SurrogateConfig>& grid,
                const TuneOptions& options) {
  if (grid.empty()) fail(ErrorKind::Argument, "tuning grid is empty");
  const Family family = grid.front().family;
  for (const auto& g : grid) {
    if (g.family != family) fail(ErrorKind::Argument, "tuning grid mixes model families");
  }
  const std::size_t k = plan.folds.size();
  if (k < 2) fail(ErrorKind::Config, "cross-validation needs at least 2 folds");

  std::vector<std::vector<const CaseRecord*>> fold_cases;
  fold_cases.reserve(k);
  for (const auto& f : plan.folds) fold_cases.push_back(lookup(ds, f));

  std::vector<Metrics> results(grid.size() * k);
  parallel_for(results.size(), [&](std::size_t task) {
    const std::size_t gi = task / k;
    const std::size_t fi = task % k;
    SurrogateConfig cfg = grid[gi];
    if (cfg.family == Family::Gan && options.gan_cv_epochs > 0) cfg.gan = with_epoch_budget(cfg.gan, options.gan_cv_epochs);
    std::vector<const CaseRecord*> train;
    for (std::size_t f = 0; f < k; ++f) {
      if (f != fi) train.insert(train.end(), fold_cases[f].begin(), fold_cases[f].end());
    }
    try {
      const Surrogate model = fit_surrogate(cfg, train);
      results[task] = evaluate(model, fold_cases[fi]);
    } catch (const Error& e) {
      fail(e.kind(), "grid point " + std::to_string(gi) + ", fold " + std::to_string(fi) + ": " + e.what());
    }
  });

  TuneResult out;
  out.table.reserve(grid.size());
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    CvRow row;
    row.config = grid[gi];
    for (std::size_t fi = 0; fi < k; ++fi) {
      row.cv_mse_mean += results[gi * k + fi].mean.mse;
      row.cv_mse_rms += results[gi * k + fi].rms.mse;
    }
    row.cv_mse_mean /= static_cast<double>(k);
    row.cv_mse_rms /= static_cast<double>(k);
    row.cv_mse = 0.5 * (row.cv_mse_mean + row.cv_mse_rms);
    out.table.push_back(std::move(row));
  }

  auto argmin = [&](auto key) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.table.size(); ++i) {
      if (key(out.table[i]) < key(out.table[best])) best = i;
    }
    return best;
  };
  if (family == Family::Gan) {
    out.best_mean_row = out.best_rms_row = argmin([](const CvRow& r) { return r.cv_mse; });
    out.best = out.table[out.best_mean_row].config;
  } else {
    out.best_mean_row = argmin([](const CvRow& r) { return r.cv_mse_mean; });
    out.best_rms_row = argmin([](const CvRow& r) { return r.cv_mse_rms; });
    out.best = out.table[out.best_mean_row].config;
    const SurrogateConfig& rms_cfg = out.table[out.best_rms_row].config;
    out.best.dtr_rms = rms_cfg.dtr_rms;
    out.best.rf_rms = rms_cfg.rf_rms;
    out.best.xgb_rms = rms_cfg.xgb_rms;
  }
  return out;
}

std::vector<SetAsideBundle> validate_setaside(const Surrogate& model, const Dataset& ds, const SplitPlan& plan) {
  std::vector<SetAsideBundle> out;
  out.reserve(plan.set_aside_ids.size());
  for (const auto& id : plan.set_aside_ids) {
    const CaseRecord& c = ds.find(id);
    auto [mean, rms] = model.predict(c.condition);
    SetAsideBundle b{c.id, c.condition, c.mean_map, mean, c.rms_map, rms, {}, {}, {}};
    b.mean = map_metrics(b.pred_mean, b.true_mean);
    b.rms = map_metrics(b.pred_rms, b.true_rms);
    for (std::size_t f = 0; f < tapgrid::kFaces; ++f) {
      b.face_mse.mean[f] = face_mse(b.pred_mean, b.true_mean, f);
      b.face_mse.rms[f] = face_mse(b.pred_rms, b.true_rms, f);
    }
    out.push_back(std::move(b));
  }
  return out;
}

void write_report(const Report& r, std::ostream& os) {
  os << "family=" << r.family << '\n'
     << "config=" << r.config << '\n'
     << "seed=" << r.seed << '\n'
     << "portion=" << fmt(r.portion) << '\n'
     << "n_train=" << r.n_train << '\n'
     << "n_test=" << r.n_test << '\n'
     << "test_mse_mean=" << fmt(r.test.mean.mse) << '\n'
     << "test_r2_mean=" << fmt(r.test.mean.r2) << '\n'
     << "test_mse_rms=" << fmt(r.test.rms.mse) << '\n'
     << "test_r2_rms=" << fmt(r.test.rms.r2) << '\n';
  os << "\n[cv]\nrow,cv_mse_mean,cv_mse_rms,cv_mse,config\n";
  for (std::size_t i = 0; i < r.cv_table.size(); ++i) {
    const auto& row = r.cv_table[i];
    os << i << ',' << fmt(row.cv_mse_mean) << ',' << fmt(row.cv_mse_rms) << ',' << fmt(row.cv_mse) << ','
       << csv_quote(config_echo(row.config)) << '\n';
  }
  os << "\n[set_aside]\nid,sx,sy,theta,mse_mean,r2_mean,mse_rms,r2_rms";
  for (const char* kind : {"mean", "rms"}) {
    for (std::size_t f = 0; f < tapgrid::kFaces; ++f) os << ",mse_" << kind << '_' << to_string(static_cast<Face>(f));
  }
  os << '\n';
  for (const auto& b : r.set_aside) {
    os << b.id << ',' << fmt(b.condition.sx) << ',' << fmt(b.condition.sy) << ',' << fmt(b.condition.theta) << ','
       << fmt(b.mean.mse) << ',' << fmt(b.mean.r2) << ',' << fmt(b.rms.mse) << ',' << fmt(b.rms.r2);
    for (const double v : b.face_mse.mean) os << ',' << fmt(v);
    for (const double v : b.face_mse.rms) os << ',' << fmt(v);
    os << '\n';
  }
}

Report plan_report(const Surrogate& model, const Dataset& ds, const SplitPlan& plan) {
  Report report;
  report.family = std::string(to_string(model.family()));
  report.config = config_echo(model.config());
  report.seed = plan.seed;
  report.portion = plan.portion;
  report.n_train = plan.train_ids.size();
  report.n_test = plan.test_ids.size();
  report.test = evaluate(model, lookup(ds, plan.test_ids));
  report.set_aside = validate_setaside(model, ds, plan);
  return report;
}

TtvResult ttv_run(const Dataset& ds, const SurrogateConfig& config, const TtvOptions& options) {
  SplitPlan plan = make_split(ds, options.portion, options.seed, options.n_set_aside);
  SurrogateConfig chosen = config;
  chosen.reseed(options.seed);
  std::vector<CvRow> cv_table;
  if (!options.grid.empty()) {
    std::vector<SurrogateConfig> grid = options.grid;
    for (auto& g : grid) g.reseed(options.seed);
    const CvPlan folds = make_folds(plan.train_ids, options.tune.folds, options.seed);
    TuneResult tuned = tune(ds, folds, grid, options.tune);
    chosen = tuned.best;
    cv_table = std::move(tuned.table);
  }
  Surrogate model = fit_surrogate(chosen, lookup(ds, plan.train_ids));
  Report report = plan_report(model, ds, plan);
  report.cv_table = std::move(cv_table);
  return TtvResult{std::move(plan), std::move(model), std::move(report)};
}

std::vector<SweepRow> portion_sweep(const Dataset& ds, const SurrogateConfig& config, const std::vector<double>& portions,
                                    const TtvOptions& options) {
  if (portions.empty()) fail(ErrorKind::Argument, "no portions to sweep");
  std::vector<SweepRow> rows;
  rows.reserve(portions.size());
  for (const double p : portions) {
    TtvOptions o = options;
    o.portion = p;
    rows.push_back(SweepRow{p, ttv_run(ds, config, o).report.test});
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
  os << "portion,mse_mean,r2_mean,mse_rms,r2_rms\n";
  for (const auto& r : rows) {
    os << fmt(r.portion) << ',' << fmt(r.test.mean.mse) << ',' << fmt(r.test.mean.r2) << ',' << fmt(r.test.rms.mse)
       << ',' << fmt(r.test.rms.r2) << '\n';
  }
}

std::vector<double> default_portions() {
  std::vector<double> out;
  for (int i = 1; i <= 9; ++i) out.push_back(i / 10.0);
  return out;
}

std::vector<double> Range::values() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step)) fail(ErrorKind::Argument, "range bounds must be finite");
  if (!(step > 0.0)) fail(ErrorKind::Argument, "range step must be positive");
  if (lo > hi) fail(ErrorKind::Argument, "empty range: lo " + fmt(lo) + " > hi " + fmt(hi));
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out[i] = lo + static_cast<double>(i) * step;
  return out;
}

std::string_view to_string(Reducer r) {
  switch (r) {
    case Reducer::MaxAbs: return "maxabs";
    case Reducer::Max: return "max";
    case Reducer::Min: return "min";
    case Reducer::Mean: return "mean";
    case Reducer::FrontMean: return "front-mean";
    case Reducer::RightMean: return "right-mean";
    case Reducer::BackMean: return "back-mean";
    case Reducer::LeftMean: return "left-mean";
  }
  return "unknown";
}

Reducer parse_reducer(std::string_view name) {
  for (const Reducer r : {Reducer::MaxAbs, Reducer::Max, Reducer::Min, Reducer::Mean, Reducer::FrontMean,
                          Reducer::RightMean, Reducer::BackMean, Reducer::LeftMean}) {
    if (name == to_string(r)) return r;
  }
  fail(ErrorKind::Argument, "unknown reducer '" + std::string(name) + "'");
}

double reduce_map(const PressureMap& map, Reducer r) {
  const auto& v = map.values();
  auto face_mean = [&](Face f) {
    double sum = 0.0;
    const auto c0 = static_cast<std::size_t>(f) * tapgrid::kColsPerFace;
    for (std::size_t row = 0; row < tapgrid::kRows; ++row) {
      for (std::size_t c = c0; c < c0 + tapgrid::kColsPerFace; ++c) sum += map.at(row, c);
    }
    return sum / static_cast<double>(tapgrid::kRows * tapgrid::kColsPerFace);
  };
  switch (r) {
    case Reducer::MaxAbs: {
      double m = 0.0;
      for (const double x : v) m = std::max(m, std::abs(x));
      return m;
    }
    case Reducer::Max: return *std::max_element(v.begin(), v.end());
    case Reducer::Min: return *std::min_element(v.begin(), v.end());
    case Reducer::Mean: return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    case Reducer::FrontMean: return face_mean(Face::Front);
    case Reducer::RightMean: return face_mean(Face::Right);
    case Reducer::BackMean: return face_mean(Face::Back);
    case Reducer::LeftMean: return face_mean(Face::Left);
  }
  fail(ErrorKind::Argument, "unhandled reducer");
}

std::vector<DensePoint> dense_map(const Surrogate& model, double theta, const Range& sx, const Range& sy,
                                  MapKind statistic, Reducer reducer) {
  const auto xs = sx.values();
  const auto ys = sy.values();
  std::vector<DensePoint> out;
  out.reserve(xs.size() * ys.size());
  for (const double x : xs) {
    for (const double y : ys) {
      const auto maps = model.predict(CaseCondition::make(x, y, theta));
      const PressureMap& m = statistic == MapKind::Mean ? maps.first : maps.second;
      out.push_back(DensePoint{x, y, reduce_map(m, reducer)});
    }
  }
  return out;
}

void write_dense_csv(const std::vector<DensePoint>& pts, std::ostream& os) {
  os << "sx,sy,value\n";
  for (const auto& p : pts) os << fmt(p.sx) << ',' << fmt(p.sy) << ',' << fmt(p.value) << '\n';
}

}  // namespace windml::eval
