#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "windml/core/metrics.hpp"
#include "windml/error.hpp"
#include "windml/eval/config_json.hpp"
#include "windml/eval/model_file.hpp"
#include "windml/eval/protocol.hpp"
#include "windml/ingest/synth.hpp"
#include "windml/rng.hpp"
#include "windml/trees/presets.hpp"

using namespace windml;
using namespace windml::eval;

namespace {

Dataset synth_with(std::vector<Location> locs, std::vector<double> angles) {
  SynthSpec spec;
  spec.locations = std::move(locs);
  spec.angles = std::move(angles);
  return synth_generate(spec);
}

// Default locations at every 30 degrees: 37 x 12 = 444 cases.
const Dataset& medium() {
  static const Dataset ds = [] {
    std::vector<double> angles;
    for (int a = 0; a < 360; a += 30) angles.push_back(a);
    return synth_with(default_locations(), angles);
  }();
  return ds;
}

// A dataset of exactly n cases (distinct conditions).
Dataset of_size(std::size_t n) {
  std::vector<double> angles;
  for (std::size_t i = 0; i < n; ++i) angles.push_back(static_cast<double>(i) * 360.0 / static_cast<double>(n));
  return synth_with({{5.0, 0.0}}, angles);
}

std::vector<std::string> make_ids(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("c" + std::to_string(i));
  return ids;
}

SurrogateConfig shallow_dtr() {
  SurrogateConfig c = SurrogateConfig::defaults(Family::Dtr);
  c.dtr_mean = c.dtr_rms = trees::TreeConfig{.max_depth = 1};
  return c;
}

SurrogateConfig quick_gan(std::size_t epochs = 2) {
  SurrogateConfig c = SurrogateConfig::defaults(Family::Gan);
  c.gan.epochs = epochs;
  c.gan.decay_start_epoch = epochs / 2;
  c.gan.alpha = 0.0;
  return c;
}

std::vector<const CaseRecord*> all_cases(const Dataset& ds) {
  std::vector<const CaseRecord*> out;
  for (const auto& r : ds.records()) out.push_back(&r);
  return out;
}

std::string report_text(const Report& r) {
  std::ostringstream os;
  write_report(r, os);
  return os.str();
}

}  // namespace

TEST(MakeSplit, FullPortionOnDefaultDataset) {
  const Dataset ds = synth_generate(SynthSpec{});
  ASSERT_EQ(ds.size(), 2664u);
  const SplitPlan p = make_split(ds, 1.0, 3);
  EXPECT_EQ(p.set_aside_ids.size(), 6u);
  EXPECT_EQ(p.train_ids.size(), 2126u);
  EXPECT_EQ(p.test_ids.size(), 532u);
  const SplitPlan q = make_split(ds, 0.3, 3);
  EXPECT_EQ(q.train_ids.size() + q.test_ids.size(), 797u);  // floor(0.3 * 2658)
  EXPECT_EQ(q.set_aside_ids, p.set_aside_ids);
}

TEST(MakeSplit, TenUsableCasesGiveEightTwo) {
  const Dataset ds = of_size(16);
  const SplitPlan p = make_split(ds, 1.0, 0);
  EXPECT_EQ(p.train_ids.size(), 8u);
  EXPECT_EQ(p.test_ids.size(), 2u);
  const SplitPlan h = make_split(of_size(26), 0.5, 0);
  EXPECT_EQ(h.train_ids.size(), 8u);
  EXPECT_EQ(h.test_ids.size(), 2u);
}

TEST(MakeSplit, DeterministicAndSeedSensitive) {
  const Dataset& ds = medium();
  EXPECT_EQ(make_split(ds, 0.3, 11), make_split(ds, 0.3, 11));
  EXPECT_NE(make_split(ds, 0.3, 11).set_aside_ids, make_split(ds, 0.3, 12).set_aside_ids);
}

TEST(MakeSplit, PartsNeverIntersect) {
  const Dataset& ds = medium();
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const double portion = 0.01 + 0.99 * rng.uniform();
    const auto plan = make_split(ds, portion, rng.next_u64(), static_cast<std::size_t>(rng.below(10)));
    std::set<std::string> seen;
    std::size_t total = 0;
    for (const auto* part : {&plan.set_aside_ids, &plan.train_ids, &plan.test_ids}) {
      seen.insert(part->begin(), part->end());
      total += part->size();
    }
    ASSERT_EQ(seen.size(), total) << "overlap at trial " << trial;
    const std::size_t n = plan.train_ids.size() + plan.test_ids.size();
    ASSERT_EQ(plan.train_ids.size(), n * 8 / 10);
  }
}

TEST(MakeSplit, Errors) {
  const Dataset ds = of_size(16);
  auto kind_of = [&](double portion, std::size_t aside) {
    try {
      make_split(ds, portion, 0, aside);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  EXPECT_EQ(kind_of(0.0, 6), ErrorKind::Config);
  EXPECT_EQ(kind_of(1.5, 6), ErrorKind::Config);
  EXPECT_EQ(kind_of(std::nan(""), 6), ErrorKind::Config);
  EXPECT_EQ(kind_of(0.1, 6), ErrorKind::Config);  // one case
  EXPECT_EQ(kind_of(1.0, 16), ErrorKind::InsufficientSamples);
}

TEST(MakeFolds, EvenAndRemainderSizes) {
  const auto even = make_folds(make_ids(100), 10, 1);
  for (const auto& f : even.folds) EXPECT_EQ(f.size(), 10u);
  const auto odd = make_folds(make_ids(105), 10, 1);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(odd.folds[i].size(), i < 5 ? 11u : 10u);
  EXPECT_THROW(make_folds(make_ids(9), 10, 1), Error);
}

TEST(MakeFolds, PartitionProperty) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + static_cast<std::size_t>(rng.below(10));
    const std::size_t n = k + static_cast<std::size_t>(rng.below(200));
    const auto ids = make_ids(n);
    const auto plan = make_folds(ids, k, rng.next_u64());
    std::multiset<std::string> all;
    for (const auto& f : plan.folds) all.insert(f.begin(), f.end());
    ASSERT_EQ(all.size(), n);
    ASSERT_EQ(std::set<std::string>(all.begin(), all.end()), std::set<std::string>(ids.begin(), ids.end()));
  }
}

TEST(Tune, SinglePointReturnsThatPoint) {
  const Dataset& ds = medium();
  const auto split = make_split(ds, 0.5, 2);
  const auto folds = make_folds(split.train_ids, 5, 2);
  const auto grid = std::vector<SurrogateConfig>{SurrogateConfig::defaults(Family::Dtr)};
  const auto res = tune(ds, folds, grid, {});
  EXPECT_EQ(res.best, grid[0]);
  ASSERT_EQ(res.table.size(), 1u);
  EXPECT_TRUE(std::isfinite(res.table[0].cv_mse));
}

TEST(Tune, RichConfigBeatsStump) {
  const Dataset& ds = medium();
  const auto split = make_split(ds, 0.5, 2);
  const auto folds = make_folds(split.train_ids, 5, 2);
  const auto grid = std::vector<SurrogateConfig>{shallow_dtr(), preset_config("dtr-mean")};
  const auto res = tune(ds, folds, grid, {});
  EXPECT_EQ(res.best_mean_row, 1u);
  EXPECT_EQ(res.best_rms_row, 1u);
  EXPECT_EQ(res.best, grid[1]);
  // Best rows attain the table minima.
  for (const auto& row : res.table) {
    EXPECT_GE(row.cv_mse_mean, res.table[res.best_mean_row].cv_mse_mean);
    EXPECT_GE(row.cv_mse_rms, res.table[res.best_rms_row].cv_mse_rms);
  }
}

TEST(Tune, CombinesPerTargetWinners) {
  const Dataset& ds = medium();
  const auto split = make_split(ds, 0.5, 2);
  const auto folds = make_folds(split.train_ids, 5, 2);
  // Row 0 is good for mean only, row 1 for rms only.
  SurrogateConfig a = preset_config("dtr-mean");
  a.dtr_rms = trees::TreeConfig{.max_depth = 1};
  SurrogateConfig b = preset_config("dtr-mean");
  b.dtr_mean = trees::TreeConfig{.max_depth = 1};
  const auto res = tune(ds, folds, {a, b}, {});
  EXPECT_EQ(res.best_mean_row, 0u);
  EXPECT_EQ(res.best_rms_row, 1u);
  EXPECT_EQ(res.best.dtr_mean, a.dtr_mean);
  EXPECT_EQ(res.best.dtr_rms, b.dtr_rms);
}

TEST(Tune, GridErrors) {
  const Dataset& ds = medium();
  const auto folds = make_folds(make_split(ds, 0.5, 2).train_ids, 5, 2);
  EXPECT_THROW(tune(ds, folds, {}, {}), Error);
  EXPECT_THROW(tune(ds, folds, {SurrogateConfig::defaults(Family::Dtr), SurrogateConfig::defaults(Family::Rf)}, {}),
               Error);
  SurrogateConfig bad = SurrogateConfig::defaults(Family::Dtr);
  bad.dtr_mean.max_depth = 0;
  try {
    tune(ds, folds, {SurrogateConfig::defaults(Family::Dtr), bad}, {});
    FAIL() << "expected a failure";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
    EXPECT_NE(std::string(e.what()).find("grid point 1"), std::string::npos) << e.what();
  }
}

TEST(Tune, GanUsesCvBudget) {
  const Dataset ds = synth_with({{5.0, 0.0}, {3.0, 2.0}}, {0, 90, 180, 270, 45, 135});
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < 4; ++i) ids.push_back(ds[i].id);
  const auto folds = make_folds(ids, 2, 1);
  SurrogateConfig g = quick_gan(100000);  // would take hours at the full budget
  TuneOptions opt;
  opt.gan_cv_epochs = 1;
  const auto res = tune(ds, folds, {g}, opt);
  EXPECT_TRUE(std::isfinite(res.table[0].cv_mse));
  EXPECT_EQ(res.best.gan.epochs, 100000u);
}

TEST(Ttv, DtrSmokeAndDeterminism) {
  const Dataset& ds = medium();
  TtvOptions opt;
  opt.seed = 4;
  const auto a = ttv_run(ds, preset_config("dtr"), opt);
  for (const double v : {a.report.test.mean.mse, a.report.test.mean.r2, a.report.test.rms.mse, a.report.test.rms.r2}) {
    EXPECT_TRUE(std::isfinite(v));
  }
  EXPECT_EQ(a.report.n_train + a.report.n_test, 131u);  // floor(0.3 * 438)
  EXPECT_EQ(a.report.set_aside.size(), 6u);
  const auto b = ttv_run(ds, preset_config("dtr"), opt);
  EXPECT_EQ(report_text(a.report), report_text(b.report));
  EXPECT_EQ(a.plan, b.plan);
}

TEST(Ttv, MoreDataHelpsOnMajorityOfSeeds) {
  const Dataset& ds = medium();
  int wins = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    TtvOptions opt;
    opt.seed = seed;
    opt.portion = 0.3;
    const double small = ttv_run(ds, preset_config("dtr"), opt).report.test.mean.mse;
    opt.portion = 1.0;
    const double large = ttv_run(ds, preset_config("dtr"), opt).report.test.mean.mse;
    wins += large <= small ? 1 : 0;
  }
  EXPECT_GE(wins, 2);
}

TEST(Ttv, GridRunFillsCvTable) {
  const Dataset& ds = medium();
  TtvOptions opt;
  opt.portion = 0.5;
  opt.grid = {shallow_dtr(), preset_config("dtr")};
  opt.tune.folds = 4;
  const auto r = ttv_run(ds, preset_config("dtr"), opt);
  EXPECT_EQ(r.report.cv_table.size(), 2u);
  const std::string text = report_text(r.report);
  EXPECT_NE(text.find("[cv]"), std::string::npos);
  EXPECT_NE(text.find("[set_aside]"), std::string::npos);
  EXPECT_EQ(text.find("time"), std::string::npos);
}

TEST(Sweep, OneRowPerPortionWithExactValues) {
  const Dataset& ds = medium();
  const auto portions = default_portions();
  ASSERT_EQ(portions.size(), 9u);
  const auto rows = portion_sweep(ds, shallow_dtr(), portions, TtvOptions{});
  ASSERT_EQ(rows.size(), 9u);
  for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(rows[i].portion, portions[i]);
  std::ostringstream os;
  write_sweep_csv(rows, os);
  const std::string csv = os.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "portion,mse_mean,r2_mean,mse_rms,r2_rms");
}

TEST(SetAside, LeakedCasesAreRecovered) {
  const Dataset& ds = medium();
  const SplitPlan plan = make_split(ds, 0.3, 9);
  // Deliberate leak: an unrestricted tree over the whole dataset memorizes every case.
  SurrogateConfig cfg = SurrogateConfig::defaults(Family::Dtr);
  cfg.dtr_mean = cfg.dtr_rms = trees::TreeConfig{};
  const Surrogate leaked = fit_surrogate(cfg, all_cases(ds));
  const auto bundles = validate_setaside(leaked, ds, plan);
  ASSERT_EQ(bundles.size(), 6u);
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    const auto& b = bundles[i];
    EXPECT_EQ(b.id, plan.set_aside_ids[i]);
    EXPECT_LT(b.mean.mse, 1e-20);
    EXPECT_LT(b.rms.mse, 1e-20);
    for (std::size_t f = 0; f < 4; ++f) EXPECT_LT(b.face_mse.mean[f], 1e-20);
    EXPECT_EQ(b.pred_mean.values().size(), 9u * 28u);
  }
  const Surrogate honest = fit_surrogate(shallow_dtr(), all_cases(ds));
  EXPECT_GT(validate_setaside(honest, ds, plan)[0].mean.mse, 1e-3);
}

TEST(SetAside, FaceErrorsAverageToMapError) {
  const Dataset& ds = medium();
  const SplitPlan plan = make_split(ds, 0.3, 9);
  const auto b = validate_setaside(fit_surrogate(shallow_dtr(), all_cases(ds)), ds, plan);
  for (const auto& x : b) {
    double avg = 0.0;
    for (const double v : x.face_mse.rms) avg += v / 4.0;
    EXPECT_NEAR(avg, x.rms.mse, 1e-14);
  }
  SplitPlan missing = plan;
  missing.set_aside_ids.push_back("nope");
  EXPECT_THROW(validate_setaside(fit_surrogate(shallow_dtr(), all_cases(ds)), ds, missing), Error);
}

TEST(Range, InclusiveValues) {
  EXPECT_EQ((Range{0.0, 1.0, 0.25}.values()), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ((Range{2.0, 2.0, 1.0}.values()).size(), 1u);
  EXPECT_EQ((Range{1.5, 8.0, 0.1}.values()).size(), 66u);
  EXPECT_THROW((Range{0.0, 1.0, 0.0}.values()), Error);
  EXPECT_THROW((Range{1.0, 0.0, 0.5}.values()), Error);
}

TEST(Reducers, KnownMap) {
  MapValues v{};
  for (std::size_t t = 0; t < v.size(); ++t) v[t] = static_cast<double>(face_of_column(t % 28)) - 1.5;
  v[0] = -7.0;
  const PressureMap m(MapKind::Mean, v);
  EXPECT_EQ(reduce_map(m, Reducer::MaxAbs), 7.0);
  EXPECT_EQ(reduce_map(m, Reducer::Max), 1.5);
  EXPECT_EQ(reduce_map(m, Reducer::Min), -7.0);
  EXPECT_NEAR(reduce_map(m, Reducer::FrontMean), -1.5 - 5.5 / 63.0, 1e-14);
  EXPECT_NEAR(reduce_map(m, Reducer::RightMean), -0.5, 1e-14);
  EXPECT_NEAR(reduce_map(m, Reducer::BackMean), 0.5, 1e-14);
  EXPECT_NEAR(reduce_map(m, Reducer::LeftMean), 1.5, 1e-14);
  EXPECT_NEAR(reduce_map(m, Reducer::Mean), -5.5 / 252.0, 1e-14);
  for (const char* name : {"maxabs", "max", "min", "mean", "front-mean", "right-mean", "back-mean", "left-mean"}) {
    EXPECT_EQ(to_string(parse_reducer(name)), name);
  }
  EXPECT_THROW(parse_reducer("median"), Error);
}

TEST(DenseMap, SinglePointMatchesReducedPrediction) {
  const Dataset& ds = medium();
  const Surrogate model = fit_surrogate(preset_config("dtr"), all_cases(ds));
  const auto pts = dense_map(model, 60.0, {6.0, 6.0, 1.0}, {0.0, 0.0, 1.0}, MapKind::Rms, Reducer::Max);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].value, reduce_map(model.predict(CaseCondition::make(6.0, 0.0, 60.0)).second, Reducer::Max));
  const auto grid = dense_map(model, 0.0, {1.5, 8.0, 0.5}, {0.0, 4.0, 0.5}, MapKind::Mean, Reducer::Mean);
  EXPECT_EQ(grid.size(), 14u * 9u);
  EXPECT_EQ(grid[1].sx, 1.5);
  EXPECT_EQ(grid[1].sy, 0.5);
}

TEST(DenseMap, RmsPeakNearInterferencePeak) {
  const Dataset& ds = medium();
  const Surrogate model = fit_surrogate(preset_config("rf"), all_cases(ds));
  const double step = 0.5;
  const auto pts = dense_map(model, 0.0, {1.5, 8.0, step}, {0.0, 4.0, step}, MapKind::Rms, Reducer::Max);
  const auto peak = *std::max_element(pts.begin(), pts.end(),
                                      [](const DensePoint& a, const DensePoint& b) { return a.value < b.value; });
  EXPECT_LE(std::abs(peak.sx - 5.0), step + 1e-12);
  EXPECT_LE(std::abs(peak.sy), step + 1e-12);
  std::ostringstream os;
  write_dense_csv(pts, os);
  const std::string csv = os.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(pts.size() + 1));
}

TEST(Presets, TunedSettings) {
  const auto dm = preset_config("dtr-mean");
  EXPECT_EQ(dm.family, Family::Dtr);
  EXPECT_EQ(dm.dtr_mean.max_depth, 20u);
  EXPECT_EQ(dm.dtr_mean.max_leaf_nodes, 20000u);
  EXPECT_EQ(dm.dtr_mean.min_samples_leaf, 20u);
  EXPECT_EQ(dm.dtr_rms, dm.dtr_mean);
  const auto rr = preset_config("rf-rms");
  EXPECT_EQ(rr.rf_mean.n_trees, 150u);
  EXPECT_EQ(rr.rf_mean.n_features_per_split, 3u);
  EXPECT_EQ(rr.rf_mean.max_depth, 25u);
  const auto d = preset_config("dtr");
  EXPECT_EQ(d.dtr_mean.max_depth, 20u);
  EXPECT_EQ(d.dtr_rms.max_depth, 25u);
  const auto g = preset_config("gan-default");
  EXPECT_EQ(g.family, Family::Gan);
  EXPECT_EQ(g.gan.epochs, 2000u);
  EXPECT_EQ(g.gan.alpha, 100.0);
  for (const auto& name : preset_names()) EXPECT_NO_THROW(preset_config(name));
  EXPECT_THROW(preset_config("svm"), Error);
  EXPECT_THROW(preset_config("gan-mean"), Error);
}

TEST(Presets, EpochBudgetKeepsDecayFraction) {
  const auto g = with_epoch_budget(gans::GanConfig{}, 500);
  EXPECT_EQ(g.epochs, 500u);
  EXPECT_EQ(g.decay_start_epoch, 250u);
  EXPECT_THROW(with_epoch_budget(gans::GanConfig{}, 0), Error);
}

TEST(Reseed, DistinctStreamsPerComponent) {
  SurrogateConfig a = SurrogateConfig::defaults(Family::Rf);
  SurrogateConfig b = a;
  a.reseed(1);
  b.reseed(2);
  EXPECT_NE(a.rf_mean.seed, a.rf_rms.seed);
  EXPECT_NE(a.rf_mean.seed, b.rf_mean.seed);
  SurrogateConfig c = SurrogateConfig::defaults(Family::Rf);
  c.reseed(1);
  EXPECT_EQ(a, c);
}

TEST(ConfigJson, RoundTripAndOverrides) {
  for (const auto& name : preset_names()) {
    const auto cfg = preset_config(name);
    EXPECT_EQ(config_from_json(to_json(cfg)), cfg) << name;
  }
  const auto j = nlohmann::json::parse(R"({"family":"dtr","dtr_mean":{"max_depth":null,"min_samples_leaf":3}})");
  const auto cfg = config_from_json(j);
  EXPECT_EQ(cfg.dtr_mean.max_depth, trees::kUnlimited);
  EXPECT_EQ(cfg.dtr_mean.min_samples_leaf, 3u);
  EXPECT_EQ(cfg.dtr_mean.max_leaf_nodes, 20000u);
  EXPECT_EQ(cfg.dtr_rms, trees::dtr_preset(MapKind::Rms));
  const auto echo = config_echo(cfg);
  EXPECT_EQ(echo.find("gan"), std::string::npos);
  EXPECT_EQ(echo, config_echo(config_from_json(nlohmann::json::parse(echo))));
}

TEST(ConfigJson, Rejections) {
  auto kind_of = [](const char* text) {
    try {
      config_from_json(nlohmann::json::parse(text));
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  EXPECT_EQ(kind_of(R"({"dtr_mean":{}})"), ErrorKind::Config);
  EXPECT_EQ(kind_of(R"({"family":"knn"})"), ErrorKind::Config);
  EXPECT_EQ(kind_of(R"({"family":"dtr","depth":3})"), ErrorKind::Config);
  EXPECT_EQ(kind_of(R"({"family":"dtr","dtr_mean":{"depth":3}})"), ErrorKind::Config);
  EXPECT_EQ(kind_of(R"({"family":"dtr","dtr_mean":{"max_depth":-1}})"), ErrorKind::Config);
  EXPECT_EQ(kind_of(R"({"family":"gan","gan":{"alpha":"big"}})"), ErrorKind::Config);
  EXPECT_EQ(kind_of(R"({"family":"xgb","xgb_rms":{"max_depth":null}})"), ErrorKind::Config);
  EXPECT_EQ(kind_of(R"([1,2])"), ErrorKind::Config);
}

TEST(ModelFile, RoundTripEveryFamily) {
  const Dataset ds = synth_with({{5.0, 0.0}, {3.0, 2.0}}, {0, 90, 180});
  auto train = all_cases(ds);
  SurrogateConfig rf = SurrogateConfig::defaults(Family::Rf);
  rf.rf_mean.n_trees = rf.rf_rms.n_trees = 3;
  SurrogateConfig xgb = SurrogateConfig::defaults(Family::Xgb);
  xgb.xgb_mean.n_trees = xgb.xgb_rms.n_trees = 3;
  const TrainContext ctx{0.3, 77, 6};
  for (const SurrogateConfig& cfg : {SurrogateConfig::defaults(Family::Dtr), rf, xgb, quick_gan(1)}) {
    const Surrogate model = fit_surrogate(cfg, train);
    std::stringstream a, b;
    write_model_file(a, model, ctx);
    write_model_file(b, model, ctx);
    ASSERT_EQ(a.str(), b.str());
    const ModelFile back = read_model_file(a);
    EXPECT_EQ(back.context, ctx);
    EXPECT_EQ(back.model.config(), cfg);
    for (const auto* c : train) EXPECT_EQ(back.model.predict(c->condition), model.predict(c->condition));
    std::stringstream again;
    write_model_file(again, back.model, back.context);
    EXPECT_EQ(again.str(), b.str());
    const std::string bytes = b.str();
    for (const std::size_t cut : {std::size_t{3}, bytes.size() / 2, bytes.size() - 1}) {
      std::istringstream trunc(bytes.substr(0, cut));
      try {
        read_model_file(trunc);
        ADD_FAILURE() << "truncated file at " << cut << " parsed";
      } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
      }
    }
  }
}

TEST(Surrogate, FamilyMismatchAndRmsClip) {
  const Dataset ds = synth_with({{5.0, 0.0}}, {0, 90});
  const auto gan = fit_surrogate(quick_gan(1), all_cases(ds));
  EXPECT_THROW(Surrogate(SurrogateConfig::defaults(Family::Dtr), gan.models()), Error);
  for (const auto* c : all_cases(ds)) {
    for (const double v : gan.predict(c->condition).second.values()) EXPECT_GE(v, 0.0);
  }
  for (const char* f : {"dtr", "rf", "xgb", "gan"}) EXPECT_EQ(to_string(parse_family(f)), f);
  EXPECT_THROW(parse_family("svr"), Error);
}
