#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "windml/core/types.hpp"
#include "windml/eval/surrogate.hpp"

namespace windml::eval {

struct SplitPlan {
  std::vector<std::string> set_aside_ids;
  double portion = 0.0;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  std::uint64_t seed = 0;

  friend bool operator==(const SplitPlan&, const SplitPlan&) = default;
};

/// Set-aside cases are drawn first; floor(portion * remaining) of the rest
/// are used, floor(0.8 n) for training and the remainder for testing.
/// Config error if the portion yields fewer than 2 cases or lies outside
/// (0, 1]; InsufficientSamples if the dataset has <= n_set_aside cases.
SplitPlan make_split(const Dataset& ds, double portion, std::uint64_t seed, std::size_t n_set_aside = 6);

struct CvPlan {
  std::vector<std::vector<std::string>> folds;
  std::uint64_t seed = 0;
};

/// Seeded shuffle then contiguous chunks; the first n mod k folds get one
/// extra id. InsufficientSamples if fewer ids than folds.
CvPlan make_folds(const std::vector<std::string>& train_ids, std::size_t k, std::uint64_t seed);

struct TargetMetrics {
  double mse = 0.0;
  double r2 = 0.0;
};

struct Metrics {
  TargetMetrics mean;
  TargetMetrics rms;
};

/// Pooled over every tap of every case.
Metrics evaluate(const Surrogate& model, std::span<const CaseRecord* const> cases);

struct CvRow {
  SurrogateConfig config;
  double cv_mse_mean = 0.0;
  double cv_mse_rms = 0.0;
  double cv_mse = 0.0;  // average of the two
};

struct TuneOptions {
  std::size_t folds = 10;
  /// Epoch budget for GAN grid points during CV (final training keeps the
  /// configured budget).
  std::size_t gan_cv_epochs = 300;
  std::uint64_t seed = 0;
};

struct TuneResult {
  /// Tree families: mean-target settings from the row with the lowest
  /// cv_mse_mean, rms-target settings from the lowest cv_mse_rms. GAN: the
  /// row with the lowest cv_mse. Ties go to the earlier row.
  SurrogateConfig best;
  std::size_t best_mean_row = 0;
  std::size_t best_rms_row = 0;
  std::vector<CvRow> table;
};

/// Mean held-out MSE over the folds for every grid point. Argument error on
/// an empty or mixed-family grid; training failures are rethrown with the
/// grid index in the message.
TuneResult tune(const Dataset& ds, const CvPlan& plan, const std::vector<SurrogateConfig>& grid,
                const TuneOptions& options);

struct FaceErrors {
  std::array<double, tapgrid::kFaces> mean{};
  std::array<double, tapgrid::kFaces> rms{};
};

struct SetAsideBundle {
  std::string id;
  CaseCondition condition;
  PressureMap true_mean, pred_mean;
  PressureMap true_rms, pred_rms;
  TargetMetrics mean, rms;  // r2 is NaN when the true map is constant
  FaceErrors face_mse;
};

/// Argument error if a set-aside id is missing from the dataset.
std::vector<SetAsideBundle> validate_setaside(const Surrogate& model, const Dataset& ds, const SplitPlan& plan);

struct Report {
  std::string family;
  std::string config;  // echo
  std::uint64_t seed = 0;
  double portion = 0.0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  Metrics test;
  std::vector<CvRow> cv_table;
  std::vector<SetAsideBundle> set_aside;
};

/// Test-split metrics and set-aside bundles of a trained model under a plan
/// (cv_table left empty).
Report plan_report(const Surrogate& model, const Dataset& ds, const SplitPlan& plan);

/// key=value header, then [cv] and [set_aside] CSV sections. No timing
/// fields, so equal runs give equal bytes.
void write_report(const Report& report, std::ostream& os);

struct TtvOptions {
  double portion = 0.3;
  std::uint64_t seed = 0;
  std::size_t n_set_aside = 6;
  /// Empty: train the given config directly. Otherwise tune over the grid.
  std::vector<SurrogateConfig> grid;
  TuneOptions tune;
};

struct TtvResult {
  SplitPlan plan;
  Surrogate model;
  Report report;
};

/// Split, optional CV tuning, final fit on the training split, test-split
/// metrics and set-aside bundles. Model seeds are derived from options.seed.
TtvResult ttv_run(const Dataset& ds, const SurrogateConfig& config, const TtvOptions& options);

struct SweepRow {
  double portion = 0.0;
  Metrics test;
};

std::vector<SweepRow> portion_sweep(const Dataset& ds, const SurrogateConfig& config, const std::vector<double>& portions,
                                    const TtvOptions& options);
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os);
std::vector<double> default_portions();

/// Inclusive arithmetic range; Argument error unless step > 0 and lo <= hi.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
  std::vector<double> values() const;
};

enum class Reducer { MaxAbs, Max, Min, Mean, FrontMean, RightMean, BackMean, LeftMean };
std::string_view to_string(Reducer r);
Reducer parse_reducer(std::string_view name);
double reduce_map(const PressureMap& map, Reducer r);

struct DensePoint {
  double sx = 0.0;
  double sy = 0.0;
  double value = 0.0;
};

/// sx-major rows over the two ranges at a fixed angle.
std::vector<DensePoint> dense_map(const Surrogate& model, double theta, const Range& sx, const Range& sy,
                                  MapKind statistic, Reducer reducer);
void write_dense_csv(const std::vector<DensePoint>& pts, std::ostream& os);

}  // namespace windml::eval
