#include "windml/ingest/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <limits>
#include <set>

#include "windml/error.hpp"
#include "windml/rng.hpp"

namespace windml {

std::vector<Location> default_locations() {
  std::vector<Location> locs;
  locs.reserve(37);
  locs.push_back({1.5, 0.0});
  locs.push_back({1.5, 1.0});
  for (int sx = 2; sx <= 8; ++sx) {
    for (int sy = 0; sy <= 4; ++sy) locs.push_back({static_cast<double>(sx), static_cast<double>(sy)});
  }
  return locs;
}

std::vector<double> default_angles() {
  std::vector<double> angles;
  for (int a = 0; a < 360; a += 5) angles.push_back(a);
  return angles;
}

std::pair<MapValues, MapValues> synth_maps(const CaseCondition& cond) {
  using std::numbers::pi;
  const double theta = cond.theta * pi / 180.0;
  const double g = std::exp(-((cond.sx - 5.0) * (cond.sx - 5.0) + cond.sy * cond.sy) / 10.0);
  MapValues mean{};
  MapValues rms{};
  for (std::size_t row = 0; row < tapgrid::kRows; ++row) {
    const double v = static_cast<double>(row);
    for (std::size_t col = 0; col < tapgrid::kCols; ++col) {
      const double phi = 2.0 * pi * static_cast<double>(col) / static_cast<double>(tapgrid::kCols);
      const std::size_t tap = row * tapgrid::kCols + col;
      mean[tap] = 0.8 * std::cos(phi - theta) * (1.0 - 0.6 * g) - 0.4 * (1.0 + 0.2 * v / 8.0);
      rms[tap] = 0.1 + 0.25 * g + 0.1 * std::abs(std::sin(phi - theta));
    }
  }
  return {mean, rms};
}

namespace {
std::string synth_id(std::size_t loc, double theta) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "L%02zu_T%g", loc, theta);
  return buf;
}
}  // namespace

Dataset synth_generate(const SynthSpec& spec) {
  if (spec.locations.empty()) fail(ErrorKind::Config, "synthetic spec has no locations");
  if (spec.angles.empty()) fail(ErrorKind::Config, "synthetic spec has no angles");
  if (!(spec.noise_amp >= 0.0) || !std::isfinite(spec.noise_amp)) fail(ErrorKind::Config, "noise_amp must be finite and >= 0");
  for (const double a : spec.angles) {
    if (!(a >= 0.0 && a < 360.0)) fail(ErrorKind::Config, "synthetic angle " + std::to_string(a) + " outside [0, 360)");
  }
  for (const auto& l : spec.locations) {
    if (!std::isfinite(l.sx) || !std::isfinite(l.sy)) fail(ErrorKind::Config, "non-finite synthetic location");
  }

  Rng noise(spec.seed, 0x5e17);
  std::vector<CaseRecord> records;
  records.reserve(spec.locations.size() * spec.angles.size());
  for (std::size_t li = 0; li < spec.locations.size(); ++li) {
    for (const double theta : spec.angles) {
      const auto cond = CaseCondition::make(spec.locations[li].sx, spec.locations[li].sy, theta);
      auto [mean, rms] = synth_maps(cond);
      if (spec.noise_amp > 0.0) {
        for (auto& v : mean) v += spec.noise_amp * noise.uniform(-1.0, 1.0);
        for (auto& v : rms) v = std::max(0.0, v + spec.noise_amp * noise.uniform(-1.0, 1.0));
      }
      records.emplace_back(synth_id(li, theta), cond, PressureMap(MapKind::Mean, mean), PressureMap(MapKind::Rms, rms));
    }
  }
  return Dataset(std::move(records), Provenance::Synthetic);
}

DatasetSummary dataset_summary(const Dataset& ds) {
  if (ds.empty()) fail(ErrorKind::EmptyInput, "dataset summary of an empty dataset");
  DatasetSummary s;
  s.n_cases = ds.size();
  std::set<std::pair<double, double>> locations;
  std::set<double> angles;
  s.mean_min = s.rms_min = std::numeric_limits<double>::infinity();
  s.mean_max = s.rms_max = -std::numeric_limits<double>::infinity();
  for (const auto& r : ds.records()) {
    locations.emplace(r.condition.sx, r.condition.sy);
    angles.insert(r.condition.theta);
    const auto [mlo, mhi] = std::minmax_element(r.mean_map.values().begin(), r.mean_map.values().end());
    const auto [rlo, rhi] = std::minmax_element(r.rms_map.values().begin(), r.rms_map.values().end());
    s.mean_min = std::min(s.mean_min, *mlo);
    s.mean_max = std::max(s.mean_max, *mhi);
    s.rms_min = std::min(s.rms_min, *rlo);
    s.rms_max = std::max(s.rms_max, *rhi);
  }
  s.n_locations = locations.size();
  s.n_angles = angles.size();
  return s;
}

}  // namespace windml
