#include "windml/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "windml/error.hpp"

namespace windml {

std::string_view to_string(Face face) {
  switch (face) {
    case Face::Front: return "front";
    case Face::Right: return "right";
    case Face::Back: return "back";
    case Face::Left: return "left";
  }
  return "?";
}

std::string_view to_string(MapKind kind) { return kind == MapKind::Mean ? "mean" : "rms"; }

std::string_view to_string(Provenance p) { return p == Provenance::Synthetic ? "synthetic" : "converted"; }

GridPos tap_to_grid(std::size_t tap_index) {
  if (tap_index >= tapgrid::kTaps) {
    fail(ErrorKind::Range, "tap index " + std::to_string(tap_index) + " outside [0, 252)");
  }
  return {tap_index / tapgrid::kCols, tap_index % tapgrid::kCols};
}

std::size_t grid_to_tap(std::size_t row, std::size_t col) {
  if (row >= tapgrid::kRows || col >= tapgrid::kCols) {
    fail(ErrorKind::Range, "grid position (" + std::to_string(row) + ", " + std::to_string(col) + ") outside 9x28");
  }
  return tapgrid::kCols * row + col;
}

Face face_of_column(std::size_t col) {
  if (col >= tapgrid::kCols) fail(ErrorKind::Range, "column " + std::to_string(col) + " outside [0, 28)");
  return static_cast<Face>(col / tapgrid::kColsPerFace);
}

CaseCondition CaseCondition::make(double sx, double sy, double theta_deg) {
  if (!std::isfinite(sx) || !std::isfinite(sy) || !std::isfinite(theta_deg)) {
    fail(ErrorKind::Data, "case condition has a non-finite component");
  }
  double t = std::fmod(theta_deg, 360.0);
  if (t < 0.0) t += 360.0;
  if (t >= 360.0) t = 0.0;  // fmod of a tiny negative can round up to 360
  return {sx, sy, t};
}

PressureMap::PressureMap(MapKind kind, const MapValues& values) : kind_(kind), values_(values) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v)) fail(ErrorKind::Data, "non-finite pressure coefficient at tap " + std::to_string(i));
    if (kind_ == MapKind::Rms && v < 0.0) {
      fail(ErrorKind::Data, "negative rms coefficient at tap " + std::to_string(i));
    }
  }
}

namespace {
MapValues to_values(std::span<const double> values) {
  if (values.size() != tapgrid::kTaps) {
    fail(ErrorKind::Shape, "pressure map needs 252 values, got " + std::to_string(values.size()));
  }
  MapValues out{};
  std::copy(values.begin(), values.end(), out.begin());
  return out;
}
}  // namespace

PressureMap::PressureMap(MapKind kind, std::span<const double> values) : PressureMap(kind, to_values(values)) {}

double PressureMap::at(std::size_t row, std::size_t col) const { return values_[grid_to_tap(row, col)]; }

CaseRecord::CaseRecord(std::string id_, CaseCondition condition_, PressureMap mean_map_, PressureMap rms_map_)
    : id(std::move(id_)), condition(condition_), mean_map(std::move(mean_map_)), rms_map(std::move(rms_map_)) {
  if (mean_map.kind() != MapKind::Mean || rms_map.kind() != MapKind::Rms) {
    fail(ErrorKind::Data, "case " + id + ": map kinds must be (mean, rms)");
  }
}

Dataset::Dataset(std::vector<CaseRecord> records, Provenance provenance)
    : records_(std::move(records)), provenance_(provenance) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(records_.size());
  for (const auto& r : records_) {
    if (!seen.insert(r.id).second) fail(ErrorKind::Data, "duplicate case id '" + r.id + "'");
  }
}

std::size_t Dataset::index_of(std::string_view id) const {
  const auto it = std::find_if(records_.begin(), records_.end(), [&](const CaseRecord& r) { return r.id == id; });
  if (it == records_.end()) fail(ErrorKind::Argument, "no case with id '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - records_.begin());
}

}  // namespace windml
