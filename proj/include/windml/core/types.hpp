#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace windml {

/// Tap layout on the principal building: 9 rings (row 0 at the top) by
/// 28 columns, four faces of 7 columns each (front, right, back, left,
/// counter-clockwise viewed from above at theta = 0).
namespace tapgrid {
inline constexpr std::size_t kRows = 9;
inline constexpr std::size_t kCols = 28;
inline constexpr std::size_t kFaces = 4;
inline constexpr std::size_t kColsPerFace = 7;
inline constexpr std::size_t kTaps = kRows * kCols;
static_assert(kTaps == 252);
static_assert(kFaces * kColsPerFace == kCols);
}  // namespace tapgrid

enum class Face { Front = 0, Right = 1, Back = 2, Left = 3 };

std::string_view to_string(Face face);

struct GridPos {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const GridPos&, const GridPos&) = default;
};

GridPos tap_to_grid(std::size_t tap_index);
std::size_t grid_to_tap(std::size_t row, std::size_t col);
Face face_of_column(std::size_t col);

/// Interfering-building offsets (in breadths) plus wind attack angle.
struct CaseCondition {
  double sx = 0.0;
  double sy = 0.0;
  double theta = 0.0;  // degrees, [0, 360)

  /// Normalizes theta into [0, 360) and rejects non-finite values.
  static CaseCondition make(double sx, double sy, double theta_deg);

  friend bool operator==(const CaseCondition&, const CaseCondition&) = default;
};

enum class MapKind { Mean, Rms };

std::string_view to_string(MapKind kind);

using MapValues = std::array<double, tapgrid::kTaps>;

/// Row-major 9x28 grid of pressure coefficients.
class PressureMap {
 public:
  /// Throws Data if any value is non-finite, or negative for an rms map.
  PressureMap(MapKind kind, const MapValues& values);
  PressureMap(MapKind kind, std::span<const double> values);

  MapKind kind() const noexcept { return kind_; }
  const MapValues& values() const noexcept { return values_; }
  double at(std::size_t row, std::size_t col) const;
  double operator[](std::size_t tap) const noexcept { return values_[tap]; }

  friend bool operator==(const PressureMap&, const PressureMap&) = default;

 private:
  MapKind kind_;
  MapValues values_;
};

struct CaseRecord {
  std::string id;
  CaseCondition condition;
  PressureMap mean_map;
  PressureMap rms_map;

  CaseRecord(std::string id, CaseCondition condition, PressureMap mean_map, PressureMap rms_map);

  const PressureMap& map(MapKind kind) const { return kind == MapKind::Mean ? mean_map : rms_map; }

  friend bool operator==(const CaseRecord&, const CaseRecord&) = default;
};

enum class Provenance { Synthetic, Converted };

std::string_view to_string(Provenance p);

class Dataset {
 public:
  Dataset() = default;
  /// Throws Data on duplicate case ids.
  Dataset(std::vector<CaseRecord> records, Provenance provenance);

  const std::vector<CaseRecord>& records() const noexcept { return records_; }
  Provenance provenance() const noexcept { return provenance_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const CaseRecord& operator[](std::size_t i) const { return records_[i]; }

  /// Index of the case with this id; throws Argument if missing.
  std::size_t index_of(std::string_view id) const;
  const CaseRecord& find(std::string_view id) const { return records_[index_of(id)]; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<CaseRecord> records_;
  Provenance provenance_ = Provenance::Synthetic;
};

}  // namespace windml
