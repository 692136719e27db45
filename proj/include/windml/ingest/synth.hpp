#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "windml/core/types.hpp"

namespace windml {

struct Location {
  double sx = 0.0;
  double sy = 0.0;
  friend bool operator==(const Location&, const Location&) = default;
};

/// The 37 default interfering-building positions: a 7x5 block upstream
/// (sx 2..8, sy 0..4) plus two close positions at sx = 1.5. Only the count
/// follows the wind-tunnel layout; the coordinates are approximate.
std::vector<Location> default_locations();

/// 0, 5, ..., 355 degrees.
std::vector<double> default_angles();

struct SynthSpec {
  std::vector<Location> locations = default_locations();
  std::vector<double> angles = default_angles();
  std::uint64_t seed = 0;
  double noise_amp = 0.0;
};

/// Closed-form stand-in for the wind-tunnel database. With
/// G = exp(-((sx-5)^2 + sy^2)/10), phi = 2*pi*col/28, v = row:
///
///   mean = 0.8*cos(phi - theta)*(1 - 0.6*G) - 0.4*(1 + 0.2*v/8)
///   rms  = 0.1 + 0.25*G + 0.1*|sin(phi - theta)|
///
/// plus noise_amp*u, u ~ U[-1, 1] seeded, when noise_amp > 0 (rms clipped at 0).
/// Cases are ordered location-major; ids are "L<loc>_T<theta>".
Dataset synth_generate(const SynthSpec& spec);

/// Noise-free synthetic maps for one condition.
std::pair<MapValues, MapValues> synth_maps(const CaseCondition& cond);

struct DatasetSummary {
  std::size_t n_cases = 0;
  std::size_t n_locations = 0;
  std::size_t n_angles = 0;
  double mean_min = 0.0;
  double mean_max = 0.0;
  double rms_min = 0.0;
  double rms_max = 0.0;
};

/// EmptyInput on an empty dataset.
DatasetSummary dataset_summary(const Dataset& ds);

}  // namespace windml
