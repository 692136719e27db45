#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "windml/core/types.hpp"

namespace windml {

/// Text interchange format, one header line then three lines per case:
///
///   windml-dataset,v1,<n_cases>
///   case,<id>,<sx>,<sy>,<theta>
///   mean,<252 values, row-major>
///   rms,<252 values, row-major>
///
/// Values are written with 17 significant digits, so a round trip is exact.
inline constexpr const char* kDatasetMagic = "windml-dataset";
inline constexpr const char* kDatasetVersion = "v1";

void write_dataset(const Dataset& ds, std::ostream& out);
void write_dataset(const Dataset& ds, const std::filesystem::path& path);

/// Throws Parse with the offending line number on malformed input.
Dataset read_dataset(std::istream& in, Provenance provenance = Provenance::Converted);
Dataset read_dataset(const std::filesystem::path& path, Provenance provenance = Provenance::Converted);

/// Serialized bytes of a dataset, as written by write_dataset.
std::string dataset_to_string(const Dataset& ds);

}  // namespace windml
