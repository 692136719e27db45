#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "windml/core/types.hpp"

namespace windml::cli {

/// 9 lines of 28 comma-separated values, row 0 first, no header.
void write_map_csv(const PressureMap& map, std::ostream& os);
void write_map_csv(const PressureMap& map, const std::filesystem::path& path);

/// Ten glyph levels from the map's minimum to its maximum, one text line
/// per tap row, faces separated by '|'.
std::string ascii_render(const PressureMap& map);

}  // namespace windml::cli
