#include "map_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>

#include "windml/error.hpp"

namespace windml::cli {

void write_map_csv(const PressureMap& map, std::ostream& os) {
  char buf[32];
  for (std::size_t r = 0; r < tapgrid::kRows; ++r) {
    for (std::size_t c = 0; c < tapgrid::kCols; ++c) {
      const auto res = std::to_chars(buf, buf + sizeof buf, map.at(r, c));
      if (c > 0) os << ',';
      os.write(buf, res.ptr - buf);
    }
    os << '\n';
  }
}

void write_map_csv(const PressureMap& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  write_map_csv(map, out);
  out.close();
  if (!out) fail(ErrorKind::Io, "failed writing " + path.string());
}

std::string ascii_render(const PressureMap& map) {
  static constexpr char kGlyphs[] = " .:-=+*#%@";
  const auto& v = map.values();
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  std::string out;
  for (std::size_t r = 0; r < tapgrid::kRows; ++r) {
    for (std::size_t c = 0; c < tapgrid::kCols; ++c) {
      if (c > 0 && c % tapgrid::kColsPerFace == 0) out += '|';
      std::size_t level = 0;
      if (span > 0.0) level = std::min<std::size_t>(9, static_cast<std::size_t>((map.at(r, c) - lo) / span * 10.0));
      out += kGlyphs[level];
    }
    out += '\n';
  }
  return out;
}

}  // namespace windml::cli
