#include "windml/ingest/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "windml/error.hpp"

namespace windml {
namespace {

void append_value(std::string& line, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  line.append(buf, static_cast<std::size_t>(n));
}

std::string map_line(std::string_view tag, const PressureMap& map) {
  std::string line(tag);
  line.reserve(252 * 24);
  for (const double v : map.values()) {
    line.push_back(',');
    append_value(line, v);
  }
  line.push_back('\n');
  return line;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  fail(ErrorKind::Parse, "line " + std::to_string(line_no) + ": " + what);
}

double parse_double(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || field.empty()) {
    parse_fail(line_no, "bad number '" + std::string(field) + "'");
  }
  if (!std::isfinite(v)) parse_fail(line_no, "non-finite literal '" + std::string(field) + "'");
  return v;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

PressureMap read_map(LineReader& reader, std::string_view tag, MapKind kind) {
  std::string line;
  if (!reader.next(line)) parse_fail(reader.line_no() + 1, "missing '" + std::string(tag) + "' line");
  const auto fields = split_fields(line);
  if (fields.front() != tag) {
    parse_fail(reader.line_no(), "expected '" + std::string(tag) + "' line, got '" + std::string(fields.front()) + "'");
  }
  if (fields.size() != tapgrid::kTaps + 1) {
    parse_fail(reader.line_no(), "expected 252 values, got " + std::to_string(fields.size() - 1));
  }
  MapValues values{};
  for (std::size_t i = 0; i < tapgrid::kTaps; ++i) values[i] = parse_double(fields[i + 1], reader.line_no());
  try {
    return PressureMap(kind, values);
  } catch (const Error& e) {
    parse_fail(reader.line_no(), e.what());
  }
}

}  // namespace

void write_dataset(const Dataset& ds, std::ostream& out) {
  out << kDatasetMagic << ',' << kDatasetVersion << ',' << ds.size() << '\n';
  std::string line;
  for (const auto& r : ds.records()) {
    if (r.id.empty() || r.id.find_first_of(",\n\r") != std::string::npos) {
      fail(ErrorKind::Data, "case id '" + r.id + "' is empty or contains a separator");
    }
    line = "case,";
    line += r.id;
    for (const double v : {r.condition.sx, r.condition.sy, r.condition.theta}) {
      line.push_back(',');
      append_value(line, v);
    }
    line.push_back('\n');
    out << line << map_line("mean", r.mean_map) << map_line("rms", r.rms_map);
  }
  if (!out) fail(ErrorKind::Io, "write failed");
}

void write_dataset(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  write_dataset(ds, out);
}

std::string dataset_to_string(const Dataset& ds) {
  std::ostringstream out;
  write_dataset(ds, out);
  return std::move(out).str();
}

Dataset read_dataset(std::istream& in, Provenance provenance) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) parse_fail(1, "missing header");
  const auto header = split_fields(line);
  if (header.size() != 3 || header[0] != kDatasetMagic) parse_fail(1, "bad header '" + line + "'");
  if (header[1] != kDatasetVersion) parse_fail(1, "unsupported version '" + std::string(header[1]) + "'");
  std::size_t n_cases = 0;
  {
    const auto [ptr, ec] = std::from_chars(header[2].data(), header[2].data() + header[2].size(), n_cases);
    if (ec != std::errc() || ptr != header[2].data() + header[2].size() || header[2].empty()) {
      parse_fail(1, "bad case count '" + std::string(header[2]) + "'");
    }
  }

  std::vector<CaseRecord> records;
  records.reserve(n_cases);
  for (std::size_t c = 0; c < n_cases; ++c) {
    if (!reader.next(line)) parse_fail(reader.line_no() + 1, "expected " + std::to_string(n_cases) + " cases, found " + std::to_string(c));
    const auto fields = split_fields(line);
    if (fields.size() != 5 || fields[0] != "case") parse_fail(reader.line_no(), "expected 'case,<id>,<sx>,<sy>,<theta>'");
    if (fields[1].empty()) parse_fail(reader.line_no(), "empty case id");
    const std::size_t case_line = reader.line_no();
    const double sx = parse_double(fields[2], case_line);
    const double sy = parse_double(fields[3], case_line);
    const double theta = parse_double(fields[4], case_line);
    std::string id(fields[1]);
    PressureMap mean = read_map(reader, "mean", MapKind::Mean);
    PressureMap rms = read_map(reader, "rms", MapKind::Rms);
    records.emplace_back(std::move(id), CaseCondition::make(sx, sy, theta), std::move(mean), std::move(rms));
  }
  while (reader.next(line)) {
    if (!line.empty()) parse_fail(reader.line_no(), "trailing content after " + std::to_string(n_cases) + " cases");
  }
  try {
    return Dataset(std::move(records), provenance);
  } catch (const Error& e) {
    fail(ErrorKind::Parse, e.what());
  }
}

Dataset read_dataset(const std::filesystem::path& path, Provenance provenance) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  return read_dataset(in, provenance);
}

}  // namespace windml
