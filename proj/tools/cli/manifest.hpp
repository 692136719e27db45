#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace windml::cli {

/// Hex SHA-256 of a file's bytes. Io error if unreadable.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

/// One per output directory, written after every other artifact.
struct RunManifest {
  std::string command_line;
  nlohmann::json config;  // null when the command has no model config
  std::string dataset_path;
  std::string dataset_sha256;
  std::uint64_t seed = 0;
  std::vector<std::filesystem::path> artifacts;
  std::chrono::system_clock::time_point started;
  double wall_seconds = 0.0;

  /// Artifact paths are rendered relative to dir.
  nlohmann::json to_json(const std::filesystem::path& dir) const;
};

inline constexpr const char* kManifestName = "manifest.json";

/// Records each artifact with its digest, then writes <dir>/manifest.json.
void write_manifest(const std::filesystem::path& dir, const RunManifest& m);

}  // namespace windml::cli
