#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace infodiv::cli {

/// Record of one command invocation, written next to its primary output as
/// <out>.manifest.json. Replaying it re-runs the same command with the same
/// flags after checking that the inputs are unchanged.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> params;  // flag name (without dashes) -> value
  std::uint64_t seed = 0;
  std::map<std::string, std::string> input_digests;  // path -> fnv1a64 hex of contents
  std::string tool_version;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);

  /// Argument list (without the program name) that reproduces the run.
  std::vector<std::string> to_args() const;
};

std::string tool_version();

/// fnv1a64 of the file contents as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

std::filesystem::path manifest_path(const std::filesystem::path& output);

}  // namespace infodiv::cli
