#pragma once

// Output directory bookkeeping: every written artifact is hashed and listed
// in manifest.json together with the configuration hash and versions.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/config.hpp"

namespace heatlab::cli {

inline constexpr const char* kVersion = "0.1.0";

std::string sha256_hex(const std::string& data);

class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  void write(const std::string& name, const std::string& content);
  /// Writes manifest.json. Contains no timestamps so reruns are identical.
  void write_manifest(const std::string& command, const RunConfig& cfg, unsigned long seed,
                      const nlohmann::json& summary) const;

 private:
  struct Entry {
    std::string name;
    std::string sha256;
    std::size_t bytes;
  };
  std::filesystem::path root_;
  std::vector<Entry> files_;
};

}  // namespace heatlab::cli
