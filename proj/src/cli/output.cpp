#include "cli/output.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <boost/version.hpp>
#include <openssl/evp.h>

#include "heatlab/errors.hpp"

namespace heatlab::cli {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw InternalError("sha256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

OutputDir::OutputDir(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw ConfigError("cannot create output directory " + root_.string() + ": " + ec.message());
}

void OutputDir::write(const std::string& name, const std::string& content) {
  const auto path = root_ / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
  files_.erase(std::remove_if(files_.begin(), files_.end(), [&](const Entry& e) { return e.name == name; }),
               files_.end());
  files_.push_back({name, sha256_hex(content), content.size()});
}

void OutputDir::write_manifest(const std::string& command, const RunConfig& cfg, unsigned long seed,
                               const nlohmann::json& summary) const {
  nlohmann::json m;
  m["tool"] = "heatlab";
  m["command"] = command;
  m["versions"] = {{"heatlab", kVersion}, {"boost", BOOST_LIB_VERSION}, {"compiler", __VERSION__}};
  m["seed"] = seed;
  m["config_hash"] = sha256_hex(cfg.canonical_text());
  m["config"] = cfg.values();
  nlohmann::json files = nlohmann::json::array();
  for (const Entry& e : files_) files.push_back({{"file", e.name}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  m["outputs"] = files;
  m["summary"] = summary;
  std::ofstream out(root_ / "manifest.json");
  if (!out) throw ConfigError("cannot write manifest.json");
  out << m.dump(2) << "\n";
}

}  // namespace heatlab::cli
