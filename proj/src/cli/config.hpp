#pragma once

// Experiment configuration: a flat set of dotted keys (section.key = value)
// read from an INI file, with documented defaults. Unknown keys are errors.

#include <map>
#include <string>
#include <vector>

#include "heatlab/grid.hpp"
#include "heatlab/nonlin.hpp"
#include "heatlab/solver.hpp"
#include "heatlab/threshold.hpp"

namespace heatlab::cli {

struct KeySpec {
  const char* key;
  const char* default_value;
  const char* doc;
};

/// Every accepted key with its default, in documentation order.
const std::vector<KeySpec>& known_keys();

class RunConfig {
 public:
  /// All keys at their defaults.
  RunConfig();

  /// Reads an INI file; throws ConfigError on syntax errors or unknown keys.
  static RunConfig load(const std::string& path);
  /// Overlays the keys present in an INI file.
  void merge_file(const std::string& path);

  /// Throws ConfigError for unknown keys.
  void set(const std::string& key, const std::string& value);
  const std::string& get(const std::string& key) const;
  bool is_default(const std::string& key) const;

  double number(const std::string& key) const;
  /// Positive finite number; throws ConfigError otherwise.
  double positive(const std::string& key) const;
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> number_list(const std::string& key) const;

  /// Sorted "key = value" lines; the config hash is taken over this text.
  std::string canonical_text() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> defaults_;
};

/// power:P | logpower:P:A | exp | sum:P:ETA (lead exponent p_S(n)) | zero
Nonlinearity parse_nonlinearity(const std::string& spec, int n);

Nonlinearity make_nonlinearity(const RunConfig& cfg);
RadialDomain make_domain(const RunConfig& cfg);
GridPtr make_grid(const RunConfig& cfg);
RunPolicy make_policy(const RunConfig& cfg);
ThresholdPolicy make_threshold_policy(const RunConfig& cfg, unsigned jobs);
/// The family selected by initial.family; its profile at lambda = 1.
InitialFamily make_family(const RunConfig& cfg, const GridPtr& grid);
/// initial.amplitude times the family profile.
RadialProfile make_initial(const RunConfig& cfg, const GridPtr& grid);

}  // namespace heatlab::cli
