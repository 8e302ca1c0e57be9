#pragma once

// Preset experiment bundles and the shared threshold pipeline.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/config.hpp"
#include "cli/output.hpp"

namespace heatlab::cli {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ThresholdBundle {
  ThresholdReport report;
  std::optional<ThresholdVerdicts> verdicts;
  std::optional<SubthresholdTable> subthreshold;
  nlohmann::json summary;
};

/// Bisection, optional type probes and subthreshold table. Writes probes.csv,
/// strip.svg, series_lo.csv, series_hi.csv, sup_norm.svg and energy.svg.
ThresholdBundle run_threshold_pipeline(const RunConfig& cfg, OutputDir& out, unsigned jobs, bool classify,
                                       bool subthreshold, std::ostream& log);

/// subcritical-decay, critical-ball, supercritical-tail, log-constants,
/// sum-of-powers (alias exam-sum).
const std::vector<std::string>& scenario_names();

/// Preset configuration; `eta` feeds the sum-of-powers coefficient. Throws
/// ConfigError for unknown names.
RunConfig scenario_config(const std::string& name, double eta);

/// Runs the preset with `cfg` (usually scenario_config plus overrides).
std::vector<Check> run_scenario(const std::string& name, const RunConfig& cfg, OutputDir& out, unsigned jobs,
                                std::ostream& log, nlohmann::json& summary);

}  // namespace heatlab::cli
