#pragma once

// Named numerical checks of the lemmas and inequalities, each reducing to a
// PASS/FAIL verdict with supporting metrics.

#include <string>
#include <vector>

#include <json.hpp>

#include "cli/config.hpp"

namespace heatlab::cli {

struct VerifyResult {
  std::string id;
  bool pass = false;
  std::string detail;
  nlohmann::json metrics;
  std::string csv;  // optional supporting table
};

/// lem-subsol, lem-UB, compuv1, itergi, lemM2, intersect, energy-mono, zero-sturm
const std::vector<std::string>& verify_ids();

/// Throws ConfigError for an unknown id.
VerifyResult run_verify(const std::string& id, const RunConfig& cfg, unsigned long seed);

/// Largest per-step energy increase along the series, divided by 1 + |E(0)|.
double max_relative_energy_increase(const SolveOutcome& out);

}  // namespace heatlab::cli
