#include "cli/config.hpp"

#include <cmath>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "heatlab/diagnostics.hpp"
#include "heatlab/errors.hpp"
#include "heatlab/stationary.hpp"

namespace heatlab::cli {

const std::vector<KeySpec>& known_keys() {
  static const std::vector<KeySpec> keys = {
      {"domain.kind", "ball", "ball | whole_space"},
      {"domain.n", "3", "space dimension"},
      {"domain.R", "1", "ball radius or truncation radius R_max"},
      {"domain.far_field", "dirichlet_zero", "whole space wall: dirichlet_zero | decay_matched"},
      {"grid.cells", "200", "number of cells J"},
      {"grid.spacing", "uniform", "uniform | boundary_refined | origin_and_wall_refined"},
      {"f.spec", "power:3", "power:P | logpower:P:A | exp | sum:P:ETA | zero"},
      {"initial.family", "eigenfunction",
       "eigenfunction | flat | gaussian | bubble_tail | compact_cap | singular_minus"},
      {"initial.amplitude", "1", "multiplier lambda applied to the family profile"},
      {"initial.width", "1", "flat: plateau radius; gaussian: e-folding radius"},
      {"initial.taper", "1", "flat: width of the linear taper"},
      {"initial.A", "1", "bubble_tail amplitude"},
      {"initial.gamma", "2", "bubble_tail decay exponent"},
      {"initial.C0", "1", "bubble_tail tail constant"},
      {"initial.R0", "2", "compact_cap support radius"},
      {"initial.eta", "1", "compact_cap taper width"},
      {"initial.p", "7", "singular_minus exponent of U_*"},
      {"initial.alpha", "5", "singular_minus correction exponent"},
      {"initial.eps", "1", "singular_minus correction size"},
      {"initial.cap", "10", "singular_minus cap near the origin"},
      {"policy.T_max", "10", "horizon"},
      {"policy.M_blow", "1e8", "blow-up sup-norm threshold"},
      {"policy.decay_tol", "1e-6", "decay threshold"},
      {"policy.bound_window", "1", "trailing window for GLOBAL_BOUNDED"},
      {"policy.dt_initial", "1e-4", "first trial step"},
      {"policy.dt_min", "1e-13", "step floor"},
      {"policy.dt_max", "0.05", "step ceiling"},
      {"policy.local_tol", "1e-6", "step-doubling error target"},
      {"policy.cfl", "0.2", "reaction limit dt <= cfl / max f'"},
      {"policy.clip_tol", "1e-12", "accepted relative negativity"},
      {"policy.energy_certificate", "true", "stop on negative energy (ball only)"},
      {"policy.max_steps", "5000000", "accepted step limit"},
      {"policy.snapshot_every", "0", "profile snapshot stride (0: first and last)"},
      {"threshold.width", "1e-3", "relative bracket width"},
      {"threshold.lambda_start", "1", "first lambda of the exponential search"},
      {"threshold.lambda_cap", "1e6", "largest lambda tried"},
      {"threshold.lambda_floor", "1e-8", "smallest lambda tried"},
      {"threshold.max_probes", "200", "probe budget"},
      {"threshold.eps_list", "0.05,0.1", "perturbations for the type probes"},
      {"threshold.margins", "0.05,0.1", "subthreshold margins"},
      {"verify.eps", "0.1", "epsilon of the comparison and iterate checks"},
      {"verify.k", "5", "largest iterate order"},
      {"verify.M0", "1000", "iterate-map range [0, M0]"},
      {"verify.points", "61", "log-spaced samples of s in [1, M0]"},
      {"verify.trials", "1000", "random trials for the geometry checks"},
      {"verify.lambda", "0.5", "amplitude of v0 in the pair checks"},
  };
  return keys;
}

RunConfig::RunConfig() {
  for (const KeySpec& k : known_keys()) defaults_[k.key] = k.default_value;
  values_ = defaults_;
}

RunConfig RunConfig::load(const std::string& path) {
  RunConfig cfg;
  cfg.merge_file(path);
  return cfg;
}

void RunConfig::merge_file(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("cannot read config: " + std::string(e.what()));
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key outside a section: " + section);
    for (const auto& [key, value] : body) set(section + "." + key, value.get_value<std::string>());
  }
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (!defaults_.count(key)) throw ConfigError("unknown config key: " + key);
  values_[key] = value;
}

const std::string& RunConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key: " + key);
  return it->second;
}

bool RunConfig::is_default(const std::string& key) const { return get(key) == defaults_.at(key); }

double RunConfig::number(const std::string& key) const {
  const std::string& text = get(key);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: " + text);
  }
  if (used != text.size()) throw ConfigError(key + ": not a number: " + text);
  return v;
}

double RunConfig::positive(const std::string& key) const {
  const double v = number(key);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key + " must be positive");
  return v;
}

long RunConfig::integer(const std::string& key) const {
  const std::string& text = get(key);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: " + text);
  }
  if (used != text.size()) throw ConfigError(key + ": not an integer: " + text);
  return v;
}

bool RunConfig::flag(const std::string& key) const {
  const std::string& text = get(key);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key + ": expected true or false");
}

std::vector<double> RunConfig::number_list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream in(get(key));
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError(key + ": bad list entry: " + item);
    }
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::string RunConfig::canonical_text() const {
  std::string text;
  for (const auto& [k, v] : values_) text += k + " = " + v + "\n";
  return text;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

double spec_number(const std::string& spec, const std::string& item) {
  try {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used == item.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("bad number in nonlinearity spec '" + spec + "'");
}

}  // namespace

Nonlinearity parse_nonlinearity(const std::string& spec, int n) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw ConfigError("empty nonlinearity spec");
  const std::string& kind = parts[0];
  auto need = [&](std::size_t count) {
    if (parts.size() != count) throw ConfigError("nonlinearity spec '" + spec + "' has the wrong arity");
  };
  if (kind == "power") {
    need(2);
    return Nonlinearity::power(spec_number(spec, parts[1]));
  }
  if (kind == "logpower") {
    need(3);
    return Nonlinearity::log_power(spec_number(spec, parts[1]), spec_number(spec, parts[2]));
  }
  if (kind == "exp") {
    need(1);
    return Nonlinearity::exp_minus_linear();
  }
  if (kind == "sum") {
    need(3);
    return Nonlinearity::sum_of_powers(n, spec_number(spec, parts[1]), spec_number(spec, parts[2]));
  }
  if (kind == "zero") {
    need(1);
    return Nonlinearity::zero();
  }
  throw ConfigError("unknown nonlinearity kind '" + kind + "'");
}

Nonlinearity make_nonlinearity(const RunConfig& cfg) {
  return parse_nonlinearity(cfg.get("f.spec"), static_cast<int>(cfg.integer("domain.n")));
}

RadialDomain make_domain(const RunConfig& cfg) {
  const long n = cfg.integer("domain.n");
  if (n < 1) throw ConfigError("domain.n must be >= 1");
  const double R = cfg.positive("domain.R");
  const std::string& kind = cfg.get("domain.kind");
  if (kind == "ball") return RadialDomain::ball(static_cast<int>(n), R);
  if (kind == "whole_space") {
    const std::string& ff = cfg.get("domain.far_field");
    FarField far;
    if (ff == "dirichlet_zero") {
      far = FarField::dirichlet_zero;
    } else if (ff == "decay_matched") {
      far = FarField::decay_matched;
    } else {
      throw ConfigError("domain.far_field must be dirichlet_zero or decay_matched");
    }
    return RadialDomain::whole_space(static_cast<int>(n), R, far);
  }
  throw ConfigError("domain.kind must be ball or whole_space");
}

GridPtr make_grid(const RunConfig& cfg) {
  const long cells = cfg.integer("grid.cells");
  if (cells < 2) throw ConfigError("grid.cells must be >= 2");
  return heatlab::make_grid(make_domain(cfg), static_cast<std::size_t>(cells),
                            spacing_from_string(cfg.get("grid.spacing")));
}

RunPolicy make_policy(const RunConfig& cfg) {
  RunPolicy p;
  p.T_max = cfg.positive("policy.T_max");
  p.M_blow = cfg.positive("policy.M_blow");
  p.decay_tol = cfg.positive("policy.decay_tol");
  p.bound_window = cfg.number("policy.bound_window");
  p.dt_initial = cfg.positive("policy.dt_initial");
  p.dt_min = cfg.positive("policy.dt_min");
  p.dt_max = cfg.positive("policy.dt_max");
  p.local_tol = cfg.positive("policy.local_tol");
  p.cfl = cfg.positive("policy.cfl");
  p.clip_tol = cfg.number("policy.clip_tol");
  p.energy_certificate = cfg.flag("policy.energy_certificate");
  const long steps = cfg.integer("policy.max_steps");
  const long every = cfg.integer("policy.snapshot_every");
  if (steps < 1 || every < 0) throw ConfigError("policy.max_steps must be >= 1, snapshot_every >= 0");
  p.max_steps = static_cast<std::size_t>(steps);
  p.snapshot_every = static_cast<std::size_t>(every);
  p.validate();
  return p;
}

ThresholdPolicy make_threshold_policy(const RunConfig& cfg, unsigned jobs) {
  ThresholdPolicy t;
  t.width = cfg.positive("threshold.width");
  t.lambda_start = cfg.positive("threshold.lambda_start");
  t.lambda_cap = cfg.positive("threshold.lambda_cap");
  t.lambda_floor = cfg.positive("threshold.lambda_floor");
  const long probes = cfg.integer("threshold.max_probes");
  if (probes < 1) throw ConfigError("threshold.max_probes must be >= 1");
  t.max_probes = static_cast<int>(probes);
  t.jobs = jobs;
  return t;
}

InitialFamily make_family(const RunConfig& cfg, const GridPtr& grid) {
  const std::string& kind = cfg.get("initial.family");
  if (kind == "eigenfunction") {
    if (!grid->domain().dirichlet_wall()) throw ConfigError("eigenfunction family needs a Dirichlet wall");
    return InitialFamily::scaled(eigenpair(grid).phi1);
  }
  if (kind == "flat") {
    const double width = cfg.positive("initial.width");
    const double taper = cfg.positive("initial.taper");
    return InitialFamily::scaled(sample_profile(grid, [=](double r) {
      if (r <= width) return 1.0;
      if (r >= width + taper) return 0.0;
      return (width + taper - r) / taper;
    }));
  }
  if (kind == "gaussian") {
    const double width = cfg.positive("initial.width");
    return InitialFamily::scaled(sample_profile(grid, [=](double r) { return std::exp(-r * r / (width * width)); }));
  }
  if (kind == "bubble_tail") {
    return InitialFamily::bubble_tail(cfg.positive("initial.A"), cfg.positive("initial.gamma"),
                                      cfg.positive("initial.C0"));
  }
  if (kind == "compact_cap") {
    return InitialFamily::compact_cap(cfg.positive("initial.R0"), cfg.positive("initial.eta"));
  }
  if (kind == "singular_minus") {
    return InitialFamily::singular_minus(cfg.positive("initial.p"), cfg.positive("initial.alpha"),
                                         cfg.positive("initial.eps"), cfg.positive("initial.cap"));
  }
  throw ConfigError("unknown initial.family '" + kind + "'");
}

RadialProfile make_initial(const RunConfig& cfg, const GridPtr& grid) {
  const double amplitude = cfg.number("initial.amplitude");
  if (!(amplitude >= 0.0)) throw ConfigError("initial.amplitude must be >= 0");
  return make_family(cfg, grid).at(amplitude, grid);
}

}  // namespace heatlab::cli
