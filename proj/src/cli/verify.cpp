#include "cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "heatlab/diagnostics.hpp"
#include "heatlab/errors.hpp"
#include "heatlab/numerics.hpp"
#include "heatlab/stationary.hpp"

namespace heatlab::cli {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

RadialProfile scaled_eigenfunction(const GridPtr& grid, double amplitude) {
  RadialProfile u = eigenpair(grid).phi1;
  const double peak = u.sup_norm();
  for (double& v : u.values) v *= amplitude / peak;
  return u;
}

VerifyResult verify_subsol(const RunConfig& cfg) {
  const Nonlinearity f = make_nonlinearity(cfg);
  const GridPtr grid = make_grid(cfg);
  const RunPolicy policy = make_policy(cfg);
  const double eps = cfg.positive("verify.eps");
  const RadialProfile v0 = scaled_eigenfunction(grid, cfg.positive("verify.lambda"));
  RadialProfile u0 = v0;
  for (std::size_t j = 0; j < u0.size(); ++j) u0.values[j] += eps * f.value(v0.values[j]);
  const PairOutcome pair = run_pair_ordered(f, u0, v0, policy, eps);
  VerifyResult r;
  r.pass = pair.ordering.min_subsol_margin >= -1e-6 && !pair.ordering.violated;
  r.detail = "min margin u - v - eps f(v) = " + num(pair.ordering.min_subsol_margin) + " over " +
             std::to_string(pair.ordering.shared_steps) + " shared steps";
  r.metrics = {{"eps", eps},
               {"min_subsol_margin", pair.ordering.min_subsol_margin},
               {"min_difference", pair.ordering.min_difference},
               {"shared_steps", pair.ordering.shared_steps},
               {"u", to_string(pair.u.classification)},
               {"v", to_string(pair.v.classification)}};
  std::ostringstream csv;
  csv << "t,u_sup_norm,v_sup_norm\n";
  char buf[256];
  const std::size_t rows = std::min(pair.u.series.size(), pair.v.series.size());
  for (std::size_t i = 0; i < rows; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", pair.u.series[i].t, pair.u.series[i].sup_norm,
                  pair.v.series[i].sup_norm);
    csv << buf;
  }
  r.csv = csv.str();
  return r;
}

VerifyResult verify_kaplan(const RunConfig& cfg) {
  const Nonlinearity f = make_nonlinearity(cfg);
  const GridPtr grid = make_grid(cfg);
  RunPolicy policy = make_policy(cfg);
  std::vector<RadialProfile> trajectory;
  policy.substep_observer = [&](const RadialProfile& u) { trajectory.push_back(u); };
  const RadialProfile u0 = scaled_eigenfunction(grid, cfg.positive("verify.lambda"));
  const SolveOutcome out = run(f, u0, policy);
  const KaplanReport rep = kaplan_series(trajectory, f, kaplan_eigenpair(grid));
  VerifyResult r;
  const bool global = out.classification == Classification::decayed ||
                      out.classification == Classification::global_bounded;
  r.pass = rep.min_scaled_gap >= -1e-8 && rep.min_relative_margin >= -1e-4 && (!global || std::isfinite(rep.sup_y));
  r.detail = to_string(out.classification) + ", sup y = " + num(rep.sup_y) + ", min Jensen gap " +
             num(rep.min_scaled_gap) + ", min inequality margin " + num(rep.min_relative_margin);
  r.metrics = {{"classification", to_string(out.classification)},
               {"c1", rep.c1},
               {"sup_y", rep.sup_y},
               {"min_scaled_gap", rep.min_scaled_gap},
               {"min_relative_margin", rep.min_relative_margin},
               {"samples", rep.samples.size()}};
  std::ostringstream csv;
  csv << "t,y,jensen_gap,inequality_margin\n";
  char buf[256];
  for (const KaplanSample& s : rep.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", s.t, s.y, s.jensen_gap, s.inequality_margin);
    csv << buf;
  }
  r.csv = csv.str();
  return r;
}

std::vector<double> s_grid(const RunConfig& cfg) {
  const long points = cfg.integer("verify.points");
  if (points < 2) throw ConfigError("verify.points must be >= 2");
  return numerics::log_space(1.0, cfg.positive("verify.M0"), static_cast<std::size_t>(points));
}

int verify_k(const RunConfig& cfg) {
  const long k = cfg.integer("verify.k");
  if (k < 1) throw ConfigError("verify.k must be >= 1");
  return static_cast<int>(k);
}

VerifyResult verify_compuv1(const RunConfig& cfg) {
  const Nonlinearity f = make_nonlinearity(cfg);
  const auto s = s_grid(cfg);
  const Compuv1Report rep = compuv1_check(f, cfg.positive("verify.eps"), cfg.positive("verify.M0"), verify_k(cfg), s);
  VerifyResult r;
  r.pass = rep.violations == 0;
  r.detail = std::to_string(rep.violations) + " violations, eta = " + num(rep.map.eta) + ", min margin " +
             num(rep.min_margin);
  r.metrics = {{"eta", rep.map.eta}, {"L", rep.map.L}, {"violations", rep.violations}, {"min_margin", rep.min_margin}};
  std::ostringstream csv;
  csv << "s,i,phi_i,bound\n";
  char buf[256];
  for (double x : s) {
    const PhiIterates it = phi_iterates(f, cfg.positive("verify.eps"), cfg.positive("verify.M0"), verify_k(cfg), x);
    for (std::size_t i = 1; i < it.values.size(); ++i) {
      const double bound = x + static_cast<double>(2 * i - 1) * it.map.eta * f.value(x);
      std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g,%.17g\n", x, i, it.values[i], bound);
      csv << buf;
    }
  }
  r.csv = csv.str();
  return r;
}

VerifyResult verify_itergi(const RunConfig& cfg) {
  const Nonlinearity f = make_nonlinearity(cfg);
  const auto s = s_grid(cfg);
  const auto rows = itergi_check(f, cfg.positive("verify.eps"), cfg.positive("verify.M0"), verify_k(cfg), s);
  VerifyResult r;
  int violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::ostringstream csv;
  csv << "k,C_k,violations,min_margin,small_s_margin\n";
  char buf[256];
  for (const ItergiRow& row : rows) {
    violations += row.violations;
    min_margin = std::min(min_margin, row.min_margin);
    std::snprintf(buf, sizeof buf, "%d,%.17g,%d,%.17g,%.17g\n", row.k, row.C_k, row.violations, row.min_margin,
                  row.small_s_margin);
    csv << buf;
  }
  r.pass = violations == 0;
  r.detail = std::to_string(violations) + " violations for k <= " + std::to_string(rows.size()) + ", min margin " +
             num(min_margin);
  r.metrics = {{"violations", violations}, {"min_margin", min_margin}, {"k_max", rows.size()}};
  r.csv = csv.str();
  return r;
}

VerifyResult verify_lemM2(const RunConfig& cfg) {
  const Nonlinearity f = make_nonlinearity(cfg);
  VerifyResult r;
  r.pass = true;
  nlohmann::json rows = nlohmann::json::array();
  for (double M : {1e2, 1e4, 1e6}) {
    const TransitOracle o = transit_oracle(f, M);
    r.pass = r.pass && o.holds;
    rows.push_back({{"M", M}, {"t_transit", o.t_transit}, {"bound", o.bound}, {"holds", o.holds}});
  }
  r.detail = r.pass ? "transit time >= M/(2 f(M)) for M in {1e2, 1e4, 1e6}" : "transit bound violated";
  r.metrics = {{"rows", rows}};
  return r;
}

VerifyResult verify_intersect(const RunConfig& cfg, unsigned long seed) {
  const long trials = cfg.integer("verify.trials");
  if (trials < 1) throw ConfigError("verify.trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(3, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int lemma_fail = 0;
  double worst_residual = 0.0;
  for (long i = 0; i < trials; ++i) {
    const int n = dim(rng);
    const double A = 0.5 + 0.5 * unit(rng);
    const double R = radius_rstar(n) * (1.0 + 2.0 * unit(rng)) * (1.0 + 1e-9);
    const double y0 = 0.5 * R * unit(rng);
    try {
      const Intersection x = find_intersection(n, A, y0, R);
      worst_residual = std::max(worst_residual, x.residual);
      if (!(x.residual < 1e-12) || !(x.y_norm < 0.5 * R)) ++lemma_fail;
    } catch (const std::exception&) {
      ++lemma_fail;
    }
  }
  int scan_fail = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = dim(rng);
    const double A = 0.5 + 1.5 * unit(rng);
    const double B = A * (2.0 + 2.0 * unit(rng));
    const double r_ab = pair_crossing_radius(n, A, B);
    const double offset = 0.5 * r_ab * unit(rng);
    if (!offset_pair_crossing(n, A, B, offset, offset + 10.0 * r_ab)) ++scan_fail;
  }
  // U_1 and U_{1/2} cross exactly once, at A1.
  const int n = 3;
  const double a1 = radius_a1(n, 0.5);
  const GridPtr grid = heatlab::make_grid(RadialDomain::whole_space(n, 4.0 * a1), 40000);
  const RadialProfile u1 = sample_profile(grid, [](double r) { return bubble_eval(3, 1.0, r); });
  const RadialProfile uh = sample_profile(grid, [](double r) { return bubble_eval(3, 0.5, r); });
  const ZeroNumber z = zero_number(u1, uh);
  const double crossing_error = z.crossings.empty() ? std::numeric_limits<double>::infinity() : std::abs(z.crossings.front() - a1);
  VerifyResult r;
  r.pass = lemma_fail == 0 && scan_fail == 0 && z.count == 1 && crossing_error < 1e-6;
  r.detail = std::to_string(trials - lemma_fail) + "/" + std::to_string(trials) + " intersections, " +
             std::to_string(100 - scan_fail) + "/100 offset crossings, z(U_1 - U_1/2) = " + std::to_string(z.count);
  r.metrics = {{"trials", trials},
               {"lemma_failures", lemma_fail},
               {"worst_residual", worst_residual},
               {"scan_failures", scan_fail},
               {"zero_number", z.count},
               {"crossing_error", crossing_error}};
  return r;
}

VerifyResult verify_energy(const RunConfig& cfg) {
  const Nonlinearity f = make_nonlinearity(cfg);
  const GridPtr grid = make_grid(cfg);
  RunPolicy policy = make_policy(cfg);
  policy.energy_certificate = false;
  const double lambda = cfg.positive("verify.lambda");
  VerifyResult r;
  r.pass = true;
  nlohmann::json runs = nlohmann::json::array();
  for (double amplitude : {lambda, 40.0 * lambda}) {
    const SolveOutcome out = run(f, scaled_eigenfunction(grid, amplitude), policy);
    const double rise = max_relative_energy_increase(out);
    r.pass = r.pass && rise <= 1e-6;
    runs.push_back({{"amplitude", amplitude},
                    {"classification", to_string(out.classification)},
                    {"steps", out.series.size()},
                    {"max_relative_increase", rise}});
  }
  r.detail = r.pass ? "energy nonincreasing on every accepted step" : "energy increased beyond tolerance";
  r.metrics = {{"runs", runs}};
  return r;
}

VerifyResult verify_zero_sturm(const RunConfig& cfg) {
  const Nonlinearity f = make_nonlinearity(cfg);
  const GridPtr grid = make_grid(cfg);
  const RunPolicy policy = make_policy(cfg);
  const double lambda = cfg.positive("verify.lambda");
  const double R = grid->domain().wall_radius();
  const RadialProfile u0 = scaled_eigenfunction(grid, lambda);
  const RadialProfile v0 = sample_profile(grid, [&](double r) { return 1.5 * lambda * std::exp(-9.0 * r * r / (R * R)); });
  std::vector<std::pair<double, int>> counts;
  run_pair(f, u0, v0, policy, [&](const RadialProfile& u, const RadialProfile& v) {
    counts.emplace_back(u.t, zero_number(u, v).count);
  });
  int increases = 0;
  for (std::size_t i = 1; i < counts.size(); ++i) {
    if (counts[i].second > counts[i - 1].second) ++increases;
  }
  VerifyResult r;
  r.pass = increases == 0 && !counts.empty();
  r.detail = "zero number " + std::to_string(counts.front().second) + " -> " + std::to_string(counts.back().second) +
             ", " + std::to_string(increases) + " increases";
  r.metrics = {{"initial", counts.front().second}, {"final", counts.back().second}, {"increases", increases}};
  std::ostringstream csv;
  csv << "t,zero_number\n";
  char buf[64];
  for (const auto& [t, c] : counts) {
    std::snprintf(buf, sizeof buf, "%.17g,%d\n", t, c);
    csv << buf;
  }
  r.csv = csv.str();
  return r;
}

}  // namespace

const std::vector<std::string>& verify_ids() {
  static const std::vector<std::string> ids = {"lem-subsol", "lem-UB",      "compuv1",     "itergi",
                                               "lemM2",      "intersect",   "energy-mono", "zero-sturm"};
  return ids;
}

double max_relative_energy_increase(const SolveOutcome& out) {
  const double scale = 1.0 + std::abs(out.initial.energy);
  double prev = out.initial.energy;
  double worst = 0.0;
  for (const SeriesRow& row : out.series) {
    worst = std::max(worst, (row.energy - prev) / scale);
    prev = row.energy;
  }
  return worst;
}

VerifyResult run_verify(const std::string& id, const RunConfig& cfg, unsigned long seed) {
  VerifyResult r;
  if (id == "lem-subsol") {
    r = verify_subsol(cfg);
  } else if (id == "lem-UB") {
    r = verify_kaplan(cfg);
  } else if (id == "compuv1") {
    r = verify_compuv1(cfg);
  } else if (id == "itergi") {
    r = verify_itergi(cfg);
  } else if (id == "lemM2") {
    r = verify_lemM2(cfg);
  } else if (id == "intersect") {
    r = verify_intersect(cfg, seed);
  } else if (id == "energy-mono") {
    r = verify_energy(cfg);
  } else if (id == "zero-sturm") {
    r = verify_zero_sturm(cfg);
  } else {
    throw ConfigError("unknown verify id '" + id + "'");
  }
  r.id = id;
  return r;
}

}  // namespace heatlab::cli
