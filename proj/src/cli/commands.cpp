#include "cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli/config.hpp"
#include "cli/output.hpp"
#include "cli/scenarios.hpp"
#include "cli/svg_plot.hpp"
#include "cli/verify.hpp"
#include "heatlab/errors.hpp"
#include "heatlab/stationary.hpp"

namespace heatlab::cli {

namespace {

struct Globals {
  std::string config;
  std::string out_dir = "heatlab-out";
  unsigned jobs = 1;
  unsigned long seed = 1;
  std::string f;
  int n = 0;
  double eps = 0.0;
  int k = 0;
  std::vector<std::string> set;
};

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

RunConfig assemble(const Globals& g, RunConfig base) {
  if (!g.config.empty()) base.merge_file(g.config);
  if (g.n != 0) base.set("domain.n", std::to_string(g.n));
  if (!g.f.empty()) base.set("f.spec", g.f);
  if (g.eps != 0.0) base.set("verify.eps", num(g.eps));
  if (g.k != 0) base.set("verify.k", std::to_string(g.k));
  for (const std::string& kv : g.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    base.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return base;
}

void cmd_exponents(int n, double p, std::ostream& out) {
  const Exponents e = exponents(n, p);
  out << "n    = " << e.n << "\n";
  out << "p    = " << num(e.p) << "\n";
  out << "p_S  = " << num(e.p_S) << "\n";
  out << "p_JL = " << num(e.p_JL) << "\n";
  out << "m    = " << num(e.m) << "\n";
  out << "ell  = " << (e.ell ? num(*e.ell) : std::string("undefined (p < p_JL)")) << "\n";
}

void cmd_constants(int n, std::optional<double> p, double cf, double A, double c, bool log_mode, std::ostream& out) {
  if (log_mode) {
    const double q = p.value_or(5.0);
    const LogConstants lc = log_constants(q);
    out << "p     = " << num(q) << "\n";
    out << "u_ell = " << num(lc.u_ell) << "\n";
    out << "c_ell = " << num(lc.c_ell) << "\n";
    out << "a_ell = " << num(lc.a_ell) << "\n";
    out << "h_a(u_ell) = " << num(h_a(q, lc.a_ell, lc.u_ell)) << "\n";
    return;
  }
  const IntersectionRadii radii = intersection_radii(n, A, c);
  out << "n     = " << n << "\n";
  out << "p_S   = " << num(sobolev_exponent(n)) << "\n";
  out << "c_n   = " << num(far_field_constant(n)) << "\n";
  out << "A1    = " << num(radii.A1) << "  (A = " << num(A) << ")\n";
  out << "R_c   = " << num(radii.Rc) << "  (c = " << num(c) << ")\n";
  out << "R_1/2 = " << num(radius_rc(n, 0.5)) << "\n";
  out << "Rstar = " << num(radii.Rstar) << "\n";
  out << "c0    = " << num(c0_constant(n, cf)) << "  (Cf = " << num(cf) << ")\n";
  if (p) {
    const SingularState s = singular_state(n, *p);
    out << "m     = " << num(s.m) << "\n";
    out << "c_p   = " << num(s.c_p) << "  (p = " << num(*p) << ")\n";
  }
}

PlotSeries series_column(const std::string& label, const SolveOutcome& o, double SeriesRow::*field) {
  PlotSeries s;
  s.label = label;
  s.x.push_back(o.initial.t);
  s.y.push_back(o.initial.*field);
  for (const SeriesRow& r : o.series) {
    s.x.push_back(r.t);
    s.y.push_back(r.*field);
  }
  return s;
}

void cmd_solve(const Globals& g, std::ostream& out) {
  const RunConfig cfg = assemble(g, RunConfig());
  const Nonlinearity f = make_nonlinearity(cfg);
  const GridPtr grid = make_grid(cfg);
  const RunPolicy policy = make_policy(cfg);
  const SolveOutcome o = run(f, make_initial(cfg, grid), policy);
  OutputDir dir(g.out_dir);
  std::ostringstream series;
  write_series_csv(series, o);
  dir.write("series.csv", series.str());
  std::ostringstream profiles;
  profiles << "t,r,u\n";
  char buf[128];
  for (const RadialProfile& snap : o.snapshots) {
    for (std::size_t j = 0; j < snap.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", snap.t, snap.r(j), snap.values[j]);
      profiles << buf;
    }
  }
  dir.write("profiles.csv", profiles.str());
  dir.write("sup_norm.svg", line_plot("sup norm", "t", "sup |u|", {series_column("u", o, &SeriesRow::sup_norm)}, true));
  dir.write("energy.svg", line_plot("energy", "t", "E(u)", {series_column("u", o, &SeriesRow::energy)}));
  nlohmann::json summary = {{"classification", to_string(o.classification)},
                            {"reason", o.reason},
                            {"accepted_steps", o.stats.accepted},
                            {"rejected_steps", o.stats.rejected},
                            {"sup_norm_bound", o.sup_norm_bound},
                            {"final_norm", o.final_norm},
                            {"energy_min", o.energy_min},
                            {"energy_certificate", o.energy_certificate},
                            {"truncation_relative", o.truncation_relative},
                            {"max_clip", o.stats.max_clip}};
  if (o.T_est) summary["T_est"] = *o.T_est;
  dir.write_manifest("solve", cfg, g.seed, summary);
  out << to_string(o.classification);
  if (o.T_est) out << " T_est=" << num(*o.T_est);
  out << " sup_norm_bound=" << num(o.sup_norm_bound) << " steps=" << o.stats.accepted << " reason=\"" << o.reason
      << "\"";
  if (o.truncation_relative) out << " (truncation-relative)";
  out << "\n";
}

void cmd_threshold(const Globals& g, std::ostream& out) {
  const RunConfig cfg = assemble(g, RunConfig());
  OutputDir dir(g.out_dir);
  const ThresholdBundle b = run_threshold_pipeline(cfg, dir, g.jobs, true, true, out);
  dir.write("summary.txt", summary_line(b.report) + "\n");
  dir.write_manifest("threshold", cfg, g.seed, b.summary);
}

int cmd_verify(const Globals& g, const std::string& id, std::ostream& out) {
  const RunConfig cfg = assemble(g, RunConfig());
  const VerifyResult r = run_verify(id, cfg, g.seed);
  OutputDir dir(g.out_dir);
  if (!r.csv.empty()) dir.write("verify_" + id + ".csv", r.csv);
  nlohmann::json summary = r.metrics;
  summary["id"] = id;
  summary["pass"] = r.pass;
  dir.write_manifest("verify " + id, cfg, g.seed, summary);
  out << (r.pass ? "PASS " : "FAIL ") << id << ": " << r.detail << "\n";
  return r.pass ? 0 : 3;
}

int cmd_scenario(const Globals& g, const std::string& name, double eta, std::ostream& out) {
  const RunConfig cfg = assemble(g, scenario_config(name, eta));
  OutputDir dir(g.out_dir);
  nlohmann::json summary;
  const std::vector<Check> checks = run_scenario(name, cfg, dir, g.jobs, out, summary);
  bool ok = true;
  nlohmann::json list = nlohmann::json::array();
  for (const Check& c : checks) {
    out << "CHECK " << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    list.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    ok = ok && c.pass;
  }
  summary["checks"] = list;
  dir.write_manifest("scenario " + name, cfg, g.seed, summary);
  return ok ? 0 : 3;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"heatlab: numerical laboratory for u_t - Δu = f(u)"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--out-dir", g.out_dir, "directory for CSV, SVG and manifest output");
  app.add_option("--jobs", g.jobs, "worker threads for independent runs")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "seed for randomized checks");
  app.add_option("--f", g.f, "nonlinearity, e.g. power:3 or logpower:5:-1");
  app.add_option("--eps", g.eps, "verify.eps override");
  app.add_option("--k", g.k, "verify.k override");
  app.add_option("--set", g.set, "key=value config override (repeatable)");

  int n = 3;
  double p = 0.0;
  auto* exp_cmd = app.add_subcommand("exponents", "critical exponents for (n, p)");
  exp_cmd->add_option("--n", n, "dimension")->required();
  exp_cmd->add_option("--p", p, "exponent")->required();

  auto* const_cmd = app.add_subcommand("constants", "bubble radii, c0, c_p and log constants");
  std::optional<double> const_p;
  double cf = 1.0;
  double A = 0.5;
  double c = 0.5;
  bool log_mode = false;
  const_cmd->add_option("--n", n, "dimension");
  const_cmd->add_option("--p", const_p, "exponent for c_p (or for --log)");
  const_cmd->add_option("--cf", cf, "growth constant C_f for c0");
  const_cmd->add_option("--A", A, "bubble amplitude for A1");
  const_cmd->add_option("--c", c, "level for R_c");
  const_cmd->add_flag("--log", log_mode, "log-power constants instead");

  auto* solve_cmd = app.add_subcommand("solve", "integrate one trajectory");
  auto* thr_cmd = app.add_subcommand("threshold", "bisect lambda* and classify the threshold type");

  std::string verify_id;
  auto* verify_cmd = app.add_subcommand("verify", "numerical check of a lemma");
  verify_cmd->add_option("id", verify_id, "check id")->required()->check(CLI::IsMember(verify_ids()));

  std::string scenario;
  double eta = 0.0;
  auto* scen_cmd = app.add_subcommand("scenario", "preset experiment bundle");
  scen_cmd->add_option("name", scenario, "scenario name")->required();
  scen_cmd->add_option("--eta", eta, "sum-of-powers coefficient");

  for (auto* sub : {solve_cmd, thr_cmd, verify_cmd, scen_cmd}) {
    sub->add_option("--n", g.n, "domain.n override");
    sub->add_option("--f", g.f, "nonlinearity override");
    sub->add_option("--eps", g.eps, "verify.eps override");
    sub->add_option("--k", g.k, "verify.k override");
    sub->add_option("--set", g.set, "key=value config override (repeatable)");
    sub->add_option("--config", g.config, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out-dir", g.out_dir, "output directory");
    sub->add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", g.seed, "seed for randomized checks");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*exp_cmd) {
      cmd_exponents(n, p, out);
    } else if (*const_cmd) {
      cmd_constants(n, const_p, cf, A, c, log_mode, out);
    } else if (*solve_cmd) {
      cmd_solve(g, out);
    } else if (*thr_cmd) {
      cmd_threshold(g, out);
    } else if (*verify_cmd) {
      return cmd_verify(g, verify_id, out);
    } else if (*scen_cmd) {
      return cmd_scenario(g, scenario, eta, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace heatlab::cli
