#include "cli/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "cli/svg_plot.hpp"
#include "heatlab/errors.hpp"
#include "heatlab/numerics.hpp"
#include "heatlab/stationary.hpp"

namespace heatlab::cli {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string series_csv(const SolveOutcome& o) {
  std::ostringstream s;
  write_series_csv(s, o);
  return s.str();
}

PlotSeries column(const std::string& label, const SolveOutcome& o, double SeriesRow::*field) {
  PlotSeries p;
  p.label = label;
  p.x.push_back(o.initial.t);
  p.y.push_back(o.initial.*field);
  for (const SeriesRow& r : o.series) {
    p.x.push_back(r.t);
    p.y.push_back(r.*field);
  }
  return p;
}

nlohmann::json verdict_json(const TypeVerdict& v) {
  nlohmann::json j = {{"status", to_string(v.status)}, {"note", v.note}};
  if (v.status == TypeStatus::refuted) j["witness"] = v.witness;
  return j;
}

bool all_of_class(const std::vector<ProbeRow>& rows, Classification c) {
  return !rows.empty() &&
         std::all_of(rows.begin(), rows.end(), [c](const ProbeRow& r) { return r.classification == c; });
}

}  // namespace

ThresholdBundle run_threshold_pipeline(const RunConfig& cfg, OutputDir& out, unsigned jobs, bool classify,
                                       bool subthreshold, std::ostream& log) {
  const Nonlinearity f = make_nonlinearity(cfg);
  const GridPtr grid = make_grid(cfg);
  const RunPolicy policy = make_policy(cfg);
  const InitialFamily family = make_family(cfg, grid);
  ThresholdBundle b;
  b.report = bisect_threshold(family, grid, f, policy, make_threshold_policy(cfg, jobs));
  log << summary_line(b.report) << "\n";
  std::vector<ProbeRow> rows = b.report.probes;
  if (classify) {
    b.verdicts = classify_threshold_type(b.report, family, grid, f, policy, cfg.number_list("threshold.eps_list"), jobs);
    rows.insert(rows.end(), b.verdicts->probes.begin(), b.verdicts->probes.end());
    log << "eps_threshold: " << to_string(b.verdicts->eps_threshold.status)
        << "  epsf_threshold: " << to_string(b.verdicts->epsf_threshold.status)
        << "  strict_surrogate: " << to_string(b.verdicts->strict_surrogate.status) << "\n";
  }
  if (subthreshold) {
    b.subthreshold = subthreshold_probe(b.report, family, grid, f, policy, cfg.number_list("threshold.margins"), jobs);
    for (ProbeRow row : b.subthreshold->rows) {
      row.role = "sub_" + row.role;
      rows.push_back(row);
    }
    log << "subthreshold a priori bound: " << num(b.subthreshold->a_priori_bound) << "\n";
  }
  std::ostringstream csv;
  write_probe_csv(csv, rows);
  out.write("probes.csv", csv.str());
  out.write("strip.svg", classification_strip("classification along lambda u0: " + family.name(), rows));

  const SolveOutcome lo = run(f, family.at(b.report.lambda_lo, grid), policy);
  const SolveOutcome hi = run(f, family.at(b.report.lambda_hi, grid), policy);
  out.write("series_lo.csv", series_csv(lo));
  out.write("series_hi.csv", series_csv(hi));
  out.write("sup_norm.svg", line_plot("sup norm at the bracket ends", "t", "sup |u|",
                                      {column("lambda_lo", lo, &SeriesRow::sup_norm),
                                       column("lambda_hi", hi, &SeriesRow::sup_norm)},
                                      true));
  out.write("energy.svg", line_plot("energy at the bracket ends", "t", "E(u)",
                                    {column("lambda_lo", lo, &SeriesRow::energy),
                                     column("lambda_hi", hi, &SeriesRow::energy)}));

  b.summary = {{"family", b.report.family},
               {"lambda_lo", b.report.lambda_lo},
               {"lambda_hi", b.report.lambda_hi},
               {"relative_width", b.report.relative_width},
               {"converged", b.report.converged},
               {"probes", b.report.probes.size()},
               {"lambda_lo_run", to_string(lo.classification)},
               {"lambda_hi_run", to_string(hi.classification)},
               {"lambda_lo_truncation_relative", lo.truncation_relative}};
  if (!b.report.note.empty()) b.summary["note"] = b.report.note;
  if (b.verdicts) {
    b.summary["eps_threshold"] = verdict_json(b.verdicts->eps_threshold);
    b.summary["epsf_threshold"] = verdict_json(b.verdicts->epsf_threshold);
    b.summary["strict_surrogate"] = verdict_json(b.verdicts->strict_surrogate);
  }
  if (b.subthreshold) b.summary["a_priori_bound"] = b.subthreshold->a_priori_bound;
  return b;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"subcritical-decay", "critical-ball", "supercritical-tail",
                                                 "log-constants", "sum-of-powers", "exam-sum"};
  return names;
}

RunConfig scenario_config(const std::string& name, double eta) {
  RunConfig cfg;
  if (name == "subcritical-decay") {
    cfg.set("f.spec", "power:3");
  } else if (name == "critical-ball") {
    cfg.set("f.spec", "power:5");
  } else if (name == "supercritical-tail") {
    cfg.set("domain.kind", "whole_space");
    cfg.set("domain.n", "11");
    cfg.set("domain.R", "10");
    cfg.set("grid.cells", "300");
    cfg.set("f.spec", "power:7");
    cfg.set("initial.family", "singular_minus");
    cfg.set("initial.p", "7");
    cfg.set("initial.alpha", "5");
    cfg.set("initial.eps", "1");
    cfg.set("initial.cap", "10");
    cfg.set("threshold.width", "1e-2");
    cfg.set("threshold.eps_list", "0.1");
  } else if (name == "log-constants") {
    cfg.set("f.spec", "logpower:5:-1");
  } else if (name == "sum-of-powers" || name == "exam-sum") {
    if (!(eta >= 0.0)) throw ConfigError("--eta must be >= 0");
    cfg.set("domain.kind", "whole_space");
    cfg.set("domain.R", "20");
    cfg.set("grid.cells", "400");
    cfg.set("f.spec", "sum:2:" + num(eta));
    cfg.set("initial.family", "compact_cap");
    cfg.set("initial.R0", "2");
    cfg.set("initial.eta", "1");
  } else {
    throw ConfigError("unknown scenario '" + name + "'");
  }
  return cfg;
}

std::vector<Check> run_scenario(const std::string& name, const RunConfig& cfg, OutputDir& out, unsigned jobs,
                                std::ostream& log, nlohmann::json& summary) {
  std::vector<Check> checks;
  if (name == "log-constants") {
    std::ostringstream table;
    table << "p,u_ell,c_ell,a_ell,h_at_u_ell,min_h_below_u_ell,argmin\n";
    log << "      p        u_ell        c_ell        a_ell   h(u_ell)    min h on (0,u_ell)\n";
    bool roots = true;
    bool negative = true;
    for (double p : {2.0, 3.0, 5.0, 7.0}) {
      const LogConstants lc = log_constants(p);
      const double h0 = h_a(p, lc.a_ell, lc.u_ell);
      double hmin = std::numeric_limits<double>::infinity();
      double umin = 0.0;
      for (double u : numerics::lin_space(1e-3 * lc.u_ell, lc.u_ell * (1.0 - 1e-3), 2000)) {
        const double h = h_a(p, lc.a_ell, u);
        if (h < hmin) {
          hmin = h;
          umin = u;
        }
      }
      roots = roots && std::abs(h0) < 1e-9;
      negative = negative && hmin < 0.0;
      char buf[256];
      std::snprintf(buf, sizeof buf, "%7.3g %12.9f %12.9f %12.9f %10.3g %12.6g at %.6g\n", p, lc.u_ell, lc.c_ell,
                    lc.a_ell, h0, hmin, umin);
      log << buf;
      table << num(p) << "," << num(lc.u_ell) << "," << num(lc.c_ell) << "," << num(lc.a_ell) << "," << num(h0)
            << "," << num(hmin) << "," << num(umin) << "\n";
    }
    const LogConstants lc = log_constants(5.0);
    out.write("log_constants.csv", table.str());
    std::vector<double> us = numerics::lin_space(0.05, 4.0, 400);
    PlotSeries g{"g(u)", us, {}};
    for (double u : us) g.y.push_back(log_g(u));
    out.write("g.svg", line_plot("g(u) = log(2+u^2)(2+u^2)/(2u^2)", "u", "g", {g}, true));
    checks.push_back({"u_ell", std::abs(lc.u_ell - 1.832) < 1e-3, "u_ell = " + num(lc.u_ell)});
    checks.push_back({"c_ell", std::abs(lc.c_ell - 1.339) < 1e-3, "c_ell = " + num(lc.c_ell)});
    checks.push_back({"h_root", roots, "h_{a_ell}(u_ell) = 0 within 1e-9"});
    checks.push_back({"h_negative_below", negative, "h_{a_ell} < 0 somewhere on (0, u_ell)"});
    summary = {{"u_ell", lc.u_ell}, {"c_ell", lc.c_ell}, {"a_ell_p5", lc.a_ell}};
    return checks;
  }

  if (name == "supercritical-tail") {
    const Exponents e = exponents(static_cast<int>(cfg.integer("domain.n")), cfg.positive("initial.p"));
    log << "n = " << e.n << ", p = " << num(e.p) << ", p_JL = " << num(e.p_JL) << ", m = " << num(e.m);
    if (e.ell) log << ", ell = " << num(*e.ell);
    log << "\n";
  }
  const bool subcritical = name == "subcritical-decay";
  const ThresholdBundle b = run_threshold_pipeline(cfg, out, jobs, name == "supercritical-tail", subcritical, log);
  summary = b.summary;
  const bool decisive = b.report.lambda_lo < b.report.lambda_hi;
  checks.push_back({"bracket", decisive && b.report.converged,
                    "[" + num(b.report.lambda_lo) + ", " + num(b.report.lambda_hi) + "] width " +
                        num(b.report.relative_width)});
  checks.push_back({"monotone", !find_inversion(b.report.probes).has_value(), "no BLOWUP below a global lambda"});
  if (subcritical) {
    checks.push_back({"subthreshold_decay", all_of_class(b.subthreshold->rows, Classification::decayed),
                      "all subthreshold probes DECAYED"});
  }
  if (name == "critical-ball") {
    checks.push_back({"hi_blows_up", summary["lambda_hi_run"] == "BLOWUP", "lambda_hi run BLOWUP"});
    checks.push_back({"lo_bounded", summary["lambda_lo_run"] != "BLOWUP", "lambda_lo run bounded"});
  }
  if (name == "supercritical-tail") {
    checks.push_back({"eps_threshold", b.verdicts->eps_threshold.status == TypeStatus::consistent,
                      "eps-threshold " + to_string(b.verdicts->eps_threshold.status)});
  }
  if (name == "supercritical-tail" || name == "sum-of-powers" || name == "exam-sum") {
    checks.push_back({"truncation_relative", summary["lambda_lo_truncation_relative"] == true,
                      "lambda_lo global classification labelled truncation-relative"});
  }
  return checks;
}

}  // namespace heatlab::cli
