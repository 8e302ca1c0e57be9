// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "heatlab/diagnostics.hpp"
#include "heatlab/grid.hpp"
#include "heatlab/nonlin.hpp"
#include "heatlab/numerics.hpp"
#include "heatlab/solver.hpp"
#include "heatlab/stationary.hpp"
#include "heatlab/threshold.hpp"

using namespace heatlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

RadialProfile scaled(const RadialProfile& u, double c) {
  RadialProfile out = u;
  for (double& v : out.values) v *= c;
  return out;
}

RadialProfile peak(const RadialProfile& u, double height) { return scaled(u, height / u.sup_norm()); }

// Every completed threshold report, for the inversion check.
std::vector<std::pair<std::string, std::vector<ProbeRow>>> g_reports;

void record(const std::string& label, const ThresholdReport& rep, const std::vector<ProbeRow>& extra = {}) {
  std::vector<ProbeRow> rows = rep.probes;
  for (const ProbeRow& r : extra) {
    if (r.role == "eps_super" || r.role == "eps_sub") rows.push_back(r);
  }
  g_reports.emplace_back(label, std::move(rows));
}

// ---------------------------------------------------------------------------

Outcome exponent_table() {
  Outcome v;
  v.require(sobolev_exponent(3) == 5.0, "p_S(3) = 5");
  v.require(sobolev_exponent(4) == 3.0, "p_S(4) = 3");
  for (int n = 1; n <= 10; ++n) v.require(std::isinf(joseph_lundgren_exponent(n)), "p_JL(" + std::to_string(n) + ") = inf");
  const double jl11 = 1.0 + 4.0 / (11.0 - 4.0 - 2.0 * std::sqrt(10.0));
  v.require(std::abs(joseph_lundgren_exponent(11) - 6.9220) <= 1e-3, "p_JL(11) ~ 6.9220");
  v.require(close_rel(joseph_lundgren_exponent(11), jl11, 1e-12), "p_JL(11) closed form");
  const Exponents e = exponents(11, 7.0);
  v.require(e.ell.has_value() && std::abs(*e.ell - 13.0 / 3.0) <= 1e-12, "ell(11,7) = 13/3");
  v.note("p_JL(11) = " + fmt(joseph_lundgren_exponent(11)) + ", ell(11,7) = " + fmt(e.ell.value_or(kInf)));
  return v;
}

Outcome log_constants_check() {
  Outcome v;
  const LogConstants lc = log_constants(5.0);
  v.require(std::abs(lc.u_ell - 1.832) <= 1e-3, "u_ell ~ 1.832");
  v.require(std::abs(lc.c_ell - 1.339) <= 1e-3, "c_ell ~ 1.339");
  v.require(std::abs(2.0 * std::log(2.0 + lc.u_ell * lc.u_ell) - lc.u_ell * lc.u_ell) <= 1e-12, "u_ell root");
  for (double p : {2.0, 3.0, 5.0, 7.0}) {
    const LogConstants c = log_constants(p);
    v.require(std::abs(h_a(p, c.a_ell, c.u_ell)) <= 1e-9, "h_{a_ell}(u_ell) = 0 for p = " + fmt(p));
    bool negative = false;
    for (double u : numerics::lin_space(1e-3, c.u_ell, 2001)) {
      if (u < c.u_ell && h_a(p, c.a_ell, u) < 0.0) negative = true;
    }
    v.require(negative, "scan finds h < 0 below u_ell for p = " + fmt(p));
  }
  v.note("u_ell = " + fmt(lc.u_ell) + ", c_ell = " + fmt(lc.c_ell));
  return v;
}

double bubble_residual(int n, std::size_t cells) {
  const double p = sobolev_exponent(n);
  const auto grid = make_grid(RadialDomain::whole_space(n, 12.0), cells);
  const auto op = discretize_laplacian(*grid);
  const RadialProfile U = sample_profile(grid, [n](double r) { return bubble_eval(n, 1.0, r); });
  const auto lap = op.apply(U.values);
  double worst = 0.0;
  for (std::size_t j = 0; j < grid->size() && grid->r(j) <= 6.0; ++j)
    worst = std::max(worst, std::abs(lap[j] + std::pow(U.values[j], p)));
  return worst;
}

Outcome bubble_geometry() {
  Outcome v;
  for (int n : {3, 4, 5}) {
    const double e1 = bubble_residual(n, 200), e2 = bubble_residual(n, 400), e3 = bubble_residual(n, 800);
    const double order = std::min(std::log2(e1 / e2), std::log2(e2 / e3));
    v.require(order >= 1.8, "residual order >= 1.8 for n = " + std::to_string(n) + " (got " + fmt(order) + ")");
  }
  // U_1 and U_{1/2}: U_1 = U_{1/2} at r^2 = 12 for n = 3
  const double a1 = 2.0 * std::sqrt(3.0);
  const auto grid = make_grid(RadialDomain::whole_space(3, 4.0 * a1), 40000);
  const RadialProfile u1 = sample_profile(grid, [](double r) { return bubble_eval(3, 1.0, r); });
  const RadialProfile uh = sample_profile(grid, [](double r) { return bubble_eval(3, 0.5, r); });
  const ZeroNumber z = zero_number(u1, uh);
  v.require(z.count == 1, "zero_number(U_1, U_1/2) = 1");
  v.require(!z.crossings.empty() && std::abs(z.crossings.front() - a1) < 1e-6, "crossing within 1e-6 of A1");
  v.require(std::abs(radius_a1(3, 0.5) - a1) < 1e-12, "A1 closed form");

  std::mt19937_64 rng(20261015);
  std::uniform_int_distribution<int> dim(3, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int ok = 0;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int n = dim(rng);
    const double A = 0.5 + 0.5 * unit(rng);
    // R* = 2^{(n-1)/(n-2)} sqrt(n(n-2))
    const double rstar = std::pow(2.0, (n - 1.0) / (n - 2.0)) * std::sqrt(n * (n - 2.0));
    const double R = rstar * (1.0 + 1e-6 + 2.0 * unit(rng));
    const double y0 = 0.5 * R * unit(rng);
    try {
      const Intersection x = find_intersection(n, A, y0, R);
      // recompute phi(t0) = U_1(t0 |y0|) - U_A((t0 - 1)|y0|) independently of the residual field
      const double phi = bubble_eval(n, 1.0, x.t0 * y0) - bubble_eval(n, A, std::abs(x.t0 - 1.0) * y0);
      worst = std::max(worst, std::abs(phi));
      if (std::abs(phi) < 1e-12 && x.y_norm < 0.5 * R) ++ok;
    } catch (const std::exception&) {
    }
  }
  v.require(ok == 1000, "find_intersection on 1000 random triples (" + std::to_string(ok) + " ok)");
  int scan_ok = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = dim(rng);
    const double A = 0.5 + 1.5 * unit(rng);
    const double B = A * (2.0 + 2.0 * unit(rng));
    const double r_ab = std::sqrt(n * (n - 2.0)) * std::pow(A * B, -1.0 / (n - 2.0));
    const double offset = 0.5 * r_ab * unit(rng);
    const auto t = offset_pair_crossing(n, A, B, offset, offset + 10.0 * r_ab);
    if (!t) continue;
    const double d = bubble_eval(n, B, std::abs(*t - offset)) - bubble_eval(n, A, *t);
    if (std::abs(d) < 1e-9 * bubble_eval(n, A, *t)) ++scan_ok;
  }
  v.require(scan_ok == 100, "offset sign-scan crossings (" + std::to_string(scan_ok) + "/100)");
  v.note(std::to_string(ok) + "/1000 intersections, worst |phi| = " + fmt(worst) + ", " + std::to_string(scan_ok) + "/100 scans");
  return v;
}

Outcome c0_quadrature() {
  Outcome v;
  for (int n : {3, 4, 5, 6}) {
    const double c = c0_constant(n, 1.0);
    const double c2 = c0_constant(n, 1.0, 2);
    v.require(c > 0.0, "c0 > 0 for n = " + std::to_string(n));
    v.require(std::abs(c - c2) <= 1e-8 * c, "c0 stable under refinement for n = " + std::to_string(n));
    for (double cf : {0.5, 2.0, 7.0}) {
      const double scaled_c = c0_constant(n, cf);
      v.require(close_rel(scaled_c, c / std::pow(cf, (n - 2.0) / 2.0), 1e-12),
                "Cf scaling for n = " + std::to_string(n) + ", Cf = " + fmt(cf));
    }
    if (n == 3) v.note("c0(3) = " + fmt(c));
  }
  return v;
}

Outcome solver_verification() {
  Outcome v;
  {
    const auto g = make_grid(RadialDomain::ball(3, 1.0), 200);
    const Eigenpair eig = eigenpair(g);
    RunPolicy p;
    p.T_max = 0.05;
    p.dt_initial = 2e-6;
    p.dt_max = 2e-6;
    p.local_tol = 1.0;
    const SolveOutcome o = run(Nonlinearity::zero(), eig.phi1, p);
    const double rate = -std::log(o.final_state.values[0] / eig.phi1.values[0]) / o.final_state.t;
    v.require(close_rel(rate, eig.lambda1, 1e-4), "eigenmode decay rate within 1e-4 (rate " + fmt(rate) + ")");
    v.note("decay rate " + fmt(rate) + " vs lambda1 " + fmt(eig.lambda1) + " (pi^2 = " + fmt(std::numbers::pi * std::numbers::pi) + ")");
  }
  {
    const auto g = make_grid(RadialDomain::whole_space(3, 20.0), 400);
    const RadialProfile u0 = sample_profile(g, [](double r) {
      if (r <= 10.0) return 1.0;
      if (r >= 18.0) return 0.0;
      return 0.5 * (1.0 + std::cos(std::numbers::pi * (r - 10.0) / 8.0));
    });
    for (const auto& f : {Nonlinearity::power(3.0), Nonlinearity::power(5.0), Nonlinearity::log_power(5.0, -1.0)}) {
      // Osgood integral from y0 = 1
      const double T = numerics::integrate_to_infinity([&](double s) { return 1.0 / f.value(s); }, 1.0).value;
      RunPolicy p;
      p.T_max = 2.0 * T;
      const SolveOutcome o = run(f, u0, p);
      const bool ok = o.classification == Classification::blowup && o.T_est && close_rel(*o.T_est, T, 0.05);
      v.require(ok, "flat blow-up time for " + f.name());
      v.note(f.name() + " T_est " + fmt(o.T_est.value_or(kInf)) + " vs " + fmt(T));
    }
  }
  {
    const auto g = make_grid(RadialDomain::ball(3, 1.0), 100);
    double worst = -kInf;
    int runs = 0;
    for (const auto& f : {Nonlinearity::power(3.0), Nonlinearity::log_power(5.0, -1.0), Nonlinearity::exp_minus_linear(),
                          Nonlinearity::sum_of_powers(3, 2.0, 1.0)}) {
      for (double amp : {0.5, 3.0, 12.0}) {
        RunPolicy p;
        p.T_max = 2.0;
        p.energy_certificate = false;
        const RadialProfile u0 = sample_profile(g, [amp](double r) { return amp * std::cos(0.5 * std::numbers::pi * r); });
        const SolveOutcome o = run(f, u0, p);
        const double tol = 1e-6 * (1.0 + std::abs(o.initial.energy));
        double prev = o.initial.energy;
        for (const SeriesRow& row : o.series) {
          worst = std::max(worst, (row.energy - prev) / row.dt / tol);
          prev = row.energy;
        }
        ++runs;
      }
    }
    v.require(worst <= 1.0, "energy nonincreasing on every accepted step");
    v.note(std::to_string(runs) + " energy runs, worst increase ratio " + fmt(worst));
  }
  return v;
}

Outcome subsolution_comparison() {
  Outcome v;
  const auto g = make_grid(RadialDomain::ball(3, 1.0), 100);
  const RadialProfile v0 = peak(eigenpair(g).phi1, 0.5);
  const double eps = 0.1;
  for (const auto& f : {Nonlinearity::power(3.0), Nonlinearity::log_power(5.0, -1.0), Nonlinearity::exp_minus_linear()}) {
    RadialProfile u0 = v0;
    for (std::size_t j = 0; j < u0.size(); ++j) u0.values[j] += eps * f.value(v0.values[j]);
    const PairOutcome po = run_pair_ordered(f, u0, v0, RunPolicy{}, eps);
    const bool global = is_global_side(po.u.classification) && is_global_side(po.v.classification);
    v.require(global, "global pair for " + f.name());
    v.require(po.ordering.min_subsol_margin >= -1e-6, "min(u - v - eps f(v)) >= -1e-6 for " + f.name());
    v.note(f.name() + " margin " + fmt(po.ordering.min_subsol_margin));
  }
  return v;
}

Outcome kaplan_machinery() {
  Outcome v;
  const auto g = make_grid(RadialDomain::ball(3, 1.0), 100);
  const Eigenpair eig = eigenpair(g);
  double worst_gap = kInf;
  double worst_y = 0.0;
  int global_runs = 0, blowup_runs = 0;
  for (const auto& f : {Nonlinearity::power(2.0), Nonlinearity::power(3.0), Nonlinearity::log_power(5.0, -1.0),
                        Nonlinearity::exp_minus_linear(), Nonlinearity::sum_of_powers(3, 2.0, 1.0)}) {
    for (double amp : {1.0, 4.0, 40.0}) {
      std::vector<RadialProfile> traj;
      RunPolicy p;
      p.T_max = 3.0;
      p.substep_observer = [&](const RadialProfile& u) { traj.push_back(u); };
      const SolveOutcome o = run(f, peak(eig.phi1, amp), p);
      const KaplanReport rep = kaplan_series(traj, f, eig);
      double gap = kInf;
      for (const KaplanSample& s : rep.samples) gap = std::min(gap, s.jensen_gap / s.jensen_scale);
      v.require(gap >= -1e-8, "Jensen gap for " + f.name() + " amp " + fmt(amp));
      worst_gap = std::min(worst_gap, gap);
      if (is_global_side(o.classification)) {
        v.require(std::isfinite(rep.sup_y), "finite sup y for global " + f.name() + " amp " + fmt(amp));
        worst_y = std::max(worst_y, rep.sup_y);
        ++global_runs;
      } else if (o.classification == Classification::blowup) {
        ++blowup_runs;
      }
    }
  }
  v.require(global_runs > 0, "at least one global run");
  v.note(std::to_string(global_runs) + " global runs with sup y <= " + fmt(worst_y) + ", " +
         std::to_string(blowup_runs) + " blow-up runs, min scaled Jensen gap " + fmt(worst_gap));
  return v;
}

Outcome iterate_maps() {
  Outcome v;
  const auto s = numerics::log_space(1.0, 1e3, 121);
  for (const auto& f : {Nonlinearity::power(3.0), Nonlinearity::power(5.0), Nonlinearity::log_power(5.0, -1.0)}) {
    for (int k = 1; k <= 5; ++k) {
      const Compuv1Report c = compuv1_check(f, 1.0, 1e3, k, s);
      v.require(c.violations == 0, "iterate bound " + f.name() + " k = " + std::to_string(k));
    }
    const auto rows = itergi_check(f, 1.0, 1e3, 5, s);
    const double eta = iterate_map(f, 1.0, 1e3, 5).eta;
    double C = 1.0 / eta;
    for (const ItergiRow& row : rows) {
      v.require(close_rel(row.C_k, C, 1e-14), "C_k recursion " + f.name());
      v.require(row.violations == 0, "iterated growth bound " + f.name() + " k = " + std::to_string(row.k));
      C = 2.0 * C / eta;
    }
    v.require(rows.size() == 5, "growth-bound rows for k <= 5");
  }
  v.note("3 nonlinearities, k = 1..5, " + std::to_string(s.size()) + " log-spaced s in [1, 1e3], zero violations");
  return v;
}

Outcome transit_oracle_check() {
  Outcome v;
  const std::vector<Nonlinearity> catalog = {
      Nonlinearity::power(1.5), Nonlinearity::power(2.0), Nonlinearity::power(3.0), Nonlinearity::power(5.0),
      Nonlinearity::log_power(3.0, 1.0), Nonlinearity::log_power(5.0, -1.0), Nonlinearity::exp_minus_linear(),
      Nonlinearity::sum_of_powers(3, 2.0, 1.0), Nonlinearity::sum_of_powers(3, 2.0, 0.0)};
  int checked = 0;
  for (double M : {1e2, 1e4, 1e6}) {
    for (const auto& f : catalog) {
      v.require(transit_oracle(f, M).holds, f.name() + " at M = " + fmt(M));
      ++checked;
    }
    const TransitOracle o = transit_oracle(Nonlinearity::power(2.0), M);
    v.require(std::abs(o.t_transit - 1.0 / M) <= 1e-10 / M, "power 2 transit time 1/M at M = " + fmt(M));
  }
  v.note(std::to_string(checked) + " (f, M) pairs");
  return v;
}

Outcome threshold_dichotomy() {
  Outcome v;
  const auto g = make_grid(RadialDomain::ball(3, 1.0), 200);
  const auto f = Nonlinearity::power(3.0);
  const InitialFamily fam = InitialFamily::scaled(eigenpair(g).phi1);
  const RunPolicy policy;
  const ThresholdReport rep = bisect_threshold(fam, g, f, policy);
  v.require(rep.converged && rep.relative_width <= 1e-3, "bracket width <= 1e-3");
  bool lo_ok = false, hi_ok = false;
  for (const ProbeRow& r : rep.probes) {
    if (r.lambda == rep.lambda_lo && is_global_side(r.classification)) lo_ok = true;
    if (r.lambda == rep.lambda_hi && r.classification == Classification::blowup) hi_ok = true;
  }
  v.require(lo_ok && hi_ok, "decisive endpoints");
  const SubthresholdTable sub = subthreshold_probe(rep, fam, g, f, policy, {0.05, 0.1});
  for (const ProbeRow& r : sub.rows)
    v.require(r.classification == Classification::decayed, r.role + " margin " + fmt(r.parameter) + " DECAYED");
  const ThresholdVerdicts types = classify_threshold_type(rep, fam, g, f, policy, {0.05, 0.1});
  for (const ProbeRow& r : types.probes) {
    if (r.role == "eps_super") v.require(r.classification == Classification::blowup, "(1+eps) probe eps " + fmt(r.parameter) + " BLOWUP");
  }
  record("ball power:3 eigenfunction", rep, types.probes);
  v.note("bracket [" + fmt(rep.lambda_lo) + ", " + fmt(rep.lambda_hi) + "], a priori bound " + fmt(sub.a_priori_bound));
  return v;
}

Outcome monotone_classification() {
  Outcome v;
  {
    const auto g = make_grid(RadialDomain::ball(3, 1.0), 100);
    const auto f = Nonlinearity::log_power(5.0, -1.0);
    const InitialFamily fam = InitialFamily::compact_cap(0.8, 0.2);
    const ThresholdReport rep = bisect_threshold(fam, g, f, RunPolicy{});
    record("ball logpower:5:-1 compact cap", rep, classify_threshold_type(rep, fam, g, f, RunPolicy{}, {0.05}).probes);
  }
  {
    const auto g = make_grid(RadialDomain::whole_space(3, 8.0), 160);
    RunPolicy p;
    p.T_max = 5.0;
    ThresholdPolicy tp;
    tp.width = 1e-2;
    record("whole space p_S compact cap",
           bisect_threshold(InitialFamily::compact_cap(1.0, 0.25), g, Nonlinearity::power(5.0), p, tp));
  }
  std::size_t probes = 0;
  for (const auto& [label, rows] : g_reports) {
    const auto inv = find_inversion(rows);
    v.require(!inv, "inversion in " + label + (inv ? " at " + fmt(inv->first) + " < " + fmt(inv->second) : ""));
    probes += rows.size();
  }
  v.note(std::to_string(g_reports.size()) + " reports, " + std::to_string(probes) + " family probes");
  return v;
}

Outcome desk_scale_limits() {
  Outcome v;
  v.note(
      "not reproduced: global unbounded threshold solutions at p = p_S on R^n and type-II blow-up for p >= p_JL "
      "need the unbounded domain and resolution far beyond this solver; the checks above substitute");
  const auto g = make_grid(RadialDomain::whole_space(3, 10.0), 100);
  const RadialProfile small = sample_profile(g, [](double r) { return 0.1 * std::exp(-r * r); });
  const SolveOutcome o = run(Nonlinearity::power(5.0), small, RunPolicy{});
  v.require(is_global_side(o.classification), "small whole-space datum is global");
  v.require(o.truncation_relative, "whole-space global verdict labelled truncation-relative");
  const auto gb = make_grid(RadialDomain::ball(3, 1.0), 50);
  const SolveOutcome b = run(Nonlinearity::power(5.0), peak(eigenpair(gb).phi1, 0.1), RunPolicy{});
  v.require(!b.truncation_relative, "ball verdicts are not truncation-relative");
  return v;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // runtime limit, inf when none is stated
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exponent table", 1.0, exponent_table},
      {2, "log constants", 1.0, log_constants_check},
      {3, "bubble geometry", 30.0, bubble_geometry},
      {4, "c0 quadrature", kInf, c0_quadrature},
      {5, "solver verification", 120.0, solver_verification},
      {6, "subsolution comparison", 60.0, subsolution_comparison},
      {7, "Kaplan machinery", kInf, kaplan_machinery},
      {8, "iterate-map inequalities", 10.0, iterate_maps},
      {9, "transit-time oracle", kInf, transit_oracle_check},
      {10, "threshold dichotomy", 600.0, threshold_dichotomy},
      {11, "monotone classification", kInf, monotone_classification},
      {12, "desk-scale limits", kInf, desk_scale_limits},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.note(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) v.require(false, "runtime " + fmt(secs) + " s over " + fmt(c.budget_s) + " s");
    if (!v.pass) ++failures;
    std::printf("%s %2d %s (%.2f s): %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
