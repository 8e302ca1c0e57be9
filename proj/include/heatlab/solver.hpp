#pragma once

// Radial method-of-lines integrator for u_t = Δu + f(u) with adaptive
// implicit-explicit Euler steps and trajectory classification.
//
// Each step solves (W + dt K) u^{n+1} = W (u^n + dt f(u^n)): diffusion
// implicit, reaction explicit. Because K is an M-matrix and F is convex for
// nondecreasing f, the step preserves nonnegativity and ordering and never
// increases the discrete energy ½u^T K u - Σ W F(u).

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heatlab/diagnostics.hpp"
#include "heatlab/grid.hpp"
#include "heatlab/nonlin.hpp"

namespace heatlab {

enum class Classification { blowup, global_bounded, decayed, undecided };

std::string to_string(Classification c);

struct RunPolicy {
  double T_max = 10.0;
  double M_blow = 1e8;  // also reached once f(sup) exceeds 1e300
  double decay_tol = 1e-6;
  double bound_window = 1.0;  // trailing time window for GLOBAL_BOUNDED
  double dt_initial = 1e-4;
  double dt_min = 1e-13;      // step floor, scaled by 1/max f'(u) when that is below 1
  double dt_max = 0.05;
  double local_tol = 1e-6;    // step-doubling error target
  double cfl = 0.2;           // dt <= cfl / max f'(u)
  double clip_tol = 1e-12;    // relative negativity accepted and clipped
  bool energy_certificate = true;
  std::size_t max_steps = 5'000'000;
  std::size_t snapshot_every = 0;  // 0: initial and final state only
  /// Called with the initial state and then with every single implicit-explicit
  /// sub-step of each accepted step (two per accepted step).
  std::function<void(const RadialProfile&)> substep_observer;

  /// Throws ConfigError on inconsistent values.
  void validate() const;
  /// Same policy with local_tol and dt_max divided by `factor`.
  RunPolicy tightened(double factor = 10.0) const;
};

struct SeriesRow {
  double t = 0.0;
  double sup_norm = 0.0;
  double energy = 0.0;
  double kaplan_y = 0.0;
  double l1_delta = 0.0;
  double dt = 0.0;  // step that produced this row (0 for the initial row)
};

struct StepStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double max_clip = 0.0;  // largest negative overshoot set to zero
};

struct SolveOutcome {
  Classification classification = Classification::undecided;
  std::optional<double> T_est;   // BLOWUP via the remaining-time test
  bool energy_certificate = false;
  double sup_norm_bound = 0.0;   // max sup norm over the run
  double final_norm = 0.0;
  double energy_min = 0.0;
  std::string reason;
  /// Set for DECAYED / GLOBAL_BOUNDED on a truncated whole space.
  bool truncation_relative = false;
  SeriesRow initial;              // the state at t = 0
  std::vector<SeriesRow> series;  // one row per accepted step
  std::vector<RadialProfile> snapshots;
  RadialProfile final_state;
  StepStats stats;
};

/// One implicit-explicit Euler step. Negative values down to
/// -clip_tol max(1, |u|_inf) are clipped (magnitude added to *clipped);
/// larger ones throw InternalError.
RadialProfile imex_step(const RadialProfile& u, const Nonlinearity& f, const RadialLaplacian& op,
                        double dt, double clip_tol = 1e-12, double* clipped = nullptr);

/// ∫_s^∞ dz / f(z); +inf when it diverges.
double remaining_time(const Nonlinearity& f, double s);

SolveOutcome run(const Nonlinearity& f, const RadialProfile& u0, const RunPolicy& policy);

struct OrderingReport {
  double min_difference = 0.0;    // min over space-time of u - v
  double min_subsol_margin = 0.0;  // min of u - v - eps f(v) when eps > 0
  double t_at_min = 0.0;
  double eps = 0.0;
  bool violated = false;          // min_difference or margin below -order_tol
  std::size_t shared_steps = 0;
};

struct PairOutcome {
  SolveOutcome u;
  SolveOutcome v;
  OrderingReport ordering;
};

/// Co-integrates u0 >= v0 on a common time grid. With eps > 0 the margin
/// u - v - eps f(v) is tracked as well. Throws PreconditionError if u0 < v0
/// anywhere.
PairOutcome run_pair_ordered(const Nonlinearity& f, const RadialProfile& u0, const RadialProfile& v0,
                             const RunPolicy& policy, double eps = 0.0, double order_tol = 1e-6);

/// Co-integrates two solutions on a shared time grid without any ordering
/// requirement. `on_step` sees both states at t = 0 and after every step
/// accepted while both are still running.
std::pair<SolveOutcome, SolveOutcome> run_pair(
    const Nonlinearity& f, const RadialProfile& u0, const RadialProfile& v0, const RunPolicy& policy,
    const std::function<void(const RadialProfile&, const RadialProfile&)>& on_step);

/// Columns t, sup_norm, energy, kaplan_y, l1_delta, dt.
void write_series_csv(std::ostream& out, const SolveOutcome& outcome);

/// Eigenpair used for the Kaplan column: the grid's own eigenpair on a ball,
/// the eigenpair of B_2 (or B_{R_max} if smaller) on a truncated whole space.
Eigenpair kaplan_eigenpair(const GridPtr& grid);

}  // namespace heatlab
