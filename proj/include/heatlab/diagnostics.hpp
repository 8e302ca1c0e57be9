#pragma once

// Energy, first Dirichlet eigenpair, Kaplan functional, weighted norms,
// zero number, the iterate map Id + eta f and the transit-time oracle.

#include <cstddef>
#include <span>
#include <vector>

#include "heatlab/grid.hpp"
#include "heatlab/nonlin.hpp"

namespace heatlab {

struct EnergyValue {
  double kinetic = 0.0;    // ½∫|∇u|²
  double potential = 0.0;  // ∫F(u)
  double total = 0.0;      // kinetic - potential
};

/// Discrete energy ½ u^T K u - Σ W_j F(u_j), consistent with the solver's operator.
EnergyValue energy(const RadialProfile& u, const Nonlinearity& f);

struct Eigenpair {
  double lambda1 = 0.0;
  RadialProfile phi1;  // ∫phi1 dx = 1, positive off the wall
  double residual = 0.0;
  int iterations = 0;
};

/// Inverse power iteration on K phi = lambda W phi. Needs a Dirichlet wall.
Eigenpair eigenpair(const GridPtr& grid, int max_iter = 500, double tol = 1e-13);

/// Σ_j w_j u_j with w the eigenfunction weights (interpolated and
/// renormalised to total mass 1 when the grids differ).
std::vector<double> kaplan_weights(const GridPtr& grid, const Eigenpair& eig);

/// sup_{s >= 0} (lambda1 s - f(s)/2); finite for superlinear f.
double kaplan_c1(const Nonlinearity& f, double lambda1);

struct KaplanSample {
  double t = 0.0;
  double y = 0.0;            // ∫ u phi1
  double jensen_gap = 0.0;   // ∫ f(u) phi1 - f(y)
  double jensen_scale = 1.0;  // max(1, ∫ f(u) phi1)
  /// For consecutive samples: Δy/dt + lambda1 Δy - (f(y_prev)/2 - C1). Exact
  /// consequence of one implicit-explicit step; nonnegative up to rounding.
  double inequality_margin = 0.0;
};

struct KaplanReport {
  std::vector<KaplanSample> samples;
  double c1 = 0.0;
  double sup_y = 0.0;
  double min_scaled_gap = 0.0;  // min jensen_gap / jensen_scale
  double min_relative_margin = 0.0;
};

/// Evaluates y(t) and the Jensen gap along a trajectory; consecutive profiles
/// are treated as single implicit-explicit steps for the inequality margin.
KaplanReport kaplan_series(std::span<const RadialProfile> trajectory, const Nonlinearity& f,
                           const Eigenpair& eig);

/// Ball: ∫u (R - r) dx. Whole space: max over radial windows [a, a+2] of ∫u dx.
double weighted_l1(const RadialProfile& u);

struct ZeroNumber {
  int count = 0;
  std::vector<double> crossings;
};

/// Sign changes of a - b on (0, R], ignoring values with |a - b| <= deadband.
ZeroNumber zero_number(const RadialProfile& a, const RadialProfile& b, double deadband = 1e-9);

struct IterateMap {
  double eta = 0.0;
  double L = 0.0;  // sup_{[0, 2 M0]} f'
  int k = 1;

  double apply(const Nonlinearity& f, double s) const;
};

/// eta = min(eps, 1/L) / (2k - 1), L = sup of f' on [0, 2 M0].
IterateMap iterate_map(const Nonlinearity& f, double eps, double M0, int k);

struct PhiIterates {
  IterateMap map;
  std::vector<double> values;  // values[i] = phi^{(i)}(s), i = 0..k
};

PhiIterates phi_iterates(const Nonlinearity& f, double eps, double M0, int k, double s);

struct IteratePoint {
  double s = 0.0;
  double margin = 0.0;
};

struct Compuv1Report {
  IterateMap map;
  int violations = 0;
  double min_margin = 0.0;  // min of s + (2i-1) eta f(s) - phi^{(i)}(s), relative
};

/// Checks phi^{(i)}(s) <= s + (2i-1) eta f(s) for i = 1..k on the given s.
Compuv1Report compuv1_check(const Nonlinearity& f, double eps, double M0, int k,
                            std::span<const double> s_grid);

struct ItergiRow {
  int k = 0;
  double C_k = 0.0;
  int violations = 0;           // among s >= 1
  double min_margin = 0.0;      // min of relative slack among s >= 1
  double small_s_margin = 0.0;  // reported only, s in (0, 1)
  bool small_s_sampled = false;
};

/// f^k(s)/s^{k-1} <= C_k (1 + phi^{(k)}(s)) with C_1 = 1/eta, C_{k+1} = 2 C_k / eta.
/// eta comes from k_max; an iterate overflowing to +inf counts as satisfied.
std::vector<ItergiRow> itergi_check(const Nonlinearity& f, double eps, double M0, int k_max,
                                    std::span<const double> s_grid);

struct TransitOracle {
  double t_transit = 0.0;  // ∫_{M/2}^M ds/f
  double bound = 0.0;      // M / (2 f(M))
  bool holds = false;
};

TransitOracle transit_oracle(const Nonlinearity& f, double M);

}  // namespace heatlab
