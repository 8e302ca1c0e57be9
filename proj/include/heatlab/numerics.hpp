#pragma once

// Thin wrappers over Boost.Math quadrature, root bracketing and 1-D
// minimisation. Everything here is plumbing for the modules above it.

#include <cstddef>
#include <functional>
#include <vector>

namespace heatlab::numerics {

using ScalarFn = std::function<double(double)>;

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod (G15/K31 pair) on [a, b]. `panels` splits the
/// interval into equal sub-intervals first, each integrated to `abs_tol / panels`.
QuadResult integrate(const ScalarFn& f, double a, double b, double abs_tol = 1e-12,
                     double rel_tol = 1e-13, std::size_t panels = 1);

/// Integral over [a, inf) by exp-sinh quadrature. The integrand must decay.
QuadResult integrate_to_infinity(const ScalarFn& f, double a, double rel_tol = 1e-10);

/// Root of `f` in [lo, hi], which must bracket a sign change. TOMS 748.
double bracketed_root(const ScalarFn& f, double lo, double hi, double abs_width = 1e-15,
                      int max_iter = 200);

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

/// Global-ish maximum on [lo, hi]: coarse scan with `samples` points, then a
/// Brent (golden section + parabolic) polish around the best sample; both
/// endpoints are always candidates.
Extremum maximize(const ScalarFn& f, double lo, double hi, std::size_t samples = 257);

/// `count` points geometrically spaced in [lo, hi], both ends included.
std::vector<double> log_space(double lo, double hi, std::size_t count);
std::vector<double> lin_space(double lo, double hi, std::size_t count);

/// Surface area of the unit sphere S^{n-1} in R^n (2 for n = 1).
double unit_sphere_area(int n);

}  // namespace heatlab::numerics
