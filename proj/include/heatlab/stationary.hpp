#pragma once

// Critical exponents, the Aubin-Talenti bubble family U_A, the singular
// steady state and the intersection geometry between bubbles.

#include <cstddef>
#include <optional>

namespace heatlab {

/// Infinite exponents are stored as +inf.
struct Exponents {
  int n = 0;
  double p = 0.0;
  double p_S = 0.0;
  double p_JL = 0.0;
  double m = 0.0;  // 2/(p-1)
  /// Decay exponent of the slow branch; set only when p >= p_JL.
  std::optional<double> ell;
};

double sobolev_exponent(int n);
double joseph_lundgren_exponent(int n);

/// Throws DomainError unless n >= 1 and p > 1.
Exponents exponents(int n, double p);

/// U_A(r) = A (1 + r^2 A^{4/(n-2)} / (n(n-2)))^{-(n-2)/2}; n >= 3, A > 0, r >= 0.
double bubble_eval(int n, double A, double r);
/// dU_A/dr.
double bubble_derivative(int n, double A, double r);

/// c_n = (n(n-2))^{(n-2)/2}, the far-field constant: M U_M(r) r^{n-2} -> c_n.
double far_field_constant(int n);

struct IntersectionRadii {
  double A1 = 0.0;     // U_1 = U_A exactly on |y| = A1
  double Rc = 0.0;     // U_1 <= c exactly on |y| >= Rc
  double Rstar = 0.0;  // 2^{(n-1)/(n-2)} sqrt(n(n-2))
};

/// Requires n >= 3, A > 0 with A != 1, and 0 < c < 1. Self-checks the
/// defining identities to 1e-12 and throws InternalError otherwise.
IntersectionRadii intersection_radii(int n, double A, double c);

double radius_a1(int n, double A);
double radius_rc(int n, double c);
double radius_rstar(int n);

/// Radius where the centred bubbles U_A and U_B cross: sqrt(n(n-2)) (AB)^{-1/(n-2)}.
double pair_crossing_radius(int n, double A, double B);

/// First sign change of t -> U_B(|t - offset|) - U_A(t) on [0, r_max], i.e.
/// along the ray through the centre of the shifted bubble. Uniform scan of
/// `samples` points followed by bisection; nullopt when no change is seen.
std::optional<double> offset_pair_crossing(int n, double A, double B, double offset, double r_max,
                                           std::size_t samples = 4000);

struct Intersection {
  double t0 = 0.0;
  double y_norm = 0.0;
  double residual = 0.0;  // |phi(t0)|
};

/// Point y = t0 y0 with |y| < R/2 and U_1(y) = U_A(y - y0), following the
/// sign bracket phi(t) = U_1(t y0) - U_A((t-1) y0). Requires A in [1/2, 1),
/// R > R*, 0 <= |y0| < R/2 (PreconditionError otherwise).
Intersection find_intersection(int n, double A, double y0_norm, double R);

/// c0 = (1/(2 Cf^{(n-2)/2})) ∫_{|y|<R_{1/2}} (U_1^{p+1} - 2^{-(p+1)}) dy with p = p_S(n).
/// `panels` splits [0, R_{1/2}] before adaptive quadrature (refinement studies).
double c0_constant(int n, double Cf, std::size_t panels = 1);

/// U_*(r) = c_p r^{-m}, m = 2/(p-1), c_p = (m(n-2-m))^{1/(p-1)}.
struct SingularState {
  int n = 0;
  double p = 0.0;
  double m = 0.0;
  double c_p = 0.0;

  double operator()(double r) const;
  /// U_*'' + (n-1)/r U_*' + U_*^p from the closed-form derivatives, divided by U_*^p.
  double relative_residual(double r) const;
};

/// Requires n >= 3 and p > n/(n-2).
SingularState singular_state(int n, double p);

}  // namespace heatlab
