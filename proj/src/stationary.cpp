#include "heatlab/stationary.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "heatlab/errors.hpp"
#include "heatlab/numerics.hpp"

namespace heatlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_bubble_dimension(int n) {
  if (n < 3) throw DomainError("bubbles need n >= 3");
}

double u1(int n, double r) { return bubble_eval(n, 1.0, r); }

}  // namespace

double sobolev_exponent(int n) {
  if (n < 1) throw DomainError("dimension must be >= 1");
  return n <= 2 ? kInf : 1.0 + 4.0 / (n - 2);
}

double joseph_lundgren_exponent(int n) {
  if (n < 1) throw DomainError("dimension must be >= 1");
  if (n <= 10) return kInf;
  return 1.0 + 4.0 * (n - 4 + 2.0 * std::sqrt(n - 1.0)) / ((n - 2.0) * (n - 10.0));
}

Exponents exponents(int n, double p) {
  if (!(p > 1.0)) throw DomainError("exponents need p > 1");
  Exponents e;
  e.n = n;
  e.p = p;
  e.p_S = sobolev_exponent(n);
  e.p_JL = joseph_lundgren_exponent(n);
  e.m = std::isfinite(p) ? 2.0 / (p - 1.0) : 0.0;
  if (p >= e.p_JL) {
    const double a = n - 2.0 - 2.0 * e.m;
    const double disc = a * a - 8.0 * (n - 2.0 - e.m);
    if (disc >= 0.0) e.ell = 0.5 * (n - 2.0 - std::sqrt(disc));
  }
  return e;
}

double bubble_eval(int n, double A, double r) {
  require_bubble_dimension(n);
  if (!(A > 0.0) || !(r >= 0.0)) throw DomainError("bubble needs A > 0 and r >= 0");
  if (r == 0.0) return A;
  const double k = n * (n - 2.0);
  return A * std::pow(1.0 + r * r * std::pow(A, 4.0 / (n - 2)) / k, -0.5 * (n - 2));
}

double bubble_derivative(int n, double A, double r) {
  require_bubble_dimension(n);
  if (!(A > 0.0) || !(r >= 0.0)) throw DomainError("bubble needs A > 0 and r >= 0");
  const double k = n * (n - 2.0);
  const double s = std::pow(A, 4.0 / (n - 2));
  const double base = 1.0 + r * r * s / k;
  return -A * (n - 2) * r * s / k * std::pow(base, -0.5 * n);
}

double far_field_constant(int n) {
  require_bubble_dimension(n);
  return std::pow(n * (n - 2.0), 0.5 * (n - 2));
}

double radius_a1(int n, double A) {
  require_bubble_dimension(n);
  if (!(A > 0.0) || A == 1.0) throw DomainError("A1 needs A > 0, A != 1");
  return std::pow(A, -1.0 / (n - 2)) * std::sqrt(n * (n - 2.0));
}

double pair_crossing_radius(int n, double A, double B) {
  require_bubble_dimension(n);
  if (!(A > 0.0) || !(B > 0.0) || A == B) throw DomainError("pair crossing needs distinct A, B > 0");
  return std::sqrt(n * (n - 2.0)) * std::pow(A * B, -1.0 / (n - 2));
}

std::optional<double> offset_pair_crossing(int n, double A, double B, double offset, double r_max,
                                           std::size_t samples) {
  require_bubble_dimension(n);
  if (!(A > 0.0) || !(B > 0.0) || !(offset >= 0.0) || !(r_max > 0.0) || samples < 2) {
    throw DomainError("offset_pair_crossing: bad arguments");
  }
  auto g = [&](double t) { return bubble_eval(n, B, std::abs(t - offset)) - bubble_eval(n, A, t); };
  double t_prev = 0.0;
  double g_prev = g(0.0);
  for (std::size_t i = 1; i < samples; ++i) {
    const double t = r_max * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double gt = g(t);
    if (g_prev == 0.0) return t_prev;
    if ((gt > 0.0) != (g_prev > 0.0) && gt != 0.0) return numerics::bracketed_root(g, t_prev, t, 1e-14);
    t_prev = t;
    g_prev = gt;
  }
  return std::nullopt;
}

double radius_rc(int n, double c) {
  require_bubble_dimension(n);
  if (!(c > 0.0 && c < 1.0)) throw DomainError("R_c needs 0 < c < 1");
  return std::sqrt(n * (n - 2.0) * (std::pow(c, -2.0 / (n - 2)) - 1.0));
}

double radius_rstar(int n) {
  require_bubble_dimension(n);
  return std::pow(2.0, (n - 1.0) / (n - 2.0)) * std::sqrt(n * (n - 2.0));
}

IntersectionRadii intersection_radii(int n, double A, double c) {
  IntersectionRadii out{radius_a1(n, A), radius_rc(n, c), radius_rstar(n)};
  const double gap = u1(n, out.A1) - bubble_eval(n, A, out.A1);
  const double level = u1(n, out.Rc) - c;
  if (std::abs(gap) > 1e-12 || std::abs(level) > 1e-12) {
    std::ostringstream msg;
    msg << "intersection radii identities violated: gap " << gap << ", level " << level;
    throw InternalError(msg.str());
  }
  return out;
}

Intersection find_intersection(int n, double A, double y0_norm, double R) {
  require_bubble_dimension(n);
  if (!(A >= 0.5 && A < 1.0)) throw PreconditionError("find_intersection needs A in [1/2, 1)");
  if (!(R > radius_rstar(n))) throw PreconditionError("find_intersection needs R > R*");
  if (!(y0_norm >= 0.0 && y0_norm < 0.5 * R)) {
    throw PreconditionError("find_intersection needs 0 <= |y0| < R/2");
  }
  const double a1 = radius_a1(n, A);
  if (y0_norm == 0.0) {
    return {1.0, a1, std::abs(u1(n, a1) - bubble_eval(n, A, a1))};
  }
  const double y0 = y0_norm;
  auto phi = [&](double t) { return u1(n, t * y0) - bubble_eval(n, A, std::abs(t - 1.0) * y0); };
  auto dphi = [&](double t) {
    const double sign = t >= 1.0 ? 1.0 : -1.0;
    return y0 * bubble_derivative(n, 1.0, t * y0) -
           sign * y0 * bubble_derivative(n, A, std::abs(t - 1.0) * y0);
  };

  double lo;
  double hi;
  if (phi(1.0) <= 0.0) {
    lo = 0.0;
    hi = 1.0;
  } else {
    lo = 1.0;
    hi = a1 / y0;
  }
  double flo = phi(lo);
  const double fhi = phi(hi);
  if (!(flo > 0.0) || fhi > 0.0) throw InternalError("find_intersection: sign bracket failed");
  if (fhi == 0.0) return {hi, hi * y0, 0.0};

  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = phi(mid);
    if (fm > 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double t = std::abs(phi(lo)) <= std::abs(phi(hi)) ? lo : hi;
  const double d = dphi(t);
  if (d != 0.0 && std::isfinite(d)) {
    const double polished = t - phi(t) / d;
    if (polished >= lo - 1e-14 && polished <= hi + 1e-14 && std::abs(phi(polished)) < std::abs(phi(t))) {
      t = polished;
    }
  }
  Intersection out{t, t * y0, std::abs(phi(t))};
  if (!(out.y_norm < 0.5 * R)) throw InternalError("find_intersection: root outside R/2");
  return out;
}

double c0_constant(int n, double Cf, std::size_t panels) {
  require_bubble_dimension(n);
  if (!(Cf > 0.0)) throw DomainError("c0 needs Cf > 0");
  const double p = sobolev_exponent(n);
  const double r_half = radius_rc(n, 0.5);
  const double floor = std::pow(0.5, p + 1.0);
  auto integrand = [n, p, floor](double r) {
    return (std::pow(u1(n, r), p + 1.0) - floor) * std::pow(r, n - 1);
  };
  const double radial = numerics::integrate(integrand, 0.0, r_half, 1e-10, 1e-14, panels).value;
  const double value = numerics::unit_sphere_area(n) * radial / (2.0 * std::pow(Cf, 0.5 * (n - 2)));
  if (!(value > 0.0)) throw InternalError("c0 is not positive");
  return value;
}

double SingularState::operator()(double r) const {
  if (!(r > 0.0)) throw DomainError("singular state needs r > 0");
  return c_p * std::pow(r, -m);
}

double SingularState::relative_residual(double r) const {
  const double u = (*this)(r);
  const double du = -m * u / r;
  const double d2u = m * (m + 1.0) * u / (r * r);
  const double up = std::pow(u, p);
  return (d2u + (n - 1.0) / r * du + up) / up;
}

SingularState singular_state(int n, double p) {
  if (n < 3) throw DomainError("singular state needs n >= 3");
  if (!(p > static_cast<double>(n) / (n - 2)) || !std::isfinite(p)) {
    throw DomainError("singular state needs p > n/(n-2)");
  }
  SingularState s;
  s.n = n;
  s.p = p;
  s.m = 2.0 / (p - 1.0);
  s.c_p = std::pow(s.m * (n - 2.0 - s.m), 1.0 / (p - 1.0));
  return s;
}

}  // namespace heatlab
