#include "heatlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "heatlab/errors.hpp"

namespace heatlab::numerics {

QuadResult integrate(const ScalarFn& f, double a, double b, double abs_tol, double rel_tol,
                     std::size_t panels) {
  if (panels == 0) panels = 1;
  QuadResult out;
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = a + width * static_cast<double>(k);
    const double hi = (k + 1 == panels) ? b : lo + width;
    double err = 0.0;
    double l1 = 0.0;
    // Boost's tolerance is relative to the L1 norm of the integrand; an
    // absolute target is enforced by a second pass when needed.
    double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, lo, hi, 15, rel_tol, &err, &l1);
    if (abs_tol > 0.0 && err > abs_tol / static_cast<double>(panels) && l1 > 0.0) {
      const double tol = std::max(abs_tol / static_cast<double>(panels) / l1,
                                  50.0 * std::numeric_limits<double>::epsilon());
      val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, tol,
                                                                          &err, &l1);
    }
    out.value += val;
    out.error_estimate += err;
  }
  return out;
}

QuadResult integrate_to_infinity(const ScalarFn& f, double a, double rel_tol) {
  boost::math::quadrature::exp_sinh<double> integrator;
  QuadResult out;
  double l1 = 0.0;
  out.value = integrator.integrate(f, a, std::numeric_limits<double>::infinity(), rel_tol,
                                   &out.error_estimate, &l1);
  return out;
}

double bracketed_root(const ScalarFn& f, double lo, double hi, double abs_width, int max_iter) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw InternalError("bracketed_root: interval does not bracket a sign change");
  }
  std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
  auto tol = [abs_width](double x, double y) { return std::abs(x - y) <= abs_width; };
  const auto [x0, x1] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  // Return whichever end has the smaller residual.
  return std::abs(f(x0)) <= std::abs(f(x1)) ? x0 : x1;
}

Extremum maximize(const ScalarFn& f, double lo, double hi, std::size_t samples) {
  samples = std::max<std::size_t>(samples, 3);
  const double step = (hi - lo) / static_cast<double>(samples - 1);
  Extremum best{lo, f(lo)};
  std::size_t best_k = 0;
  for (std::size_t k = 1; k < samples; ++k) {
    const double x = (k + 1 == samples) ? hi : lo + step * static_cast<double>(k);
    const double v = f(x);
    if (v > best.value) {
      best = {x, v};
      best_k = k;
    }
  }
  const double a = lo + step * static_cast<double>(best_k == 0 ? 0 : best_k - 1);
  const double b = std::min(hi, lo + step * static_cast<double>(best_k + 1));
  std::uintmax_t iters = 200;
  const auto [x, negv] = boost::math::tools::brent_find_minima(
      [&f](double t) { return -f(t); }, a, b, std::numeric_limits<double>::digits / 2, iters);
  if (-negv > best.value) best = {x, -negv};
  return best;
}

std::vector<double> log_space(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double la = std::log(lo);
  const double lb = std::log(hi);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = std::exp(la + (lb - la) * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> lin_space(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
  }
  out.back() = hi;
  return out;
}

double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace heatlab::numerics
