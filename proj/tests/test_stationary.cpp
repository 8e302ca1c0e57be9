#include <catch2/catch_amalgamated.hpp>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "heatlab/errors.hpp"
#include "heatlab/numerics.hpp"
#include "heatlab/stationary.hpp"

using namespace heatlab;
using Catch::Approx;

namespace {

double phi(int n, double A, double y0, double t) {
  return bubble_eval(n, 1.0, std::abs(t) * y0) - bubble_eval(n, A, std::abs(t - 1.0) * y0);
}

// Δu + u^p for a radial function by central differences, Richardson-extrapolated.
template <class F>
double radial_residual(F u, int n, double p, double r) {
  auto lap = [&](double h) {
    const double d2 = (u(r + h) - 2.0 * u(r) + u(r - h)) / (h * h);
    const double d1 = (u(r + h) - u(r - h)) / (2.0 * h);
    return d2 + (n - 1) / r * d1;
  };
  auto r1 = [&](double h) { return (4.0 * lap(h / 2.0) - lap(h)) / 3.0; };
  const double h = 2e-2 * r;
  const double l = (16.0 * r1(h / 2.0) - r1(h)) / 15.0;
  return l + std::pow(u(r), p);
}

}  // namespace

TEST_CASE("exponent table") {
  CHECK(sobolev_exponent(3) == 5.0);
  CHECK(sobolev_exponent(4) == 3.0);
  CHECK(std::isinf(sobolev_exponent(2)));
  CHECK(std::isinf(sobolev_exponent(1)));
  for (int n = 1; n <= 10; ++n) CHECK(std::isinf(joseph_lundgren_exponent(n)));
  CHECK(joseph_lundgren_exponent(11) == Approx(6.9220).margin(1e-3));
  const double closed = 1.0 + 4.0 * (11 - 4 + 2.0 * std::sqrt(10.0)) / (9.0 * 1.0);
  CHECK(joseph_lundgren_exponent(11) == Approx(closed).epsilon(1e-15));
}

TEST_CASE("exponents at n = 11, p = 7") {
  const Exponents e = exponents(11, 7.0);
  CHECK(e.m == Approx(1.0 / 3.0).epsilon(1e-15));
  REQUIRE(e.ell.has_value());
  CHECK(std::abs(*e.ell - 13.0 / 3.0) < 1e-12);
  CHECK(exponents(3, 3.0).p_S == 5.0);
  CHECK(std::isinf(exponents(3, 3.0).p_JL));
  CHECK_THROWS_AS(exponents(3, 1.0), DomainError);
  CHECK_THROWS_AS(exponents(0, 2.0), DomainError);
}

TEST_CASE("exponent invariants over a grid of (n, p)") {
  for (int n = 1; n <= 20; ++n) {
    const double pS = sobolev_exponent(n);
    const double pJL = joseph_lundgren_exponent(n);
    if (std::isfinite(pS) && std::isfinite(pJL)) CHECK(pJL > pS);
    for (double p : numerics::lin_space(1.05, 15.0, 60)) {
      const Exponents e = exponents(n, p);
      const double m = 2.0 / (p - 1.0);
      const double disc = (n - 2 - 2 * m) * (n - 2 - 2 * m) - 8.0 * (n - 2 - m);
      INFO("n=" << n << " p=" << p);
      CHECK(e.ell.has_value() == (p >= pJL));
      if (e.ell) {
        CHECK(disc >= 0.0);
        CHECK(*e.ell == Approx(0.5 * (n - 2 - std::sqrt(disc))).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("bubble examples") {
  CHECK(bubble_eval(3, 1.0, 0.0) == 1.0);
  CHECK(bubble_eval(3, 1.0, std::sqrt(3.0)) == Approx(std::sqrt(0.5)).epsilon(1e-15));
  const double p = sobolev_exponent(4);
  CHECK(bubble_eval(4, 2.0, 1.0) == Approx(2.0 * bubble_eval(4, 1.0, std::pow(2.0, (p - 1.0) / 2.0))).epsilon(1e-15));
  CHECK(bubble_eval(5, 0.3, 0.0) == 0.3);
  CHECK_THROWS_AS(bubble_eval(2, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(bubble_eval(3, -1.0, 1.0), DomainError);
}

TEST_CASE("bubble: scaling identity, positivity, strict decrease") {
  for (int n = 3; n <= 8; ++n) {
    const double p = sobolev_exponent(n);
    for (double A : {0.2, 0.5, 1.0, 3.0, 17.0}) {
      double prev = bubble_eval(n, A, 0.0);
      for (double r : numerics::lin_space(0.01, 30.0, 200)) {
        const double u = bubble_eval(n, A, r);
        INFO("n=" << n << " A=" << A << " r=" << r);
        CHECK(u > 0.0);
        CHECK(u < prev);
        CHECK(u == Approx(A * bubble_eval(n, 1.0, std::pow(A, (p - 1.0) / 2.0) * r)).epsilon(1e-14));
        prev = u;
      }
    }
  }
}

TEST_CASE("bubble solves the critical steady-state equation") {
  for (int n = 3; n <= 6; ++n) {
    const double p = sobolev_exponent(n);
    for (double r : {0.3, 1.0, 2.5}) {
      auto U = [n](double x) { return bubble_eval(n, 0.7, x); };
      CHECK(std::abs(radial_residual(U, n, p, r)) < 1e-8);
      const double h = 1e-5;
      CHECK(bubble_derivative(n, 0.7, r) == Approx((U(r + h) - U(r - h)) / (2 * h)).epsilon(1e-8));
    }
  }
}

TEST_CASE("far-field limit of M U_M") {
  for (int n : {3, 4, 5}) {
    const double cn = far_field_constant(n);
    CHECK(cn == Approx(std::pow(n * (n - 2.0), (n - 2.0) / 2.0)));
    for (double M : {1.0, 10.0}) {
      double prev_err = 1.0;
      for (double r : {1e3, 1e4}) {
        const double a = M * bubble_eval(n, M, r) * std::pow(r, n - 2.0);
        const double b = -(M / (n - 2.0)) * bubble_derivative(n, M, r) * std::pow(r, n - 1.0);
        const double err = std::max(std::abs(a / cn - 1.0), std::abs(b / cn - 1.0));
        INFO("n=" << n << " M=" << M << " r=" << r);
        CHECK(err < 1e-4);
        CHECK(err < prev_err);
        prev_err = err;
      }
    }
  }
}

TEST_CASE("intersection radii examples") {
  const IntersectionRadii r = intersection_radii(3, 0.5, 0.5);
  CHECK(r.A1 == Approx(2.0 * std::sqrt(3.0)).epsilon(1e-14));
  CHECK(r.Rc == Approx(3.0).epsilon(1e-14));
  CHECK(r.Rstar == Approx(4.0 * std::sqrt(3.0)).epsilon(1e-14));
  CHECK(radius_rc(3, 0.5) == Approx(3.0).epsilon(1e-15));
  CHECK(radius_rstar(3) == Approx(6.9282).margin(1e-4));
  CHECK_THROWS_AS(intersection_radii(3, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(intersection_radii(3, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(intersection_radii(3, 0.5, 0.0), DomainError);
}

TEST_CASE("U_1 and U_A cross exactly at A1, and U_1 > U_A inside for A < 1") {
  for (int n = 3; n <= 7; ++n) {
    for (double A : {0.3, 0.5, 0.9, 2.0}) {
      const double A1 = radius_a1(n, A);
      CHECK(bubble_eval(n, 1.0, A1) == Approx(bubble_eval(n, A, A1)).epsilon(1e-12));
      if (A < 1.0) {
        int changes = 0;
        double prev = bubble_eval(n, 1.0, 0.0) - bubble_eval(n, A, 0.0);
        for (double r : numerics::lin_space(0.0, 5.0 * A1, 5001)) {
          const double d = bubble_eval(n, 1.0, r) - bubble_eval(n, A, r);
          if (std::abs(r - A1) > 1e-6 * A1) CHECK((d > 0.0) == (r < A1));
          if ((d > 0.0) != (prev > 0.0)) ++changes;
          prev = d;
        }
        CHECK(changes == 1);
      }
    }
  }
  for (double c : {0.1, 0.5, 0.9}) CHECK(bubble_eval(4, 1.0, radius_rc(4, c)) == Approx(c).epsilon(1e-12));
}

TEST_CASE("pair crossing of centred bubbles") {
  for (int n = 3; n <= 6; ++n) {
    const double r = pair_crossing_radius(n, 0.7, 2.3);
    CHECK(bubble_eval(n, 0.7, r) == Approx(bubble_eval(n, 2.3, r)).epsilon(1e-12));
    const auto t = offset_pair_crossing(n, 0.7, 2.3, 0.0, 10.0 * r);
    REQUIRE(t.has_value());
    CHECK(*t == Approx(r).epsilon(1e-10));
  }
}

TEST_CASE("offset bubbles intersect for random (A, B, offset)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int found = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + static_cast<int>(uni(rng) * 4);
    const double A = 0.5 + 1.5 * uni(rng);
    const double B = A * (2.0 + 2.0 * uni(rng));
    const double r_ab = pair_crossing_radius(n, A, B);
    const double offset = 0.5 * r_ab * uni(rng);
    const auto t = offset_pair_crossing(n, A, B, offset, offset + 10.0 * r_ab);
    if (t) {
      ++found;
      CHECK(bubble_eval(n, B, std::abs(*t - offset)) == Approx(bubble_eval(n, A, *t)).epsilon(1e-10));
    }
  }
  CHECK(found == 100);
}

TEST_CASE("find_intersection examples") {
  const Intersection c = find_intersection(3, 0.5, 0.0, 8.0);
  CHECK(c.y_norm == Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));

  for (auto [A, y0] : {std::pair{0.75, 1.0}, std::pair{0.5, 3.0}}) {
    const Intersection it = find_intersection(3, A, y0, 8.0);
    INFO("A=" << A << " y0=" << y0);
    CHECK(it.residual < 1e-12);
    CHECK(it.y_norm < 4.0);
    CHECK(std::abs(phi(3, A, y0, it.t0)) < 1e-12);
    CHECK(bubble_eval(3, 1.0, it.y_norm) ==
          Approx(bubble_eval(3, A, std::abs(it.t0 - 1.0) * y0)).margin(1e-12));
    // dense scan oracle: a sign change of phi sits next to t0
    const double t_max = radius_a1(3, A) / y0;
    bool bracketed = false;
    const auto ts = numerics::lin_space(0.0, t_max, 20001);
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      const double a = phi(3, A, y0, ts[i]), b = phi(3, A, y0, ts[i + 1]);
      if ((a > 0.0) != (b > 0.0) && ts[i] <= it.t0 + 1e-9 && it.t0 <= ts[i + 1] + 1e-9) bracketed = true;
    }
    CHECK(bracketed);
  }
}

TEST_CASE("find_intersection on random hypothesis-satisfying triples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 3 + static_cast<int>(uni(rng) * 6);
    const double A = 0.5 + 0.5 * uni(rng) * (1.0 - 1e-9);
    const double R = radius_rstar(n) * (1.0 + 2.0 * uni(rng)) * (1.0 + 1e-9);
    const double y0 = 0.5 * R * uni(rng);
    const Intersection it = find_intersection(n, A, y0, R);
    INFO("n=" << n << " A=" << A << " R=" << R << " y0=" << y0);
    CHECK(it.residual < 1e-12);
    CHECK(it.y_norm < R / 2.0);
  }
}

TEST_CASE("find_intersection rejects violated hypotheses") {
  CHECK_THROWS_AS(find_intersection(3, 0.4, 1.0, 8.0), PreconditionError);
  CHECK_THROWS_AS(find_intersection(3, 1.0, 1.0, 8.0), PreconditionError);
  CHECK_THROWS_AS(find_intersection(3, 0.6, 1.0, 6.0), PreconditionError);
  CHECK_THROWS_AS(find_intersection(3, 0.6, 4.5, 8.0), PreconditionError);
}

TEST_CASE("c0 constant") {
  for (int n = 3; n <= 6; ++n) {
    const double c0 = c0_constant(n, 1.0);
    CHECK(c0 > 0.0);
    CHECK(std::abs(c0_constant(n, 1.0, 2) - c0) < 1e-8 * c0);
    CHECK(c0_constant(n, 4.0) == Approx(c0 / std::pow(4.0, (n - 2.0) / 2.0)).epsilon(1e-12));
    // independent quadrature of the defining integral
    const double p = sobolev_exponent(n);
    const double R = radius_rc(n, 0.5);
    boost::math::quadrature::tanh_sinh<double> rule;
    const double I = rule.integrate(
        [&](double r) { return (std::pow(bubble_eval(n, 1.0, r), p + 1.0) - std::pow(0.5, p + 1.0)) * std::pow(r, n - 1.0); },
        0.0, R);
    CHECK(c0 == Approx(0.5 * numerics::unit_sphere_area(n) * I).epsilon(1e-10));
  }
  CHECK(c0_constant(3, 1.0) == Approx(4.27366406832).epsilon(1e-10));
}

TEST_CASE("singular steady state") {
  const SingularState s = singular_state(11, 7.0);
  CHECK(s.m == Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(s.c_p == Approx(std::pow(26.0 / 9.0, 1.0 / 6.0)).epsilon(1e-14));
  for (auto [n, p] : {std::pair{11, 7.0}, std::pair{3, 5.0}, std::pair{3, 3.5}, std::pair{5, 2.0}, std::pair{8, 4.0}}) {
    const SingularState u = singular_state(n, p);
    for (double r : numerics::log_space(0.1, 10.0, 9)) {
      INFO("n=" << n << " p=" << p << " r=" << r);
      CHECK(std::abs(u.relative_residual(r)) < 1e-9);
    }
    CHECK(std::abs(radial_residual(u, n, p, 1.0)) / std::pow(u(1.0), p) < 1e-9);
  }
  CHECK_THROWS_AS(singular_state(3, 2.5), DomainError);
  CHECK_THROWS_AS(singular_state(2, 5.0), DomainError);
}
