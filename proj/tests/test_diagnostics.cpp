#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "heatlab/diagnostics.hpp"
#include "heatlab/numerics.hpp"
#include "heatlab/solver.hpp"
#include "heatlab/stationary.hpp"

using namespace heatlab;
using Catch::Approx;

namespace {

GridPtr unit_ball(int n = 3, std::size_t cells = 200) { return make_grid(RadialDomain::ball(n, 1.0), cells); }

RadialProfile peak_normalised(const RadialProfile& phi, double peak) {
  RadialProfile u = phi;
  const double m = phi.sup_norm();
  for (double& v : u.values) v *= peak / m;
  return u;
}

std::vector<Nonlinearity> convex_catalog() {
  return {Nonlinearity::power(2.0), Nonlinearity::power(3.0), Nonlinearity::power(5.0),
          Nonlinearity::log_power(5.0, -1.0), Nonlinearity::exp_minus_linear(),
          Nonlinearity::sum_of_powers(3, 2.0, 1.0)};
}

}  // namespace

TEST_CASE("energy examples") {
  const auto g = unit_ball();
  const auto f = Nonlinearity::power(3.0);
  const EnergyValue zero = energy(zero_profile(g), f);
  CHECK(zero.total == 0.0);
  const Eigenpair eig = eigenpair(g);
  const EnergyValue e = energy(peak_normalised(eig.phi1, 1.0), f);
  CHECK(e.total > 0.0);
  CHECK(e.total == e.kinetic - e.potential);
  // kinetic part of sin(pi r)/(pi r): ½∫|∇u|² = ½ λ1 ∫u² for an eigenfunction
  const RadialProfile u = peak_normalised(eig.phi1, 1.0);
  CHECK(e.kinetic == Approx(0.5 * eig.lambda1 * inner(u, u)).epsilon(1e-10));
}

TEST_CASE("energy converges at second order under grid halving") {
  const auto f = Nonlinearity::power(3.0);
  auto E = [&](std::size_t cells) {
    const auto g = unit_ball(3, cells);
    return energy(sample_profile(g, [](double r) { return 2.0 * std::cos(0.5 * std::numbers::pi * r); }), f).total;
  };
  const double e1 = E(50), e2 = E(100), e3 = E(200), e4 = E(400);
  CHECK(std::log2(std::abs(e1 - e2) / std::abs(e2 - e3)) >= 1.8);
  CHECK(std::log2(std::abs(e2 - e3) / std::abs(e3 - e4)) >= 1.8);
}

TEST_CASE("eigenpair on the unit ball") {
  const Eigenpair eig = eigenpair(unit_ball(3, 200));
  CHECK(eig.lambda1 == Approx(std::numbers::pi * std::numbers::pi).epsilon(1e-4));
  CHECK(eig.residual <= 1e-8);
  CHECK(std::abs(integral(eig.phi1) - 1.0) < 1e-10);
  for (std::size_t j = 0; j + 1 < eig.phi1.size(); ++j) CHECK(eig.phi1.values[j] > 0.0);
  // the radial mode sin(pi r)/(pi r), normalised to unit mass
  const double mass = 4.0 / std::numbers::pi;
  for (double r : {0.0, 0.25, 0.5, 0.75}) {
    const double mode = r == 0.0 ? 1.0 : std::sin(std::numbers::pi * r) / (std::numbers::pi * r);
    CHECK(interpolate(eig.phi1, r) == Approx(mode / mass).epsilon(1e-3));
  }
}

TEST_CASE("eigenpair: interval analogue and dilation") {
  const Eigenpair e1 = eigenpair(unit_ball(1, 200));
  CHECK(e1.lambda1 == Approx(std::numbers::pi * std::numbers::pi / 4.0).epsilon(1e-4));
  const double l1 = eigenpair(make_grid(RadialDomain::ball(3, 1.0), 120)).lambda1;
  const double l2 = eigenpair(make_grid(RadialDomain::ball(3, 2.0), 120)).lambda1;
  CHECK(l2 == Approx(l1 / 4.0).epsilon(1e-6));
}

TEST_CASE("kaplan weights and c1") {
  const auto g = unit_ball(3, 100);
  const Eigenpair eig = eigenpair(g);
  const auto w = kaplan_weights(g, eig);
  double total = 0.0;
  for (double x : w) total += x;
  CHECK(total == Approx(1.0).epsilon(1e-10));
  for (double p : {2.0, 3.0, 5.0}) {
    const double lam = eig.lambda1;
    const double s = std::pow(2.0 * lam / p, 1.0 / (p - 1.0));
    CHECK(kaplan_c1(Nonlinearity::power(p), lam) == Approx(lam * s - 0.5 * std::pow(s, p)).epsilon(1e-9));
  }
}

TEST_CASE("kaplan series along trajectories") {
  const auto g = unit_ball(3, 100);
  const Eigenpair eig = eigenpair(g);
  SECTION("zero trajectory") {
    std::vector<RadialProfile> traj(5, zero_profile(g));
    for (std::size_t i = 0; i < traj.size(); ++i) traj[i].t = 0.1 * i;
    const KaplanReport rep = kaplan_series(traj, Nonlinearity::power(3.0), eig);
    for (const auto& s : rep.samples) CHECK(s.y == 0.0);
    CHECK(rep.sup_y == 0.0);
  }
  SECTION("Jensen gap on convex f and finite ceiling for global runs") {
    for (const auto& f : convex_catalog()) {
      std::vector<RadialProfile> traj;
      RunPolicy policy;
      policy.T_max = 2.0;
      policy.substep_observer = [&](const RadialProfile& u) { traj.push_back(u); };
      const SolveOutcome o = run(f, peak_normalised(eig.phi1, 2.0), policy);
      const KaplanReport rep = kaplan_series(traj, f, eig);
      INFO(f.name() << " " << to_string(o.classification));
      CHECK(rep.min_scaled_gap >= -1e-8);
      CHECK(rep.min_relative_margin >= -1e-4);
      CHECK(o.classification != Classification::blowup);
      CHECK(std::isfinite(rep.sup_y));
      CHECK(rep.sup_y > 0.0);
    }
  }
}

TEST_CASE("weighted L1 norm") {
  const auto g = make_grid(RadialDomain::ball(1, 1.0), 64);
  CHECK(weighted_l1(sample_profile(g, [](double) { return 1.0; })) == Approx(1.0).epsilon(1e-12));
  CHECK(weighted_l1(zero_profile(g)) == 0.0);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const auto g3 = unit_ball(3, 50);
  for (int trial = 0; trial < 50; ++trial) {
    RadialProfile u = zero_profile(g3), v = zero_profile(g3);
    for (std::size_t j = 0; j < u.size(); ++j) {
      u.values[j] = uni(rng);
      v.values[j] = u.values[j] + uni(rng);
    }
    CHECK(weighted_l1(u) <= weighted_l1(v));
  }
  // whole space: a bump supported in [0, 1] fits inside the first window of width 2
  const auto gw = make_grid(RadialDomain::whole_space(3, 10.0), 400);
  const RadialProfile bump = sample_profile(gw, [](double r) { return r <= 1.0 ? (1.0 - r * r) * (1.0 - r * r) : 0.0; });
  // ∫ 4π r² (1 - r²)² dr over [0, 1] = 32π/105
  CHECK(weighted_l1(bump) == Approx(32.0 * std::numbers::pi / 105.0).epsilon(1e-5));
}

TEST_CASE("zero number examples") {
  const double A1 = 2.0 * std::sqrt(3.0);
  CHECK(pair_crossing_radius(3, 1.0, 0.5) == Approx(A1).epsilon(1e-12));
  const auto g = make_grid(RadialDomain::whole_space(3, 4.0 * A1), 40000);
  const RadialProfile U1 = sample_profile(g, [](double r) { return bubble_eval(3, 1.0, r); });
  const RadialProfile Uh = sample_profile(g, [](double r) { return bubble_eval(3, 0.5, r); });
  const ZeroNumber z = zero_number(U1, Uh);
  REQUIRE(z.count == 1);
  REQUIRE(z.crossings.size() == 1);
  CHECK(std::abs(z.crossings[0] - A1) < 1e-6);
  CHECK(zero_number(U1, U1).count == 0);
  // excursions inside the deadband are ignored
  RadialProfile noisy = U1;
  for (std::size_t j = 0; j < noisy.size(); ++j) noisy.values[j] += (j % 2 ? 1e-11 : -1e-11);
  CHECK(zero_number(U1, noisy).count == 0);
}

TEST_CASE("zero number of a slowly decaying datum against a concentrated bubble") {
  // u0 = (1 + r^2)^{-1}: r^2 u0 -> 1 with gamma = 2 > n - 2 = 1.
  int hits = 0;
  for (double M : {10.0, 100.0, 1000.0}) {
    const double R = 4.0 * M;
    const auto g = make_grid(RadialDomain::whole_space(3, R), 20000, Spacing::origin_and_wall_refined);
    const RadialProfile u0 = sample_profile(g, [](double r) { return 1.0 / (1.0 + r * r); });
    const RadialProfile UM = sample_profile(g, [M](double r) { return bubble_eval(3, M, r); });
    const ZeroNumber z = zero_number(u0, UM);
    INFO("M=" << M << " count=" << z.count);
    CHECK(z.count <= 2);
    CHECK(z.crossings.size() == static_cast<std::size_t>(z.count));
    for (std::size_t i = 1; i < z.crossings.size(); ++i) CHECK(z.crossings[i] > z.crossings[i - 1]);
    if (z.count == 2) ++hits;
  }
  CHECK(hits >= 1);
}

TEST_CASE("iterate map examples") {
  const auto f = Nonlinearity::power(3.0);
  const IterateMap m = iterate_map(f, 1.0, 1.0, 3);
  CHECK(m.L == Approx(12.0).epsilon(1e-10));
  CHECK(m.eta == Approx(1.0 / 60.0).epsilon(1e-10));
  CHECK(m.apply(f, 0.7) == 0.7 + m.eta * f.value(0.7));
  const PhiIterates it = phi_iterates(f, 1.0, 1.0, 3, 0.7);
  REQUIRE(it.values.size() == 4);
  CHECK(it.values[0] == 0.7);
  CHECK(it.values[1] == 0.7 + it.map.eta * f.value(0.7));
}

TEST_CASE("phi iterates are nondecreasing in i") {
  for (const auto& f : convex_catalog()) {
    for (double s : numerics::lin_space(0.0, 5.0, 41)) {
      const PhiIterates it = phi_iterates(f, 0.5, 2.0, 5, s);
      for (std::size_t i = 1; i < it.values.size(); ++i) CHECK(it.values[i] >= it.values[i - 1]);
    }
  }
}

TEST_CASE("iterates stay below s + (2i-1) eta f(s) on [0, M0]") {
  for (const auto& f : convex_catalog()) {
    const auto s = numerics::lin_space(0.0, 1.0, 101);
    const Compuv1Report r = compuv1_check(f, 1.0, 1.0, 5, s);
    INFO(f.name());
    CHECK(r.violations == 0);
    // independent evaluation of the inequality
    for (double x : s) {
      double phi = x;
      for (int i = 1; i <= 5; ++i) {
        phi = phi + r.map.eta * f.value(phi);
        CHECK(phi <= x + (2 * i - 1) * r.map.eta * f.value(x) + 1e-14 * (1.0 + x));
      }
    }
  }
}

TEST_CASE("iterated growth bound with C_1 = 1/eta and C_{k+1} = 2 C_k / eta") {
  const auto s = numerics::log_space(1.0, 1e3, 61);
  for (const auto& f : {Nonlinearity::power(3.0), Nonlinearity::power(5.0), Nonlinearity::log_power(5.0, -1.0)}) {
    const auto rows = itergi_check(f, 1.0, 1.0, 3, s);
    REQUIRE(rows.size() == 3);
    const double eta = iterate_map(f, 1.0, 1.0, 3).eta;
    CHECK(rows[0].C_k == Approx(1.0 / eta).epsilon(1e-14));
    for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k].C_k == Approx(2.0 * rows[k - 1].C_k / eta).epsilon(1e-14));
    for (const auto& row : rows) {
      INFO(f.name() << " k=" << row.k);
      CHECK(row.violations == 0);
    }
    // independent evaluation for k = 1, 2, 3
    for (double x : s) {
      double phi = x;
      double fk = 1.0;
      for (int k = 1; k <= 3; ++k) {
        phi = phi + eta * f.value(phi);
        fk *= f.value(x);
        const double lhs = fk / std::pow(x, k - 1);
        if (std::isfinite(phi)) CHECK(lhs <= rows[k - 1].C_k * (1.0 + phi) * (1.0 + 1e-12));
      }
    }
  }
  // k = 1 is the identity f <= (1/eta)(1 + s + eta f)
  const auto rows = itergi_check(Nonlinearity::exp_minus_linear(), 1.0, 1.0, 1, numerics::log_space(1.0, 50.0, 30));
  CHECK(rows[0].violations == 0);
}

TEST_CASE("transit-time oracle") {
  for (double M : {1e2, 1e4, 1e6}) {
    const TransitOracle o = transit_oracle(Nonlinearity::power(2.0), M);
    CHECK(std::abs(o.t_transit - 1.0 / M) <= 1e-10 / M);
    CHECK(o.bound == Approx(1.0 / (2.0 * M)).epsilon(1e-15));
    CHECK(o.holds);
    for (const auto& f : convex_catalog()) {
      INFO(f.name() << " M=" << M);
      CHECK(transit_oracle(f, M).holds);
    }
    CHECK(transit_oracle(Nonlinearity::log_power(3.0, 1.0), M).holds);
  }
  const TransitOracle p5 = transit_oracle(Nonlinearity::power(5.0), 10.0);
  CHECK(p5.t_transit == Approx((16.0 - 1.0) / (4.0 * 1e4)).epsilon(1e-12));
  CHECK(p5.bound == Approx(10.0 / (2.0 * 1e5)).epsilon(1e-15));
  CHECK(p5.holds);
  CHECK(transit_oracle(Nonlinearity::log_power(5.0, -1.0), 100.0).holds);
}
