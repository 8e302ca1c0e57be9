#include "heatlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heatlab/errors.hpp"
#include "heatlab/numerics.hpp"

namespace heatlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_nodes(const GridPtr& a, const GridPtr& b) { return a == b || a->nodes() == b->nodes(); }

}  // namespace

EnergyValue energy(const RadialProfile& u, const Nonlinearity& f) {
  const RadialLaplacian op = discretize_laplacian(*u.grid);
  EnergyValue e;
  e.kinetic = 0.5 * op.quadratic_form(u.values);
  const auto& W = u.grid->measure();
  for (std::size_t j = 0; j < u.size(); ++j) e.potential += W[j] * f.antiderivative(u.values[j]);
  e.total = e.kinetic - e.potential;
  return e;
}

Eigenpair eigenpair(const GridPtr& grid, int max_iter, double tol) {
  if (!grid->domain().dirichlet_wall()) throw PreconditionError("eigenpair needs a Dirichlet wall");
  const RadialLaplacian op = discretize_laplacian(*grid);
  const std::size_t N = op.size();
  const std::size_t M = N - 1;
  std::vector<double> phi(N, 0.0);
  for (std::size_t j = 0; j < M; ++j) phi[j] = 1.0 - grid->r(j) / grid->domain().wall_radius();

  auto rayleigh = [&](const std::vector<double>& v) {
    double w = 0.0;
    for (std::size_t j = 0; j < M; ++j) w += op.weight[j] * v[j] * v[j];
    return op.quadratic_form(v) / w;
  };

  std::vector<double> off(op.off.begin(), op.off.begin() + static_cast<std::ptrdiff_t>(M - 1));
  std::vector<double> diag(op.diag.begin(), op.diag.begin() + static_cast<std::ptrdiff_t>(M));
  // Residual of Δphi + lambda phi in the max norm, relative to lambda |phi|.
  auto residual = [&](const std::vector<double>& v, double lam) {
    const std::vector<double> lap = op.apply(v);
    double res = 0.0;
    double scale = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
      res = std::max(res, std::abs(lap[j] + lam * v[j]));
      scale = std::max(scale, lam * std::abs(v[j]));
    }
    return res / scale;
  };

  Eigenpair out;
  double lambda = rayleigh(phi);
  double res = kInf;
  bool converged = false;
  for (int it = 1; it <= max_iter; ++it) {
    std::vector<double> rhs(M);
    for (std::size_t j = 0; j < M; ++j) rhs[j] = op.weight[j] * phi[j];
    std::vector<double> x = solve_tridiagonal(off, diag, off, rhs);
    double norm = 0.0;
    for (double v : x) norm = std::max(norm, std::abs(v));
    for (std::size_t j = 0; j < M; ++j) phi[j] = x[j] / norm;
    const double next = rayleigh(phi);
    const double next_res = residual(phi, next);
    out.iterations = it;
    const bool settled = std::abs(next - lambda) <= tol * next && (next_res <= 1e-12 || next_res >= 0.9 * res);
    lambda = next;
    res = std::min(res, next_res);
    if (settled && it > 3) {
      converged = true;
      break;
    }
  }
  if (!converged) throw InternalError("eigenpair: inverse iteration did not converge");

  double mass = 0.0;
  for (std::size_t j = 0; j < N; ++j) mass += op.weight[j] * phi[j];
  double sign = mass > 0.0 ? 1.0 : -1.0;
  for (double& v : phi) v *= sign / std::abs(mass);
  for (std::size_t j = 0; j < M; ++j) {
    if (!(phi[j] > 0.0)) throw InternalError("eigenpair: eigenfunction not positive");
  }
  res = residual(phi, lambda);
  out.lambda1 = lambda;
  out.phi1 = RadialProfile{grid, std::move(phi), 0.0};
  out.residual = res;
  return out;
}

std::vector<double> kaplan_weights(const GridPtr& grid, const Eigenpair& eig) {
  const auto& W = grid->measure();
  std::vector<double> w(grid->size());
  if (same_nodes(grid, eig.phi1.grid)) {
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = W[j] * eig.phi1.values[j];
    return w;
  }
  double total = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    w[j] = W[j] * std::max(0.0, interpolate(eig.phi1, grid->r(j)));
    total += w[j];
  }
  if (!(total > 0.0)) throw PreconditionError("kaplan_weights: eigenfunction support misses the grid");
  for (double& v : w) v /= total;
  return w;
}

double kaplan_c1(const Nonlinearity& f, double lambda1) {
  if (f.is_zero()) return kInf;
  auto h = [&](double s) { return lambda1 * s - 0.5 * f.value(s); };
  double S = 1.0;
  while (f.value(S) < 4.0 * lambda1 * S) {
    S *= 2.0;
    if (S > 1e150) return kInf;
  }
  const numerics::Extremum best = numerics::maximize(h, 0.0, S, 513);
  return std::max(0.0, best.value);
}

KaplanReport kaplan_series(std::span<const RadialProfile> trajectory, const Nonlinearity& f,
                           const Eigenpair& eig) {
  KaplanReport rep;
  rep.c1 = kaplan_c1(f, eig.lambda1);
  rep.min_scaled_gap = kInf;
  rep.min_relative_margin = kInf;
  if (trajectory.empty()) return rep;
  std::vector<double> w = kaplan_weights(trajectory.front().grid, eig);
  GridPtr weight_grid = trajectory.front().grid;
  double prev_fphi = 0.0;
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const RadialProfile& u = trajectory[k];
    if (u.grid != weight_grid) {
      w = kaplan_weights(u.grid, eig);
      weight_grid = u.grid;
    }
    KaplanSample s;
    s.t = u.t;
    double fphi = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      s.y += w[j] * u.values[j];
      fphi += w[j] * f.value(u.values[j]);
    }
    s.jensen_gap = fphi - f.value(std::max(0.0, s.y));
    s.jensen_scale = std::max(1.0, std::abs(fphi));
    rep.min_scaled_gap = std::min(rep.min_scaled_gap, s.jensen_gap / s.jensen_scale);
    rep.sup_y = std::max(rep.sup_y, s.y);
    if (k > 0) {
      const KaplanSample& p = rep.samples.back();
      const double dt = s.t - p.t;
      if (dt > 0.0) {
        const double dy = s.y - p.y;
        const double target = 0.5 * f.value(std::max(0.0, p.y)) - rep.c1;
        s.inequality_margin = dy / dt + eig.lambda1 * dy - target;
        const double scale = std::max({1.0, std::abs(target), prev_fphi, eig.lambda1 * std::abs(p.y)});
        rep.min_relative_margin = std::min(rep.min_relative_margin, s.inequality_margin / scale);
      }
    }
    prev_fphi = fphi;
    rep.samples.push_back(s);
  }
  return rep;
}

double weighted_l1(const RadialProfile& u) {
  const RadialGrid& g = *u.grid;
  const RadialDomain& dom = g.domain();
  const auto& W = g.measure();
  if (dom.is_ball()) {
    const double R = dom.wall_radius();
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) s += W[j] * u.values[j] * (R - g.r(j));
    return s;
  }
  // Trapezoid integral of u(r) ω r^{n-1} over windows [a, a + 2], via a cumulative sum.
  const int n = dom.n();
  const double omega = numerics::unit_sphere_area(n);
  const double R = dom.wall_radius();
  const std::size_t N = g.size();
  std::vector<double> dens(N);
  std::vector<double> cum(N, 0.0);
  for (std::size_t j = 0; j < N; ++j) dens[j] = u.values[j] * omega * std::pow(g.r(j), n - 1);
  for (std::size_t j = 1; j < N; ++j) cum[j] = cum[j - 1] + 0.5 * (dens[j - 1] + dens[j]) * (g.r(j) - g.r(j - 1));
  const auto& nodes = g.nodes();
  auto cumulative = [&](double x) {
    if (x >= R) return cum.back();
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - nodes.begin()) - 1;
    const double gx = interpolate(u, x) * omega * std::pow(x, n - 1);
    return cum[k] + 0.5 * (dens[k] + gx) * (x - nodes[k]);
  };
  if (R <= 2.0) return cum.back();
  double best = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    const double a = nodes[j];
    if (a + 2.0 >= R) {
      best = std::max(best, cum.back() - cumulative(R - 2.0));
      break;
    }
    best = std::max(best, cumulative(a + 2.0) - cum[j]);
  }
  return best;
}

ZeroNumber zero_number(const RadialProfile& a, const RadialProfile& b, double deadband) {
  if (!same_nodes(a.grid, b.grid)) throw PreconditionError("zero_number: profiles on different grids");
  ZeroNumber z;
  const std::size_t N = a.size();
  std::vector<double> w(N);
  for (std::size_t j = 0; j < N; ++j) w[j] = a.values[j] - b.values[j];
  int last_sign = 0;
  std::size_t last_index = 0;
  for (std::size_t j = 0; j < N; ++j) {
    int sign = 0;
    if (w[j] > deadband) sign = 1;
    if (w[j] < -deadband) sign = -1;
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) {
      // Locate the actual sign change between last_index and j.
      std::size_t k = last_index;
      while (k + 1 < j && (w[k + 1] > 0.0) == (last_sign > 0) && w[k + 1] != 0.0) ++k;
      const double r0 = a.r(k);
      const double r1 = a.r(k + 1);
      const double w0 = w[k];
      const double w1 = w[k + 1];
      const double r = w0 == w1 ? 0.5 * (r0 + r1) : r0 + (r1 - r0) * w0 / (w0 - w1);
      z.crossings.push_back(r);
      ++z.count;
    }
    last_sign = sign;
    last_index = j;
  }
  return z;
}

double IterateMap::apply(const Nonlinearity& f, double s) const { return s + eta * f.value(s); }

IterateMap iterate_map(const Nonlinearity& f, double eps, double M0, int k) {
  if (!(eps > 0.0) || !(M0 > 0.0) || k < 1) throw PreconditionError("iterate_map needs eps, M0 > 0, k >= 1");
  IterateMap m;
  m.k = k;
  const numerics::Extremum best =
      numerics::maximize([&f](double s) { return f.derivative(s); }, 0.0, 2.0 * M0, 513);
  m.L = std::max({best.value, f.derivative(0.0), f.derivative(2.0 * M0)});
  const double cap = m.L > 0.0 ? std::min(eps, 1.0 / m.L) : eps;
  m.eta = cap / (2.0 * k - 1.0);
  return m;
}

PhiIterates phi_iterates(const Nonlinearity& f, double eps, double M0, int k, double s) {
  PhiIterates out;
  out.map = iterate_map(f, eps, M0, k);
  out.values.reserve(static_cast<std::size_t>(k) + 1);
  out.values.push_back(s);
  for (int i = 1; i <= k; ++i) {
    const double prev = out.values.back();
    out.values.push_back(std::isfinite(prev) ? out.map.apply(f, prev) : kInf);
  }
  return out;
}

Compuv1Report compuv1_check(const Nonlinearity& f, double eps, double M0, int k,
                            std::span<const double> s_grid) {
  Compuv1Report rep;
  rep.map = iterate_map(f, eps, M0, k);
  rep.min_margin = kInf;
  for (double s : s_grid) {
    double phi = s;
    const double fs = f.value(s);
    for (int i = 1; i <= k; ++i) {
      phi = rep.map.apply(f, phi);
      const double bound = s + (2.0 * i - 1.0) * rep.map.eta * fs;
      const double slack = (bound - phi) / std::max(1.0, bound);
      if (slack < -1e-13) ++rep.violations;
      rep.min_margin = std::min(rep.min_margin, slack);
    }
  }
  return rep;
}

std::vector<ItergiRow> itergi_check(const Nonlinearity& f, double eps, double M0, int k_max,
                                    std::span<const double> s_grid) {
  const IterateMap map = iterate_map(f, eps, M0, k_max);
  std::vector<ItergiRow> rows;
  double C = 1.0 / map.eta;
  for (int k = 1; k <= k_max; ++k) {
    ItergiRow row;
    row.k = k;
    row.C_k = C;
    row.min_margin = kInf;
    row.small_s_margin = kInf;
    for (double s : s_grid) {
      if (!(s > 0.0)) continue;
      double phi = s;
      for (int i = 0; i < k && std::isfinite(phi); ++i) phi = map.apply(f, phi);
      const double g = f.value(s) / s;
      const double lhs = s * std::pow(g, k);
      const double rhs = C * (1.0 + phi);
      double slack;
      if (!std::isfinite(rhs)) {
        slack = 1.0;
      } else if (!std::isfinite(lhs)) {
        slack = -kInf;
      } else {
        slack = (rhs - lhs) / rhs;
      }
      if (s >= 1.0) {
        if (slack < -1e-12) ++row.violations;
        row.min_margin = std::min(row.min_margin, slack);
      } else {
        row.small_s_sampled = true;
        row.small_s_margin = std::min(row.small_s_margin, slack);
      }
    }
    rows.push_back(row);
    C = 2.0 * C / map.eta;
  }
  return rows;
}

TransitOracle transit_oracle(const Nonlinearity& f, double M) {
  if (!(M > 0.0) || !(f.value(0.5 * M) > 0.0)) {
    throw PreconditionError("transit_oracle needs f > 0 on [M/2, M]");
  }
  TransitOracle out;
  out.t_transit =
      numerics::integrate([&f](double s) { return 1.0 / f.value(s); }, 0.5 * M, M, 0.0, 1e-14).value;
  out.bound = M / (2.0 * f.value(M));
  out.holds = out.t_transit >= out.bound;
  return out;
}

}  // namespace heatlab
