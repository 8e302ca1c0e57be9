#include "heatlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "heatlab/errors.hpp"
#include "heatlab/numerics.hpp"

namespace heatlab {

RadialDomain RadialDomain::ball(int n, double R) {
  if (n < 1) throw DomainError("dimension must be >= 1");
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("ball radius must be positive");
  return RadialDomain(n, Ball{R});
}

RadialDomain RadialDomain::whole_space(int n, double R_max, FarField far_field) {
  if (n < 1) throw DomainError("dimension must be >= 1");
  if (!(R_max > 0.0) || !std::isfinite(R_max)) throw DomainError("R_max must be positive");
  if (far_field == FarField::decay_matched && n < 3) {
    throw DomainError("decay_matched far field needs n >= 3");
  }
  return RadialDomain(n, TruncatedWholeSpace{R_max, far_field});
}

double RadialDomain::wall_radius() const {
  if (const auto* b = std::get_if<Ball>(&geometry_)) return b->R;
  return std::get<TruncatedWholeSpace>(geometry_).R_max;
}

bool RadialDomain::dirichlet_wall() const {
  if (is_ball()) return true;
  return std::get<TruncatedWholeSpace>(geometry_).far_field == FarField::dirichlet_zero;
}

std::string RadialDomain::describe() const {
  std::ostringstream out;
  if (is_ball()) {
    out << "ball(n=" << n_ << ", R=" << wall_radius() << ")";
  } else {
    const auto& w = std::get<TruncatedWholeSpace>(geometry_);
    out << "whole_space(n=" << n_ << ", R_max=" << w.R_max << ", far_field="
        << (w.far_field == FarField::dirichlet_zero ? "dirichlet_zero" : "decay_matched") << ")";
  }
  return out.str();
}

std::string to_string(Spacing s) {
  switch (s) {
    case Spacing::uniform:
      return "uniform";
    case Spacing::boundary_refined:
      return "boundary_refined";
    case Spacing::origin_and_wall_refined:
      return "origin_and_wall_refined";
  }
  return "?";
}

Spacing spacing_from_string(const std::string& name) {
  if (name == "uniform") return Spacing::uniform;
  if (name == "boundary_refined") return Spacing::boundary_refined;
  if (name == "origin_and_wall_refined") return Spacing::origin_and_wall_refined;
  throw ConfigError("unknown grid spacing '" + name + "'");
}

RadialGrid::RadialGrid(const RadialDomain& domain, std::size_t cells, Spacing spacing)
    : domain_(domain), spacing_(spacing) {
  if (cells < 2) throw PreconditionError("grid needs at least 2 cells");
  const double R = domain.wall_radius();
  r_.resize(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j) {
    const double xi = static_cast<double>(j) / static_cast<double>(cells);
    switch (spacing) {
      case Spacing::uniform:
        r_[j] = R * xi;
        break;
      case Spacing::boundary_refined:
        r_[j] = R * std::sin(0.5 * std::numbers::pi * xi);
        break;
      case Spacing::origin_and_wall_refined:
        r_[j] = 0.5 * R * (1.0 - std::cos(std::numbers::pi * xi));
        break;
    }
  }
  r_.front() = 0.0;
  r_.back() = R;
  build();
}

RadialGrid::RadialGrid(const RadialDomain& domain, std::vector<double> nodes, Spacing tag)
    : domain_(domain), spacing_(tag), r_(std::move(nodes)) {
  if (r_.size() < 3) throw PreconditionError("grid needs at least 3 nodes");
  if (r_.front() != 0.0) throw PreconditionError("grid must start at r = 0");
  for (std::size_t j = 1; j < r_.size(); ++j) {
    if (!(r_[j] > r_[j - 1])) throw PreconditionError("grid nodes must increase strictly");
  }
  if (std::abs(r_.back() - domain.wall_radius()) > 1e-12 * domain.wall_radius()) {
    throw PreconditionError("last grid node must lie on the wall");
  }
  r_.back() = domain.wall_radius();
  build();
}

void RadialGrid::build() {
  const int n = domain_.n();
  const double omega = numerics::unit_sphere_area(n);
  const std::size_t J = r_.size() - 1;
  measure_.assign(J + 1, 0.0);
  conductance_.assign(J, 0.0);
  auto ball_measure = [omega, n](double r) { return omega * std::pow(r, n) / n; };
  double inner_face = 0.0;
  for (std::size_t j = 0; j <= J; ++j) {
    const double outer_face = j < J ? 0.5 * (r_[j] + r_[j + 1]) : r_[J];
    measure_[j] = ball_measure(outer_face) - ball_measure(inner_face);
    if (j < J) conductance_[j] = omega * std::pow(outer_face, n - 1) / (r_[j + 1] - r_[j]);
    inner_face = outer_face;
  }
  wall_robin_ = 0.0;
  if (!domain_.dirichlet_wall()) {
    const double R = r_[J];
    wall_robin_ = omega * (n - 2.0) * std::pow(R, n - 2);
  }
}

double RadialGrid::min_spacing() const {
  double h = r_[1] - r_[0];
  for (std::size_t j = 1; j + 1 < r_.size(); ++j) h = std::min(h, r_[j + 1] - r_[j]);
  return h;
}

GridPtr make_grid(const RadialDomain& domain, std::size_t cells, Spacing spacing) {
  return std::make_shared<const RadialGrid>(domain, cells, spacing);
}

double RadialProfile::sup_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

RadialProfile sample_profile(const GridPtr& grid, const std::function<double(double)>& fn, double t) {
  RadialProfile u{grid, std::vector<double>(grid->size()), t};
  for (std::size_t j = 0; j < grid->size(); ++j) u.values[j] = fn(grid->r(j));
  return u;
}

RadialProfile zero_profile(const GridPtr& grid) {
  return RadialProfile{grid, std::vector<double>(grid->size(), 0.0), 0.0};
}

double interpolate(const RadialProfile& u, double r) {
  const auto& nodes = u.grid->nodes();
  if (r <= 0.0) return u.values.front();
  if (r >= nodes.back()) return r == nodes.back() ? u.values.back() : 0.0;
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
  const std::size_t j = static_cast<std::size_t>(it - nodes.begin()) - 1;
  const double w = (r - nodes[j]) / (nodes[j + 1] - nodes[j]);
  return (1.0 - w) * u.values[j] + w * u.values[j + 1];
}

double integral(const RadialProfile& u) {
  const auto& W = u.grid->measure();
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) s += W[j] * u.values[j];
  return s;
}

double inner(const RadialProfile& u, const RadialProfile& v) {
  if (u.grid != v.grid && u.grid->nodes() != v.grid->nodes()) {
    throw PreconditionError("inner: profiles live on different grids");
  }
  const auto& W = u.grid->measure();
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) s += W[j] * u.values[j] * v.values[j];
  return s;
}

RadialLaplacian discretize_laplacian(const RadialGrid& grid) {
  RadialLaplacian op;
  const std::size_t N = grid.size();
  const auto& C = grid.conductance();
  op.weight = grid.measure();
  op.diag.assign(N, 0.0);
  op.off.assign(N - 1, 0.0);
  for (std::size_t j = 0; j + 1 < N; ++j) {
    op.diag[j] += C[j];
    op.diag[j + 1] += C[j];
    op.off[j] = -C[j];
  }
  op.diag[N - 1] += grid.wall_robin();
  op.dirichlet = grid.domain().dirichlet_wall();
  return op;
}

std::vector<double> RadialLaplacian::apply(const std::vector<double>& u) const {
  const std::size_t N = size();
  std::vector<double> out(N, 0.0);
  for (std::size_t j = 0; j < N; ++j) {
    double ku = diag[j] * u[j];
    if (j > 0) ku += off[j - 1] * u[j - 1];
    if (j + 1 < N) ku += off[j] * u[j + 1];
    out[j] = -ku / weight[j];
  }
  if (dirichlet) out[N - 1] = 0.0;
  return out;
}

double RadialLaplacian::quadratic_form(const std::vector<double>& u) const {
  const std::size_t N = size();
  const std::size_t last = dirichlet ? N - 1 : N;
  double s = 0.0;
  for (std::size_t j = 0; j < last; ++j) {
    s += diag[j] * u[j] * u[j];
    if (j + 1 < last) s += 2.0 * off[j] * u[j] * u[j + 1];
  }
  return s;
}

std::vector<double> solve_tridiagonal(const std::vector<double>& lower, std::vector<double> diag,
                                      const std::vector<double>& upper, std::vector<double> rhs) {
  const std::size_t N = diag.size();
  if (rhs.size() != N || lower.size() + 1 < N || upper.size() + 1 < N) {
    throw PreconditionError("solve_tridiagonal: size mismatch");
  }
  for (std::size_t i = 1; i < N; ++i) {
    if (diag[i - 1] == 0.0 || !std::isfinite(diag[i - 1])) {
      throw InternalError("solve_tridiagonal: singular pivot");
    }
    const double m = lower[i - 1] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  if (diag[N - 1] == 0.0 || !std::isfinite(diag[N - 1])) {
    throw InternalError("solve_tridiagonal: singular pivot");
  }
  rhs[N - 1] /= diag[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) {
    rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
  }
  return rhs;
}

std::vector<double> solve_shifted(const RadialLaplacian& op, double dt, const std::vector<double>& rhs) {
  const std::size_t N = op.size();
  const std::size_t M = op.dirichlet ? N - 1 : N;
  std::vector<double> d(M);
  std::vector<double> o(M - 1);
  std::vector<double> b(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(M));
  for (std::size_t j = 0; j < M; ++j) d[j] = op.weight[j] + dt * op.diag[j];
  for (std::size_t j = 0; j + 1 < M; ++j) o[j] = dt * op.off[j];
  std::vector<double> x = solve_tridiagonal(o, std::move(d), o, std::move(b));
  if (op.dirichlet) x.push_back(0.0);
  return x;
}

}  // namespace heatlab
