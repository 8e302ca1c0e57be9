#pragma once

// Radial geometry, meshes, profiles and the discrete radial Laplacian.
//
// The Laplacian is a vertex-centred finite-volume operator: node j owns the
// shell between the neighbouring face midpoints, so that
//   W_j du_j/dt = -(K u)_j
// with W the shell measures and K symmetric, tridiagonal and positive
// semidefinite. At r = 0 this reduces to the symmetry limit 2n(u_1-u_0)/h^2.

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace heatlab {

enum class FarField { dirichlet_zero, decay_matched };

struct Ball {
  double R;
};

struct TruncatedWholeSpace {
  double R_max;
  FarField far_field = FarField::dirichlet_zero;
};

class RadialDomain {
 public:
  static RadialDomain ball(int n, double R);
  /// decay_matched needs n >= 3.
  static RadialDomain whole_space(int n, double R_max, FarField far_field = FarField::dirichlet_zero);

  int n() const { return n_; }
  double wall_radius() const;
  bool is_ball() const { return std::holds_alternative<Ball>(geometry_); }
  /// True for Ball and for whole space with a zero wall.
  bool dirichlet_wall() const;
  const std::variant<Ball, TruncatedWholeSpace>& geometry() const { return geometry_; }
  std::string describe() const;

 private:
  RadialDomain(int n, std::variant<Ball, TruncatedWholeSpace> g) : n_(n), geometry_(g) {}
  int n_;
  std::variant<Ball, TruncatedWholeSpace> geometry_;
};

enum class Spacing { uniform, boundary_refined, origin_and_wall_refined };

std::string to_string(Spacing s);
Spacing spacing_from_string(const std::string& name);

/// Nodes 0 = r_0 < ... < r_J = wall radius, with the finite-volume shell
/// measures and face conductances precomputed.
class RadialGrid {
 public:
  /// `cells` = J >= 2. uniform: r = R xi; boundary_refined: r = R sin(pi xi / 2);
  /// origin_and_wall_refined: r = R (1 - cos(pi xi)) / 2.
  RadialGrid(const RadialDomain& domain, std::size_t cells, Spacing spacing = Spacing::uniform);
  /// Arbitrary nodes; must start at 0, increase strictly and end on the wall.
  RadialGrid(const RadialDomain& domain, std::vector<double> nodes, Spacing tag);

  const RadialDomain& domain() const { return domain_; }
  Spacing spacing() const { return spacing_; }
  std::size_t size() const { return r_.size(); }
  std::size_t cells() const { return r_.size() - 1; }
  double r(std::size_t j) const { return r_[j]; }
  const std::vector<double>& nodes() const { return r_; }
  /// Measure of the shell owned by node j (sums to the volume of the ball).
  const std::vector<double>& measure() const { return measure_; }
  /// Conductance of the face between nodes j and j+1 (size J).
  const std::vector<double>& conductance() const { return conductance_; }
  /// Extra wall coefficient of the Robin far field (0 otherwise).
  double wall_robin() const { return wall_robin_; }
  double min_spacing() const;

 private:
  void build();

  RadialDomain domain_;
  Spacing spacing_;
  std::vector<double> r_;
  std::vector<double> measure_;
  std::vector<double> conductance_;
  double wall_robin_ = 0.0;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(const RadialDomain& domain, std::size_t cells, Spacing spacing = Spacing::uniform);

struct RadialProfile {
  GridPtr grid;
  std::vector<double> values;
  double t = 0.0;

  std::size_t size() const { return values.size(); }
  double sup_norm() const;
  double r(std::size_t j) const { return grid->r(j); }
};

RadialProfile sample_profile(const GridPtr& grid, const std::function<double(double)>& fn,
                             double t = 0.0);
RadialProfile zero_profile(const GridPtr& grid);

/// Piecewise-linear interpolation; 0 beyond the last node.
double interpolate(const RadialProfile& u, double r);

/// ∫ u dx using the finite-volume shell measures.
double integral(const RadialProfile& u);
/// ∫ u v dx.
double inner(const RadialProfile& u, const RadialProfile& v);

/// Symmetric tridiagonal K (diag, off) with W_j du_j/dt = -(K u)_j. With a
/// Dirichlet wall, the wall row and column are dropped from the solve and
/// the wall value is pinned to 0.
struct RadialLaplacian {
  std::vector<double> weight;  // W
  std::vector<double> diag;    // K_jj
  std::vector<double> off;     // K_{j,j+1} (size J)
  bool dirichlet = true;

  std::size_t size() const { return weight.size(); }
  /// (Δu)_j = -(K u)_j / W_j; the Dirichlet wall row returns 0.
  std::vector<double> apply(const std::vector<double>& u) const;
  /// u^T K u
  double quadratic_form(const std::vector<double>& u) const;
};

RadialLaplacian discretize_laplacian(const RadialGrid& grid);

/// Thomas algorithm for a tridiagonal system. `lower[i]` couples row i+1 to
/// column i, `upper[i]` couples row i to column i+1. Throws InternalError on
/// a vanishing pivot.
std::vector<double> solve_tridiagonal(const std::vector<double>& lower, std::vector<double> diag,
                                      const std::vector<double>& upper, std::vector<double> rhs);

/// Solves (W + dt K) x = rhs, honouring the Dirichlet wall.
std::vector<double> solve_shifted(const RadialLaplacian& op, double dt, const std::vector<double>& rhs);

}  // namespace heatlab
