#pragma once

// Source terms f for u_t - Δu = f(u) and numerical checkers for the
// structural hypotheses placed on them (convexity, Osgood, growth, scaling).

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace heatlab {

struct PowerKind {
  double p;
};

/// f(s) = s^p log^a(2 + s^2)
struct LogPowerKind {
  double p;
  double a;
};

/// f(s) = e^s - s - 1
struct ExpMinusLinearKind {};

/// f(s) = s^p_lead + eta * s^p. p_lead is usually p_S(n).
struct SumOfPowersKind {
  double p_lead;
  double p;
  double eta;
};

struct SplineKnot {
  double s;
  double value;
  double slope;
};

/// C^1 piecewise cubic Hermite on [0, s_last], continued by tail_coeff * s^tail_exponent.
struct ConvexSplineKind {
  std::vector<SplineKnot> knots;
  double tail_exponent;
  double tail_coeff;
  std::vector<double> prefix_integral;  // F at each knot
};

/// f ≡ 0: the linear heat equation. Not in any hypothesis class; used as a control.
struct ZeroKind {};

using NonlinearityKind =
    std::variant<PowerKind, LogPowerKind, ExpMinusLinearKind, SumOfPowersKind, ConvexSplineKind,
                 ZeroKind>;

/// Precomputed antiderivative of a log-power term (defined in nonlin.cpp).
struct LogPowerTable;

/// Constants of the growth bound f(s) <= c_f s^p + c_f_tilde.
struct GrowthConstants {
  double c_f = 0.0;
  double c_f_tilde = 0.0;
};

/// Constants of f(s)s >= (2 + eta) F(s) - c_eta.
struct ArConstants {
  double eta = 0.0;
  double c_eta = 0.0;
};

/// Immutable source term with value, derivative and antiderivative evaluators.
class Nonlinearity {
 public:
  static Nonlinearity power(double p);
  static Nonlinearity log_power(double p, double a);
  static Nonlinearity exp_minus_linear();
  /// s^{p_S(n)} + eta s^p; requires n >= 3.
  static Nonlinearity sum_of_powers(int n, double p, double eta);
  static Nonlinearity sum_of_powers_explicit(double p_lead, double p, double eta);
  /// Validates s_0 = 0, f(0) = 0, monotone knots and nonnegative second
  /// derivative on every segment and on the tail.
  static Nonlinearity convex_spline(std::vector<SplineKnot> knots);
  /// Convex C^1 spline equal to slope*s on [0, eta] and to s^p beyond s_join.
  static Nonlinearity linear_then_power(double slope, double eta, double p, double s_join);
  static Nonlinearity zero();

  /// f(s); throws DomainError unless s is finite and >= 0.
  double value(double s) const;
  double derivative(double s) const;
  /// F(s) = ∫_0^s f.
  double antiderivative(double s) const;
  double operator()(double s) const { return value(s); }

  const NonlinearityKind& kind() const { return kind_; }
  std::string name() const;

  /// Growth exponent p; +inf for exponential growth, 0 for the zero function.
  double growth_exponent() const { return p_; }
  /// Analytic constants when the kind admits them (Power, LogPower with a <= 0).
  const std::optional<GrowthConstants>& declared_growth() const { return growth_; }
  const std::optional<ArConstants>& declared_ar() const { return ar_declared_; }
  /// Declared constants, or constants fitted at construction on a log grid in [1e-3, 1e3].
  const ArConstants& ar_constants() const { return ar_; }
  /// True when f(s)s >= (2+eta)F(s) holds with eta > 0 and c_eta = 0.
  bool has_exact_ar() const { return ar_.eta > 0.0 && ar_.c_eta == 0.0; }
  bool is_zero() const { return std::holds_alternative<ZeroKind>(kind_); }

 private:
  explicit Nonlinearity(NonlinearityKind kind);
  void finalize_constants();

  NonlinearityKind kind_;
  std::shared_ptr<const LogPowerTable> log_table_;
  double p_ = 0.0;
  std::optional<GrowthConstants> growth_;
  std::optional<ArConstants> ar_declared_;
  ArConstants ar_;
};

enum class VerdictStatus { holds, fails, inconclusive };

std::string to_string(VerdictStatus status);

/// Outcome of one hypothesis check. `witness` is the s (or λ) at which the
/// verdict was decided; `margin` is the signed slack there.
struct Verdict {
  VerdictStatus status = VerdictStatus::inconclusive;
  double witness = 0.0;
  double margin = 0.0;
  std::string note;

  bool holds() const { return status == VerdictStatus::holds; }
};

struct OsgoodResult {
  Verdict verdict;
  /// ∫_{s0}^∞ ds/f(s) when the verdict holds, +inf when it fails.
  double integral = 0.0;
  double finite_part = 0.0;  // ∫_{s0}^{S}
  double cutoff = 0.0;       // S
  double tail_lower = 0.0;   // envelope bounds on ∫_S^∞
  double tail_upper = 0.0;
};

/// Decides ∫_{s0}^∞ ds/f < ∞: quadrature on [s0, S] and kind-specific
/// power/log envelopes on [S, ∞).
OsgoodResult check_osgood(const Nonlinearity& f, double s0);

struct ScalingSample {
  double lambda;
  double deviation;  // max over s in [1/2, 2] of |f(λs)/(f(λ)s^p) - 1|
};

struct HypothesisReport {
  Verdict f10_convex;
  Verdict f10_osgood;
  Verdict f1_monotone;
  Verdict f2_scaling_limit;
  Verdict f3_ar;
  Verdict f4_growth;
  Verdict fmm_lower;

  GrowthConstants growth;  // used for f4 (declared or fitted)
  ArConstants ar;          // used for f3 (declared or fitted)
  double c_fmm = 0.0;      // derived constant of the lower scaling bound
  std::vector<ScalingSample> f2_ladder;
  /// Largest λ on the ladder whose deviation still exceeded tolerance.
  std::optional<double> f2_transient_lambda;
  double osgood_integral = 0.0;
};

inline constexpr double kF2Tolerance = 1e-2;

/// Sampled checks of convexity, Osgood, (f1)-(f4) and the lower scaling
/// bound. Requires a strictly increasing positive sample and lambda_max >= 10.
/// Verdicts are range-limited to the sample.
HypothesisReport check_f1_f4(const Nonlinearity& f, std::span<const double> sample,
                             double lambda_max);

struct LogConstants {
  double u_ell;  // root of 2 log(2+u^2) = u^2
  double c_ell;  // inf_{u>0} g(u) = (2 + u_ell^2)/4
  double a_ell;  // -(p-1) c_ell
  double residual;
};

/// g(u) = log(2+u^2)(2+u^2)/(2u^2)
double log_g(double u);

LogConstants log_constants(double p);

/// Sign indicator of f'' for f = u^p log^a(2+u^2).
double h_a(double p, double a, double u);

}  // namespace heatlab
