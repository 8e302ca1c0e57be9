#pragma once

// Threshold location on rays lambda * u0 and probes of the threshold type.

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "heatlab/grid.hpp"
#include "heatlab/nonlin.hpp"
#include "heatlab/solver.hpp"

namespace heatlab {

struct ScaledProfile {
  RadialProfile base;
};

/// u0(r) = A (1 + r^2 / l^2)^{-gamma/2} with l = (C0/A)^{1/gamma}, so r^gamma u0 -> C0.
struct BubbleTail {
  double A;
  double gamma;
  double C0;
};

/// 1 on [0, R0 - eta], linear down to 0 at R0, 0 beyond.
struct CompactCap {
  double R0;
  double eta;
};

/// min(cap, max(0, c_p r^{-m} - eps r^{-alpha})) for the power p.
struct SingularMinus {
  double p;
  double alpha;
  double eps;
  double cap;
};

class InitialFamily {
 public:
  using Kind = std::variant<ScaledProfile, BubbleTail, CompactCap, SingularMinus>;

  static InitialFamily scaled(RadialProfile base);
  static InitialFamily bubble_tail(double A, double gamma, double C0);
  static InitialFamily compact_cap(double R0, double eta);
  static InitialFamily singular_minus(double p, double alpha, double eps, double cap);

  /// The profile at lambda = 1 sampled on `grid`.
  RadialProfile base(const GridPtr& grid) const;
  RadialProfile at(double lambda, const GridPtr& grid) const;
  const Kind& kind() const { return kind_; }
  std::string name() const;

 private:
  explicit InitialFamily(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

struct ThresholdPolicy {
  double width = 1e-3;  // relative bracket width (hi - lo) / hi
  double lambda_start = 1.0;
  double lambda_cap = 1e6;
  double lambda_floor = 1e-8;
  int max_probes = 200;
  unsigned jobs = 1;
};

bool is_global_side(Classification c);

struct ProbeRow {
  std::string role;  // search, bisect, eps_super, eps_sub, epsf_super, ...
  double lambda = 0.0;
  double parameter = 0.0;  // eps or margin for probe tables
  Classification classification = Classification::undecided;
  double sup_norm = 0.0;
  double final_norm = 0.0;
  std::optional<double> T_est;
  double energy_min = 0.0;
  bool energy_certificate = false;
  bool truncation_relative = false;
  bool retried = false;
};

enum class TypeStatus { consistent, refuted, undecided };
std::string to_string(TypeStatus s);

struct TypeVerdict {
  TypeStatus status = TypeStatus::undecided;
  double witness = 0.0;  // eps at which the expectation failed
  std::string note;
};

struct ThresholdVerdicts {
  TypeVerdict eps_threshold;
  TypeVerdict epsf_threshold;
  TypeVerdict strict_surrogate;
  std::vector<ProbeRow> probes;
};

struct ThresholdReport {
  std::string family;
  double lambda_lo = 0.0;  // global side
  double lambda_hi = 0.0;  // blow-up side
  double relative_width = 0.0;
  bool converged = false;
  std::string note;
  std::vector<ProbeRow> probes;
};

/// Exponential search followed by bisection. Endpoints are always decisively
/// classified; an UNDECIDED probe is rerun once with a tightened policy and
/// otherwise recorded without moving the bracket. Throws PreconditionError if
/// no blow-up is found up to lambda_cap or no global run down to lambda_floor.
ThresholdReport bisect_threshold(const InitialFamily& family, const GridPtr& grid, const Nonlinearity& f,
                                 const RunPolicy& policy, const ThresholdPolicy& tpolicy = {});

/// Pair of probes (lower lambda, higher lambda) with BLOWUP below a global run.
std::optional<std::pair<double, double>> find_inversion(const std::vector<ProbeRow>& probes);

/// (1+eps) and eps f perturbations above lambda_hi u0 must blow up; the
/// matching perturbations below lambda_lo u0 must stay global. The strict
/// variant uses a bump of amplitude 1e-3 |u*| supported on [0, R/4].
ThresholdVerdicts classify_threshold_type(const ThresholdReport& report, const InitialFamily& family,
                                          const GridPtr& grid, const Nonlinearity& f,
                                          const RunPolicy& policy, const std::vector<double>& eps_list,
                                          unsigned jobs = 1);

struct SubthresholdTable {
  std::vector<ProbeRow> rows;
  double a_priori_bound = 0.0;  // max sup norm over all probes
};

/// For each margin m: u* - m f(u*) (clipped at 0) and u*/(1+m), u* = lambda_lo u0.
SubthresholdTable subthreshold_probe(const ThresholdReport& report, const InitialFamily& family,
                                     const GridPtr& grid, const Nonlinearity& f, const RunPolicy& policy,
                                     const std::vector<double>& margins, unsigned jobs = 1);

/// One row per probe: role, lambda, parameter, classification, sup_norm, T_est, energy_min.
void write_probe_csv(std::ostream& out, const std::vector<ProbeRow>& rows);
std::string summary_line(const ThresholdReport& report);

}  // namespace heatlab
