#include "heatlab/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

#include "heatlab/errors.hpp"
#include "heatlab/parallel.hpp"
#include "heatlab/stationary.hpp"

namespace heatlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ProbeRow row_from(const std::string& role, double lambda, double parameter, const SolveOutcome& out,
                  bool retried) {
  ProbeRow row;
  row.role = role;
  row.lambda = lambda;
  row.parameter = parameter;
  row.classification = out.classification;
  row.sup_norm = out.sup_norm_bound;
  row.final_norm = out.final_norm;
  row.T_est = out.T_est;
  row.energy_min = out.energy_min;
  row.energy_certificate = out.energy_certificate;
  row.truncation_relative = out.truncation_relative;
  row.retried = retried;
  return row;
}

/// Threshold runs retry UNDECIDED once with tighter steps and a longer horizon.
RunPolicy retry_policy(const RunPolicy& policy) {
  RunPolicy p = policy.tightened(10.0);
  p.T_max *= 4.0;
  p.substep_observer = nullptr;
  return p;
}

ProbeRow probe(const std::string& role, double lambda, double parameter, const RadialProfile& u0,
               const Nonlinearity& f, const RunPolicy& policy) {
  RunPolicy p = policy;
  p.substep_observer = nullptr;
  SolveOutcome out = run(f, u0, p);
  if (out.classification != Classification::undecided) return row_from(role, lambda, parameter, out, false);
  out = run(f, u0, retry_policy(policy));
  return row_from(role, lambda, parameter, out, true);
}

RadialProfile clipped(RadialProfile u) {
  for (double& v : u.values) v = std::max(0.0, v);
  return u;
}

RadialProfile plus_f(const RadialProfile& u, const Nonlinearity& f, double eps) {
  RadialProfile out = u;
  for (double& v : out.values) v += eps * f.value(v);
  return out;
}

RadialProfile minus_f(const RadialProfile& u, const Nonlinearity& f, double eps) {
  RadialProfile out = u;
  for (double& v : out.values) v -= eps * f.value(v);
  return clipped(std::move(out));
}

RadialProfile bump(const RadialProfile& u, double sign) {
  const double R = u.grid->domain().wall_radius();
  const double support = 0.25 * R;
  const double amplitude = 1e-3 * u.sup_norm();
  RadialProfile out = u;
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double r = out.r(j);
    if (r < support) {
      const double c = std::cos(0.5 * std::numbers::pi * r / support);
      out.values[j] += sign * amplitude * c * c;
    }
  }
  return clipped(std::move(out));
}

}  // namespace

InitialFamily InitialFamily::scaled(RadialProfile base) {
  if (!base.grid) throw PreconditionError("scaled family needs a grid");
  for (double v : base.values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw PreconditionError("scaled family base must be finite and >= 0");
  }
  if (base.sup_norm() == 0.0) throw PreconditionError("scaled family base must not vanish");
  return InitialFamily(ScaledProfile{std::move(base)});
}

InitialFamily InitialFamily::bubble_tail(double A, double gamma, double C0) {
  if (!(A > 0.0) || !(gamma > 0.0) || !(C0 > 0.0)) throw DomainError("bubble tail needs A, gamma, C0 > 0");
  return InitialFamily(BubbleTail{A, gamma, C0});
}

InitialFamily InitialFamily::compact_cap(double R0, double eta) {
  if (!(R0 > eta) || !(eta > 0.0)) throw DomainError("compact cap needs R0 > eta > 0");
  return InitialFamily(CompactCap{R0, eta});
}

InitialFamily InitialFamily::singular_minus(double p, double alpha, double eps, double cap) {
  if (!(p > 1.0) || !(alpha > 0.0) || !(eps > 0.0) || !(cap > 0.0)) {
    throw DomainError("singular-minus family needs p > 1 and alpha, eps, cap > 0");
  }
  return InitialFamily(SingularMinus{p, alpha, eps, cap});
}

RadialProfile InitialFamily::base(const GridPtr& grid) const {
  const int n = grid->domain().n();
  return std::visit(
      overloaded{
          [&](const ScaledProfile& k) {
            if (k.base.grid->nodes() != grid->nodes()) {
              throw PreconditionError("scaled family sampled on a different grid");
            }
            RadialProfile u = k.base;
            u.grid = grid;
            u.t = 0.0;
            return u;
          },
          [&](const BubbleTail& k) {
            if (!(k.gamma > n - 2.0)) throw PreconditionError("bubble tail needs gamma > n - 2");
            const double ell = std::pow(k.C0 / k.A, 1.0 / k.gamma);
            return sample_profile(grid, [&](double r) {
              return k.A * std::pow(1.0 + r * r / (ell * ell), -0.5 * k.gamma);
            });
          },
          [&](const CompactCap& k) {
            return sample_profile(grid, [&](double r) {
              if (r <= k.R0 - k.eta) return 1.0;
              if (r >= k.R0) return 0.0;
              return (k.R0 - r) / k.eta;
            });
          },
          [&](const SingularMinus& k) {
            const SingularState s = singular_state(n, k.p);
            return sample_profile(grid, [&](double r) {
              if (r == 0.0) {
                if (k.alpha < s.m) return k.cap;
                if (k.alpha > s.m) return 0.0;
                return s.c_p > k.eps ? k.cap : 0.0;
              }
              const double v = s(r) - k.eps * std::pow(r, -k.alpha);
              return std::clamp(v, 0.0, k.cap);
            });
          }},
      kind_);
}

RadialProfile InitialFamily::at(double lambda, const GridPtr& grid) const {
  if (!(lambda >= 0.0)) throw PreconditionError("family parameter must be >= 0");
  RadialProfile u = base(grid);
  for (double& v : u.values) v *= lambda;
  return u;
}

std::string InitialFamily::name() const {
  std::ostringstream out;
  std::visit(overloaded{[&](const ScaledProfile&) { out << "scaled_profile"; },
                        [&](const BubbleTail& k) {
                          out << "bubble_tail(A=" << k.A << ",gamma=" << k.gamma << ",C0=" << k.C0 << ")";
                        },
                        [&](const CompactCap& k) { out << "compact_cap(R0=" << k.R0 << ",eta=" << k.eta << ")"; },
                        [&](const SingularMinus& k) {
                          out << "singular_minus(p=" << k.p << ",alpha=" << k.alpha << ",eps=" << k.eps
                              << ",cap=" << k.cap << ")";
                        }},
             kind_);
  return out.str();
}

bool is_global_side(Classification c) {
  return c == Classification::decayed || c == Classification::global_bounded;
}

std::string to_string(TypeStatus s) {
  switch (s) {
    case TypeStatus::consistent:
      return "consistent";
    case TypeStatus::refuted:
      return "refuted";
    case TypeStatus::undecided:
      return "undecided";
  }
  return "?";
}

ThresholdReport bisect_threshold(const InitialFamily& family, const GridPtr& grid, const Nonlinearity& f,
                                 const RunPolicy& policy, const ThresholdPolicy& tpolicy) {
  policy.validate();
  if (!(tpolicy.width > 0.0) || !(tpolicy.lambda_start > 0.0)) {
    throw PreconditionError("threshold policy needs width > 0 and lambda_start > 0");
  }
  const RadialProfile base = family.base(grid);
  for (double v : base.values) {
    if (v < 0.0) throw PreconditionError("family must be nonnegative so that lambda u0 is monotone in lambda");
  }
  if (base.sup_norm() == 0.0) throw PreconditionError("family profile vanishes");

  ThresholdReport rep;
  rep.family = family.name();
  auto run_at = [&](const std::string& role, double lambda) {
    RadialProfile u0 = base;
    for (double& v : u0.values) v *= lambda;
    rep.probes.push_back(probe(role, lambda, 0.0, u0, f, policy));
    return rep.probes.back().classification;
  };

  bool have_lo = false;
  bool have_hi = false;
  double lambda = tpolicy.lambda_start;
  while (!(have_lo && have_hi)) {
    if (static_cast<int>(rep.probes.size()) >= tpolicy.max_probes) {
      rep.note = "probe budget exhausted during the initial search";
      return rep;
    }
    if (lambda > tpolicy.lambda_cap) {
      throw PreconditionError("no blow-up found up to lambda_cap: family may be globally global");
    }
    if (lambda < tpolicy.lambda_floor) throw PreconditionError("no global run found down to lambda_floor");
    const Classification c = run_at("search", lambda);
    if (is_global_side(c) && (!have_hi || lambda < rep.lambda_hi)) {
      rep.lambda_lo = have_lo ? std::max(rep.lambda_lo, lambda) : lambda;
      have_lo = true;
    } else if (c == Classification::blowup && (!have_lo || lambda > rep.lambda_lo)) {
      rep.lambda_hi = have_hi ? std::min(rep.lambda_hi, lambda) : lambda;
      have_hi = true;
    }
    if (have_lo && !have_hi) {
      lambda = 2.0 * rep.lambda_lo;
    } else if (have_hi && !have_lo) {
      lambda = 0.5 * rep.lambda_hi;
    } else if (!have_lo && !have_hi) {
      lambda *= 0.5;
    }
  }

  auto width = [&] { return (rep.lambda_hi - rep.lambda_lo) / rep.lambda_hi; };
  while (width() > tpolicy.width) {
    if (static_cast<int>(rep.probes.size()) >= tpolicy.max_probes) {
      rep.note = "probe budget exhausted during bisection";
      break;
    }
    const double lo = rep.lambda_lo;
    const double hi = rep.lambda_hi;
    bool moved = false;
    for (double frac : {0.5, 0.25, 0.75}) {
      const double mid = lo + frac * (hi - lo);
      const Classification c = run_at("bisect", mid);
      if (is_global_side(c)) {
        rep.lambda_lo = mid;
        moved = true;
        break;
      }
      if (c == Classification::blowup) {
        rep.lambda_hi = mid;
        moved = true;
        break;
      }
    }
    if (!moved) {
      rep.note = "undecided probes inside the bracket";
      break;
    }
  }
  rep.relative_width = width();
  rep.converged = rep.relative_width <= tpolicy.width;
  return rep;
}

std::optional<std::pair<double, double>> find_inversion(const std::vector<ProbeRow>& probes) {
  for (const ProbeRow& b : probes) {
    if (b.classification != Classification::blowup) continue;
    for (const ProbeRow& g : probes) {
      if (is_global_side(g.classification) && g.lambda > b.lambda) return std::make_pair(b.lambda, g.lambda);
    }
  }
  return std::nullopt;
}

ThresholdVerdicts classify_threshold_type(const ThresholdReport& report, const InitialFamily& family,
                                          const GridPtr& grid, const Nonlinearity& f,
                                          const RunPolicy& policy, const std::vector<double>& eps_list,
                                          unsigned jobs) {
  if (eps_list.empty()) throw PreconditionError("eps_list must not be empty");
  for (double e : eps_list) {
    if (!(e > 0.0)) throw PreconditionError("eps values must be > 0");
  }
  if (!(report.lambda_hi > report.lambda_lo) || !(report.lambda_lo > 0.0)) {
    throw PreconditionError("classify_threshold_type needs a bracketed threshold");
  }
  const RadialProfile hi = family.at(report.lambda_hi, grid);
  const RadialProfile lo = family.at(report.lambda_lo, grid);

  struct Job {
    std::string role;
    double lambda;
    double eps;
    RadialProfile u0;
  };
  std::vector<Job> work;
  for (double e : eps_list) {
    work.push_back({"eps_super", report.lambda_hi * (1.0 + e), e, family.at(report.lambda_hi * (1.0 + e), grid)});
    work.push_back({"eps_sub", report.lambda_lo / (1.0 + e), e, family.at(report.lambda_lo / (1.0 + e), grid)});
    work.push_back({"epsf_super", report.lambda_hi, e, plus_f(hi, f, e)});
    work.push_back({"epsf_sub", report.lambda_lo, e, minus_f(lo, f, e)});
  }
  work.push_back({"strict_super", report.lambda_hi, 0.0, bump(hi, 1.0)});
  work.push_back({"strict_sub", report.lambda_lo, 0.0, bump(lo, -1.0)});

  ThresholdVerdicts out;
  out.probes.resize(work.size());
  parallel_for(work.size(), jobs, [&](std::size_t i) {
    out.probes[i] = probe(work[i].role, work[i].lambda, work[i].eps, work[i].u0, f, policy);
  });

  auto verdict_for = [&](const std::string& prefix) {
    TypeVerdict v;
    v.status = TypeStatus::consistent;
    bool undecided = false;
    for (const ProbeRow& row : out.probes) {
      if (row.role.rfind(prefix, 0) != 0) continue;
      const bool super = row.role.find("super") != std::string::npos;
      if (row.classification == Classification::undecided) {
        undecided = true;
        continue;
      }
      const bool met = super ? row.classification == Classification::blowup : is_global_side(row.classification);
      if (!met && v.status != TypeStatus::refuted) {
        v.status = TypeStatus::refuted;
        v.witness = row.parameter;
        v.note = row.role + " classified " + to_string(row.classification);
      }
    }
    if (v.status == TypeStatus::consistent && undecided) {
      v.status = TypeStatus::undecided;
      v.note = "some probes undecided";
    }
    return v;
  };
  out.eps_threshold = verdict_for("eps_");
  out.epsf_threshold = verdict_for("epsf_");
  out.strict_surrogate = verdict_for("strict_");
  return out;
}

SubthresholdTable subthreshold_probe(const ThresholdReport& report, const InitialFamily& family,
                                     const GridPtr& grid, const Nonlinearity& f, const RunPolicy& policy,
                                     const std::vector<double>& margins, unsigned jobs) {
  if (margins.empty()) throw PreconditionError("margins must not be empty");
  for (double m : margins) {
    if (!(m > 0.0)) throw PreconditionError("margins must be > 0");
  }
  if (!(report.lambda_lo > 0.0)) throw PreconditionError("subthreshold_probe needs a bracketed threshold");
  const RadialProfile star = family.at(report.lambda_lo, grid);
  struct Job {
    std::string role;
    double lambda;
    double margin;
    RadialProfile u0;
  };
  std::vector<Job> work;
  for (double m : margins) {
    work.push_back({"epsf_sub", report.lambda_lo, m, minus_f(star, f, m)});
    work.push_back({"eps_sub", report.lambda_lo / (1.0 + m), m, family.at(report.lambda_lo / (1.0 + m), grid)});
  }
  SubthresholdTable table;
  table.rows.resize(work.size());
  parallel_for(work.size(), jobs, [&](std::size_t i) {
    table.rows[i] = probe(work[i].role, work[i].lambda, work[i].margin, work[i].u0, f, policy);
  });
  for (const ProbeRow& r : table.rows) table.a_priori_bound = std::max(table.a_priori_bound, r.sup_norm);
  return table;
}

void write_probe_csv(std::ostream& out, const std::vector<ProbeRow>& rows) {
  out << "role,lambda,parameter,classification,sup_norm,T_est,energy_min\n";
  char buf[512];
  for (const ProbeRow& r : rows) {
    const double t_est = r.T_est ? *r.T_est : std::nan("");
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%s,%.17g,%.17g,%.17g\n", r.role.c_str(), r.lambda, r.parameter,
                  to_string(r.classification).c_str(), r.sup_norm, t_est, r.energy_min);
    out << buf;
  }
}

std::string summary_line(const ThresholdReport& report) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "family=%s lambda_lo=%.10g lambda_hi=%.10g relative_width=%.3g converged=%s probes=%zu",
                report.family.c_str(), report.lambda_lo, report.lambda_hi, report.relative_width,
                report.converged ? "yes" : "no", report.probes.size());
  std::string line(buf);
  if (!report.note.empty()) line += " note=\"" + report.note + "\"";
  return line;
}

}  // namespace heatlab
