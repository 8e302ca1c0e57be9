#include "heatlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "heatlab/errors.hpp"

namespace heatlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Reaction values above this leave too little floating-point headroom for a step.
constexpr double kReactionCeiling = 1e300;

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

class Trajectory {
 public:
  struct Attempt {
    RadialProfile half;
    RadialProfile fine;
    double err = kInf;
    double clip = 0.0;
  };

  Trajectory(const Nonlinearity& f, const RadialProfile& u0, const RunPolicy& policy, bool observe)
      : f_(f), policy_(policy), op_(discretize_laplacian(*u0.grid)), state_(u0), observe_(observe) {
    if (u0.values.size() != u0.grid->size()) throw PreconditionError("initial profile size mismatch");
    for (double v : u0.values) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw PreconditionError("initial data must be finite and >= 0");
    }
    if (op_.dirichlet) state_.values.back() = 0.0;
    eig_ = kaplan_eigenpair(u0.grid);
    weights_ = kaplan_weights(u0.grid, eig_);
    out_.truncation_relative = false;
    certificate_allowed_ = policy.energy_certificate && u0.grid->domain().is_ball() && f.has_exact_ar();
    record(0.0);
    if (policy_.substep_observer && observe_) policy_.substep_observer(state_);
    out_.snapshots.push_back(state_);
    out_.energy_min = out_.initial.energy;
    if (certificate_allowed_ && out_.initial.energy < 0.0) {
      finish(Classification::blowup, "negative energy at t = 0");
      out_.energy_certificate = true;
    }
  }

  bool done() const { return done_; }
  const RadialProfile& state() const { return state_; }
  double t() const { return state_.t; }

  double cfl_dt() const {
    double fp = 0.0;
    for (double v : state_.values) fp = std::max(fp, f_.derivative(v));
    return fp > 0.0 ? policy_.cfl / fp : kInf;
  }

  Attempt attempt(double dt) const {
    Attempt a;
    double clip = 0.0;
    const RadialProfile coarse = imex_step(state_, f_, op_, dt, policy_.clip_tol, &clip);
    a.half = imex_step(state_, f_, op_, 0.5 * dt, policy_.clip_tol, &clip);
    a.clip = clip;
    if (!all_finite(coarse.values) || !all_finite(a.half.values)) return a;
    a.fine = imex_step(a.half, f_, op_, 0.5 * dt, policy_.clip_tol, &clip);
    a.clip = clip;
    if (!all_finite(a.fine.values)) return a;
    double err = 0.0;
    for (std::size_t j = 0; j < coarse.size(); ++j) {
      const double scale = policy_.local_tol * std::max(1.0, std::abs(a.fine.values[j]));
      err = std::max(err, std::abs(coarse.values[j] - a.fine.values[j]) / scale);
    }
    a.err = err;
    return a;
  }

  void accept(Attempt&& a, double dt) {
    const auto& observer = policy_.substep_observer;
    if (observer && observe_) observer(a.half);
    state_ = std::move(a.fine);
    if (observer && observe_) observer(state_);
    out_.stats.max_clip = std::max(out_.stats.max_clip, a.clip);
    ++out_.stats.accepted;
    record(dt);
    const SeriesRow& row = out_.series.back();
    out_.energy_min = std::min(out_.energy_min, row.energy);
    if (policy_.snapshot_every > 0 && out_.stats.accepted % policy_.snapshot_every == 0) {
      out_.snapshots.push_back(state_);
    }
    classify(row);
  }

  void reject() { ++out_.stats.rejected; }

  void underflow() {
    const double sup = state_.sup_norm();
    if (above_blow_threshold(sup)) {
      const double rem = remaining_time(f_, sup);
      out_.T_est = state_.t + (std::isfinite(rem) ? rem : 0.0);
      finish(Classification::blowup, "time step underflow above M_blow");
    } else {
      finish(Classification::undecided, "time step underflow below M_blow");
    }
  }

  void max_steps() { finish(Classification::undecided, "step limit reached"); }

  SolveOutcome take() {
    if (!done_) finish(Classification::undecided, "integration stopped early");
    return std::move(out_);
  }

 private:
  void record(double dt) {
    SeriesRow row;
    row.t = state_.t;
    row.sup_norm = state_.sup_norm();
    row.dt = dt;
    const auto& W = state_.grid->measure();
    double potential = 0.0;
    double y = 0.0;
    for (std::size_t j = 0; j < state_.size(); ++j) {
      potential += W[j] * f_.antiderivative(state_.values[j]);
      y += weights_[j] * state_.values[j];
    }
    row.energy = 0.5 * op_.quadratic_form(state_.values) - potential;
    row.kaplan_y = y;
    row.l1_delta = weighted_l1(state_);
    out_.sup_norm_bound = std::max(out_.sup_norm_bound, row.sup_norm);
    if (dt == 0.0) {
      out_.initial = row;
    } else {
      out_.series.push_back(row);
    }
  }

  // M_blow, or the level where f itself approaches overflow (exp reaches it near 690).
  bool above_blow_threshold(double sup) const { return sup > policy_.M_blow || f_.value(sup) > kReactionCeiling; }

  void classify(const SeriesRow& row) {
    if (certificate_allowed_ && row.energy < 0.0) {
      out_.energy_certificate = true;
      finish(Classification::blowup, "negative energy");
      return;
    }
    if (above_blow_threshold(row.sup_norm)) {
      const double rem = remaining_time(f_, row.sup_norm);
      if (rem < policy_.dt_min) {
        out_.T_est = row.t + rem;
        finish(Classification::blowup, "remaining Osgood time below dt_min");
        return;
      }
    }
    if (row.sup_norm < policy_.decay_tol) {
      finish(Classification::decayed, "sup norm below decay_tol");
      return;
    }
    if (row.t >= policy_.T_max * (1.0 - 1e-14)) {
      bool nonincreasing = true;
      const double start = policy_.T_max - policy_.bound_window;
      double prev = out_.initial.sup_norm;
      double prev_t = out_.initial.t;
      for (const SeriesRow& r : out_.series) {
        if (prev_t >= start && r.sup_norm > prev * (1.0 + 1e-12)) nonincreasing = false;
        prev = r.sup_norm;
        prev_t = r.t;
      }
      if (nonincreasing && row.sup_norm < policy_.M_blow) {
        finish(Classification::global_bounded, "bounded and nonincreasing over the trailing window");
      } else {
        finish(Classification::undecided, "sup norm still growing at T_max");
      }
      return;
    }
    if (out_.stats.accepted >= policy_.max_steps) max_steps();
  }

  void finish(Classification c, std::string reason) {
    done_ = true;
    out_.classification = c;
    out_.reason = std::move(reason);
    out_.final_norm = state_.sup_norm();
    out_.final_state = state_;
    if (out_.snapshots.empty() || out_.snapshots.back().t != state_.t) out_.snapshots.push_back(state_);
    out_.truncation_relative = !state_.grid->domain().is_ball() &&
                               (c == Classification::decayed || c == Classification::global_bounded);
  }

  const Nonlinearity& f_;
  const RunPolicy& policy_;
  RadialLaplacian op_;
  RadialProfile state_;
  Eigenpair eig_;
  std::vector<double> weights_;
  SolveOutcome out_;
  bool certificate_allowed_ = false;
  bool done_ = false;
  bool observe_ = true;
};

// Advances every unfinished trajectory on a shared time grid.
template <class OnShared>
void drive(std::vector<Trajectory*>& group, const RunPolicy& policy, OnShared&& on_shared) {
  double dt = policy.dt_initial;
  while (true) {
    std::vector<Trajectory*> active;
    for (Trajectory* tr : group) {
      if (!tr->done()) active.push_back(tr);
    }
    if (active.empty()) return;
    const double t = active.front()->t();
    double limit = std::min(policy.dt_max, policy.T_max - t);
    double cfl_limit = kInf;
    for (Trajectory* tr : active) cfl_limit = std::min(cfl_limit, tr->cfl_dt());
    limit = std::min(limit, cfl_limit);
    dt = std::min(dt, limit);
    // dt_min is measured in units of the reaction time scale 1/max f'(u) once that drops below 1.
    const double floor = policy.dt_min * std::min(1.0, cfl_limit / policy.cfl);
    if (dt < floor) {
      for (Trajectory* tr : active) tr->underflow();
      continue;
    }
    std::vector<Trajectory::Attempt> attempts;
    double err = 0.0;
    for (Trajectory* tr : active) {
      attempts.push_back(tr->attempt(dt));
      err = std::max(err, attempts.back().err);
    }
    if (err <= 1.0) {
      // Land exactly on T_max when the step reaches it.
      for (std::size_t i = 0; i < active.size(); ++i) {
        if (t + dt >= policy.T_max * (1.0 - 1e-14)) {
          attempts[i].half.t = t + 0.5 * dt;
          attempts[i].fine.t = policy.T_max;
        }
        active[i]->accept(std::move(attempts[i]), dt);
      }
      if (active.size() == group.size()) on_shared();
      const double grow = err > 0.0 ? 0.9 / std::sqrt(err) : 2.0;
      dt *= std::clamp(grow, 0.2, 2.0);
    } else {
      for (Trajectory* tr : active) tr->reject();
      const double shrink = std::isfinite(err) ? 0.9 / std::sqrt(err) : 0.25;
      dt *= std::clamp(shrink, 0.1, 0.9);
    }
  }
}

}  // namespace

std::string to_string(Classification c) {
  switch (c) {
    case Classification::blowup:
      return "BLOWUP";
    case Classification::global_bounded:
      return "GLOBAL_BOUNDED";
    case Classification::decayed:
      return "DECAYED";
    case Classification::undecided:
      return "UNDECIDED";
  }
  return "?";
}

void RunPolicy::validate() const {
  if (!(M_blow > decay_tol)) throw ConfigError("policy: M_blow must exceed decay_tol");
  if (!(T_max > 0.0) || !(decay_tol > 0.0)) throw ConfigError("policy: T_max and decay_tol must be positive");
  if (!(dt_min > 0.0) || !(dt_max >= dt_min) || !(dt_initial > 0.0)) {
    throw ConfigError("policy: need 0 < dt_min <= dt_max and dt_initial > 0");
  }
  if (!(local_tol > 0.0) || !(cfl > 0.0) || !(bound_window >= 0.0) || !(clip_tol >= 0.0)) {
    throw ConfigError("policy: tolerances must be positive");
  }
}

RunPolicy RunPolicy::tightened(double factor) const {
  RunPolicy p = *this;
  p.local_tol /= factor;
  p.dt_max /= factor;
  p.dt_initial = std::min(p.dt_initial, p.dt_max);
  return p;
}

RadialProfile imex_step(const RadialProfile& u, const Nonlinearity& f, const RadialLaplacian& op, double dt,
                        double clip_tol, double* clipped) {
  const std::size_t N = u.size();
  std::vector<double> rhs(N);
  for (std::size_t j = 0; j < N; ++j) rhs[j] = op.weight[j] * (u.values[j] + dt * f.value(u.values[j]));
  RadialProfile next{u.grid, solve_shifted(op, dt, rhs), u.t + dt};
  double sup = 0.0;
  for (double v : next.values) {
    if (std::isfinite(v)) sup = std::max(sup, std::abs(v));
  }
  const double floor = -clip_tol * std::max(1.0, sup);
  for (double& v : next.values) {
    if (v < 0.0) {
      if (v < floor) throw InternalError("imex_step: negative overshoot beyond clip tolerance");
      if (clipped) *clipped = std::max(*clipped, -v);
      v = 0.0;
    }
  }
  return next;
}

double remaining_time(const Nonlinearity& f, double s) {
  if (!(s > 0.0)) return kInf;
  if (const auto* pk = std::get_if<PowerKind>(&f.kind())) {
    return pk->p > 1.0 ? std::pow(s, 1.0 - pk->p) / (pk->p - 1.0) : kInf;
  }
  if (f.is_zero()) return kInf;
  const OsgoodResult r = check_osgood(f, s);
  return r.verdict.holds() ? r.integral : kInf;
}

Eigenpair kaplan_eigenpair(const GridPtr& grid) {
  const RadialDomain& dom = grid->domain();
  if (dom.is_ball()) return eigenpair(grid);
  const double R = std::min(2.0, dom.wall_radius());
  return eigenpair(make_grid(RadialDomain::ball(dom.n(), R), 200));
}

SolveOutcome run(const Nonlinearity& f, const RadialProfile& u0, const RunPolicy& policy) {
  policy.validate();
  Trajectory tr(f, u0, policy, true);
  std::vector<Trajectory*> group{&tr};
  drive(group, policy, [] {});
  return tr.take();
}

PairOutcome run_pair_ordered(const Nonlinearity& f, const RadialProfile& u0, const RadialProfile& v0,
                             const RunPolicy& policy, double eps, double order_tol) {
  policy.validate();
  if (u0.grid->nodes() != v0.grid->nodes()) throw PreconditionError("run_pair_ordered: different grids");
  if (!(eps >= 0.0)) throw PreconditionError("run_pair_ordered: eps must be >= 0");
  for (std::size_t j = 0; j < u0.size(); ++j) {
    if (u0.values[j] < v0.values[j]) throw PreconditionError("run_pair_ordered: u0 >= v0 violated");
  }
  Trajectory tu(f, u0, policy, false);
  Trajectory tv(f, v0, policy, false);
  OrderingReport ord;
  ord.eps = eps;
  ord.min_difference = kInf;
  ord.min_subsol_margin = kInf;
  auto compare = [&] {
    const auto& a = tu.state().values;
    const auto& b = tv.state().values;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double d = a[j] - b[j];
      if (d < ord.min_difference) {
        ord.min_difference = d;
        ord.t_at_min = tu.t();
      }
      if (eps > 0.0) ord.min_subsol_margin = std::min(ord.min_subsol_margin, d - eps * f.value(b[j]));
    }
    ++ord.shared_steps;
  };
  compare();
  std::vector<Trajectory*> group{&tu, &tv};
  drive(group, policy, compare);
  if (eps == 0.0) ord.min_subsol_margin = ord.min_difference;
  ord.violated = ord.min_difference < -order_tol || ord.min_subsol_margin < -order_tol;
  return PairOutcome{tu.take(), tv.take(), ord};
}

std::pair<SolveOutcome, SolveOutcome> run_pair(
    const Nonlinearity& f, const RadialProfile& u0, const RadialProfile& v0, const RunPolicy& policy,
    const std::function<void(const RadialProfile&, const RadialProfile&)>& on_step) {
  policy.validate();
  if (u0.grid->nodes() != v0.grid->nodes()) throw PreconditionError("run_pair: different grids");
  Trajectory tu(f, u0, policy, false);
  Trajectory tv(f, v0, policy, false);
  auto shared = [&] {
    if (on_step) on_step(tu.state(), tv.state());
  };
  shared();
  std::vector<Trajectory*> group{&tu, &tv};
  drive(group, policy, shared);
  return {tu.take(), tv.take()};
}

void write_series_csv(std::ostream& out, const SolveOutcome& outcome) {
  out << "t,sup_norm,energy,kaplan_y,l1_delta,dt\n";
  char buf[512];
  for (const SeriesRow& r : outcome.series) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.sup_norm, r.energy,
                  r.kaplan_y, r.l1_delta, r.dt);
    out << buf;
  }
}

}  // namespace heatlab
