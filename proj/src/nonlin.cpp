#include "heatlab/nonlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "heatlab/errors.hpp"
#include "heatlab/numerics.hpp"

namespace heatlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// c * x with 0 * inf = 0.
double scaled(double c, double x) { return c == 0.0 ? 0.0 : c * x; }

void require_argument(double s) {
  if (!std::isfinite(s) || s < 0.0) {
    std::ostringstream msg;
    msg << "nonlinearity evaluated at invalid argument s = " << s;
    throw DomainError(msg.str());
  }
}

// Series of e^s minus its Taylor polynomial of degree first-1.
double exp_tail_series(double s, int first) {
  double term = 1.0;
  for (int k = 1; k <= first; ++k) term *= s / k;
  double sum = term;
  for (int k = first + 1; k < 60; ++k) {
    term *= s / k;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

struct HermiteEval {
  double value;
  double slope;
  double integral;  // ∫ from segment start
};

HermiteEval hermite(const SplineKnot& k0, const SplineKnot& k1, double s) {
  const double h = k1.s - k0.s;
  const double t = (s - k0.s) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double t4 = t3 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  const double d00 = 6 * t2 - 6 * t;
  const double d10 = 3 * t2 - 4 * t + 1;
  const double d01 = -6 * t2 + 6 * t;
  const double d11 = 3 * t2 - 2 * t;
  const double i00 = t - t3 + 0.5 * t4;
  const double i10 = 0.5 * t2 - 2.0 * t3 / 3.0 + 0.25 * t4;
  const double i01 = t3 - 0.5 * t4;
  const double i11 = -t3 / 3.0 + 0.25 * t4;
  HermiteEval out;
  out.value = h00 * k0.value + h10 * h * k0.slope + h01 * k1.value + h11 * h * k1.slope;
  out.slope = (d00 * k0.value + d01 * k1.value) / h + d10 * k0.slope + d11 * k1.slope;
  out.integral =
      h * (i00 * k0.value + i10 * h * k0.slope + i01 * k1.value + i11 * h * k1.slope);
  return out;
}

// Second derivative of the Hermite segment at its two ends (it is linear in between).
std::pair<double, double> hermite_curvature(const SplineKnot& k0, const SplineKnot& k1) {
  const double h = k1.s - k0.s;
  const double dy = k1.value - k0.value;
  const double left = (6 * dy - 4 * h * k0.slope - 2 * h * k1.slope) / (h * h);
  const double right = (-6 * dy + 2 * h * k0.slope + 4 * h * k1.slope) / (h * h);
  return {left, right};
}

std::size_t segment_of(const ConvexSplineKind& sp, double s) {
  const auto it = std::upper_bound(sp.knots.begin(), sp.knots.end(), s,
                                   [](double x, const SplineKnot& k) { return x < k.s; });
  const auto idx = static_cast<std::size_t>(it - sp.knots.begin());
  return idx == 0 ? 0 : idx - 1;
}

double log_two_plus_square(double z) { return z > 1e100 ? 2.0 * std::log(z) : std::log(2.0 + z * z); }

double log_power_integrand(const LogPowerKind& k, double z) {
  return std::pow(z, k.p) * std::pow(log_two_plus_square(z), k.a);
}

}  // namespace

/// Y(t) = log F(e^t) on a uniform grid in t with Y, Y', Y'' at every knot,
/// evaluated by quintic Hermite interpolation. Outside [s_min, s_max] a
/// two-term series (small s) or direct quadrature (large s) is used.
struct LogPowerTable {
  LogPowerKind kind;
  double t0 = 0.0;
  double h = 0.0;
  std::vector<double> Y;
  std::vector<double> Y1;
  std::vector<double> Y2;

  static constexpr double s_min = 1e-6;
  static constexpr double s_max = 1e30;

  explicit LogPowerTable(LogPowerKind k) : kind(k) {
    t0 = std::log(s_min);
    const double t1 = std::log(s_max);
    const std::size_t knots = 2001;
    h = (t1 - t0) / static_cast<double>(knots - 1);
    Y.resize(knots);
    Y1.resize(knots);
    Y2.resize(knots);
    double F = small(s_min);
    double s_prev = s_min;
    auto integrand = [this](double z) { return log_power_integrand(kind, z); };
    for (std::size_t i = 0; i < knots; ++i) {
      const double s = i + 1 == knots ? s_max : std::exp(t0 + h * static_cast<double>(i));
      if (i > 0) F += boost::math::quadrature::gauss<double, 15>::integrate(integrand, s_prev, s);
      s_prev = s;
      const double f = log_power_integrand(kind, s);
      const double L = log_two_plus_square(s);
      const double fp = f * (kind.p / s + kind.a * 2.0 * s / ((2.0 + s * s) * L));
      const double q = s * f / F;
      Y[i] = std::log(F);
      Y1[i] = q;
      Y2[i] = (s * f + s * s * fp) / F - q * q;
    }
  }

  double small(double s) const {
    const double L = std::log(2.0);
    return std::pow(L, kind.a) * std::pow(s, kind.p + 1.0) *
           (1.0 / (kind.p + 1.0) + kind.a * s * s / (2.0 * L * (kind.p + 3.0)));
  }

  double operator()(double s) const {
    if (s == 0.0) return 0.0;
    if (s <= s_min) return small(s);
    if (s >= s_max) {
      auto integrand = [this](double z) { return log_power_integrand(kind, z); };
      return std::exp(Y.back()) + numerics::integrate(integrand, s_max, s, 0.0, 1e-12).value;
    }
    const double x = (std::log(s) - t0) / h;
    const std::size_t i = std::min(static_cast<std::size_t>(x), Y.size() - 2);
    const double u = x - static_cast<double>(i);
    const double u2 = u * u;
    const double u3 = u2 * u;
    const double u4 = u3 * u;
    const double u5 = u4 * u;
    const double H0 = 1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5;
    const double H1 = u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5;
    const double H2 = 0.5 * (u2 - 3.0 * u3 + 3.0 * u4 - u5);
    const double H3 = 0.5 * (u3 - 2.0 * u4 + u5);
    const double H4 = -4.0 * u3 + 7.0 * u4 - 3.0 * u5;
    const double H5 = 10.0 * u3 - 15.0 * u4 + 6.0 * u5;
    const double y = H0 * Y[i] + H1 * h * Y1[i] + H2 * h * h * Y2[i] + H3 * h * h * Y2[i + 1] +
                     H4 * h * Y1[i + 1] + H5 * Y[i + 1];
    return std::exp(y);
  }
};

Nonlinearity::Nonlinearity(NonlinearityKind kind) : kind_(std::move(kind)) {
  if (const auto* k = std::get_if<LogPowerKind>(&kind_)) log_table_ = std::make_shared<const LogPowerTable>(*k);
  finalize_constants();
}

Nonlinearity Nonlinearity::power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("power nonlinearity needs p >= 1");
  return Nonlinearity(PowerKind{p});
}

Nonlinearity Nonlinearity::log_power(double p, double a) {
  if (!(p >= 1.0) || !std::isfinite(p) || !std::isfinite(a)) {
    throw DomainError("log-power nonlinearity needs p >= 1 and finite a");
  }
  return Nonlinearity(LogPowerKind{p, a});
}

Nonlinearity Nonlinearity::exp_minus_linear() { return Nonlinearity(ExpMinusLinearKind{}); }

Nonlinearity Nonlinearity::sum_of_powers(int n, double p, double eta) {
  if (n < 3) throw DomainError("sum of powers uses p_S(n) and needs n >= 3");
  return sum_of_powers_explicit(1.0 + 4.0 / (n - 2), p, eta);
}

Nonlinearity Nonlinearity::sum_of_powers_explicit(double p_lead, double p, double eta) {
  if (!(p_lead >= 1.0) || !(p >= 1.0) || !(eta >= 0.0)) {
    throw DomainError("sum of powers needs exponents >= 1 and eta >= 0");
  }
  return Nonlinearity(SumOfPowersKind{p_lead, p, eta});
}

Nonlinearity Nonlinearity::convex_spline(std::vector<SplineKnot> knots) {
  if (knots.size() < 2) throw DomainError("convex spline needs at least two knots");
  if (knots.front().s != 0.0 || knots.front().value != 0.0) {
    throw DomainError("convex spline must start at (0, 0)");
  }
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (!(knots[i + 1].s > knots[i].s)) throw DomainError("spline knots must increase");
    const auto [left, right] = hermite_curvature(knots[i], knots[i + 1]);
    const double scale = 1e-10 * (1.0 + std::abs(knots[i + 1].slope));
    if (left < -scale || right < -scale) {
      std::ostringstream msg;
      msg << "spline segment [" << knots[i].s << ", " << knots[i + 1].s << "] is not convex";
      throw DomainError(msg.str());
    }
  }
  for (const auto& k : knots) {
    if (k.value < 0.0 || k.slope < 0.0) throw DomainError("spline must be nonnegative and nondecreasing");
  }
  const SplineKnot& last = knots.back();
  if (!(last.value > 0.0)) throw DomainError("spline must be positive at the last knot");
  ConvexSplineKind sp;
  sp.tail_exponent = last.s * last.slope / last.value;
  if (sp.tail_exponent < 1.0) throw DomainError("spline tail exponent must be >= 1 for convexity");
  sp.tail_coeff = last.value / std::pow(last.s, sp.tail_exponent);
  sp.prefix_integral.assign(knots.size(), 0.0);
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    sp.prefix_integral[i + 1] =
        sp.prefix_integral[i] + hermite(knots[i], knots[i + 1], knots[i + 1].s).integral;
  }
  sp.knots = std::move(knots);
  return Nonlinearity(std::move(sp));
}

Nonlinearity Nonlinearity::linear_then_power(double slope, double eta, double p, double s_join) {
  if (!(slope > 0.0) || !(eta > 0.0) || !(p > 1.0) || !(s_join > eta)) {
    throw DomainError("linear_then_power needs slope, eta > 0, p > 1, s_join > eta");
  }
  // Convex C^1 quadratic spline with one interior knot xi (Schumaker) from
  // (eta, slope) to (s_join, p s_join^{p-1}); cubic Hermite reproduces it exactly.
  const double x0 = eta, y0 = slope * eta, m0 = slope;
  const double x1 = s_join, y1 = std::pow(s_join, p), m1 = p * std::pow(s_join, p - 1.0);
  const double secant = (y1 - y0) / (x1 - x0);
  if (!(m0 < secant && secant < m1)) throw DomainError("s_join too small for a convex join");
  const double xi = (y1 - y0 - m1 * x1 + m0 * x0) / (m0 - m1);  // where the end tangents meet
  const double m_xi = (2.0 * (y1 - y0) - (m0 * (xi - x0) + m1 * (x1 - xi))) / (x1 - x0);
  const double y_xi = y0 + 0.5 * (m0 + m_xi) * (xi - x0);
  std::vector<SplineKnot> knots{{0.0, 0.0, slope}, {x0, y0, m0}, {xi, y_xi, m_xi}, {x1, y1, m1}};
  return convex_spline(std::move(knots));
}

Nonlinearity Nonlinearity::zero() { return Nonlinearity(ZeroKind{}); }

double Nonlinearity::value(double s) const {
  require_argument(s);
  return std::visit(
      overloaded{
          [s](const PowerKind& k) { return std::pow(s, k.p); },
          [s](const LogPowerKind& k) { return std::pow(s, k.p) * std::pow(log_two_plus_square(s), k.a); },
          [s](const ExpMinusLinearKind&) {
            return s < 1.0 ? exp_tail_series(s, 2) : std::expm1(s) - s;
          },
          [s](const SumOfPowersKind& k) { return std::pow(s, k.p_lead) + scaled(k.eta, std::pow(s, k.p)); },
          [s](const ConvexSplineKind& k) {
            if (s >= k.knots.back().s) return k.tail_coeff * std::pow(s, k.tail_exponent);
            const std::size_t i = segment_of(k, s);
            return hermite(k.knots[i], k.knots[i + 1], s).value;
          },
          [](const ZeroKind&) { return 0.0; }},
      kind_);
}

double Nonlinearity::derivative(double s) const {
  require_argument(s);
  return std::visit(
      overloaded{
          [s](const PowerKind& k) { return k.p * std::pow(s, k.p - 1.0); },
          [s](const LogPowerKind& k) {
            const double L = log_two_plus_square(s);
            const double ratio = 1.0 / (1.0 + 2.0 / (s * s));  // s^2 / (2 + s^2)
            return std::pow(s, k.p - 1.0) * std::pow(L, k.a - 1.0) * (k.p * L + 2.0 * k.a * ratio);
          },
          [s](const ExpMinusLinearKind&) { return std::expm1(s); },
          [s](const SumOfPowersKind& k) {
            return k.p_lead * std::pow(s, k.p_lead - 1.0) + scaled(k.eta, k.p * std::pow(s, k.p - 1.0));
          },
          [s](const ConvexSplineKind& k) {
            if (s >= k.knots.back().s) {
              return k.tail_coeff * k.tail_exponent * std::pow(s, k.tail_exponent - 1.0);
            }
            const std::size_t i = segment_of(k, s);
            return hermite(k.knots[i], k.knots[i + 1], s).slope;
          },
          [](const ZeroKind&) { return 0.0; }},
      kind_);
}

double Nonlinearity::antiderivative(double s) const {
  require_argument(s);
  return std::visit(
      overloaded{
          [s](const PowerKind& k) { return std::pow(s, k.p + 1.0) / (k.p + 1.0); },
          [this, s](const LogPowerKind&) { return (*log_table_)(s); },
          [s](const ExpMinusLinearKind&) {
            return s < 1.0 ? exp_tail_series(s, 3) : std::expm1(s) - s - 0.5 * s * s;
          },
          [s](const SumOfPowersKind& k) {
            return std::pow(s, k.p_lead + 1.0) / (k.p_lead + 1.0) +
                   scaled(k.eta, std::pow(s, k.p + 1.0) / (k.p + 1.0));
          },
          [s](const ConvexSplineKind& k) {
            const SplineKnot& last = k.knots.back();
            if (s >= last.s) {
              const double q1 = k.tail_exponent + 1.0;
              return k.prefix_integral.back() +
                     k.tail_coeff * (std::pow(s, q1) - std::pow(last.s, q1)) / q1;
            }
            const std::size_t i = segment_of(k, s);
            return k.prefix_integral[i] + hermite(k.knots[i], k.knots[i + 1], s).integral;
          },
          [](const ZeroKind&) { return 0.0; }},
      kind_);
}

std::string Nonlinearity::name() const {
  std::ostringstream out;
  std::visit(overloaded{[&](const PowerKind& k) { out << "power:" << k.p; },
                        [&](const LogPowerKind& k) { out << "logpower:" << k.p << ":" << k.a; },
                        [&](const ExpMinusLinearKind&) { out << "exp"; },
                        [&](const SumOfPowersKind& k) {
                          out << "sum:" << k.p_lead << ":" << k.p << ":" << k.eta;
                        },
                        [&](const ConvexSplineKind& k) {
                          out << "spline:" << k.knots.size() << ":" << k.tail_exponent;
                        },
                        [&](const ZeroKind&) { out << "zero"; }},
             kind_);
  return out.str();
}

void Nonlinearity::finalize_constants() {
  std::visit(overloaded{
                 [this](const PowerKind& k) {
                   p_ = k.p;
                   growth_ = GrowthConstants{1.0, 0.0};
                   if (k.p > 1.0) ar_declared_ = ArConstants{0.5 * (k.p - 1.0), 0.0};
                 },
                 [this](const LogPowerKind& k) {
                   p_ = k.p;
                   if (k.a <= 0.0) {
                     growth_ = GrowthConstants{std::pow(std::log(2.0), k.a), 0.0};
                     // f's/f = p + a/g(s) >= p + a/c_ell for a <= 0.
                     const double eta0 = k.p - 1.0 + k.a / log_constants(k.p > 1.0 ? k.p : 2.0).c_ell;
                     if (eta0 > 0.0) ar_declared_ = ArConstants{0.5 * eta0, 0.0};
                   } else if (k.p > 1.0) {
                     ar_declared_ = ArConstants{0.5 * (k.p - 1.0), 0.0};
                   }
                 },
                 [this](const ExpMinusLinearKind&) { p_ = kInf; },
                 [this](const SumOfPowersKind& k) { p_ = k.eta > 0.0 ? std::max(k.p_lead, k.p) : k.p_lead; },
                 [this](const ConvexSplineKind& k) { p_ = k.tail_exponent; },
                 [this](const ZeroKind&) { p_ = 0.0; }},
             kind_);

  if (ar_declared_) {
    ar_ = *ar_declared_;
    return;
  }
  if (is_zero()) {
    ar_ = ArConstants{0.0, 0.0};
    return;
  }
  double eta = 1.0;
  if (const auto* sum = std::get_if<SumOfPowersKind>(&kind_)) {
    const double low = sum->eta > 0.0 ? std::min(sum->p_lead, sum->p) : sum->p_lead;
    eta = low > 1.0 ? 0.5 * (low - 1.0) : 0.5;
  } else if (const auto* sp = std::get_if<ConvexSplineKind>(&kind_)) {
    eta = sp->tail_exponent > 1.0 ? 0.5 * (sp->tail_exponent - 1.0) : 0.5;
  } else if (std::isfinite(p_) && p_ > 1.0) {
    eta = 0.5 * (p_ - 1.0);
  }
  double c_eta = 0.0;
  for (double s : numerics::log_space(1e-3, 1e3, 121)) {
    const double f = value(s);
    const double F = antiderivative(s);
    if (!std::isfinite(f) || !std::isfinite(F)) break;
    const double deficit = (2.0 + eta) * F - f * s;
    // Relative roundoff floor so exact identities are not reported as constants.
    if (deficit > 1e-12 * (f * s)) c_eta = std::max(c_eta, deficit);
  }
  ar_ = ArConstants{eta, c_eta};
}

std::string to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::holds:
      return "holds";
    case VerdictStatus::fails:
      return "fails";
    case VerdictStatus::inconclusive:
      return "inconclusive";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Osgood

namespace {

struct TailEnvelope {
  double lower = 0.0;  // lower bound on ∫_S^∞ ds/f
  double upper = kInf;
  bool known = false;
};

// ∫_S^∞ s^{-p} ℓ(s)^{-a} ds with ℓ(s) = c + 2 log s, evaluated in x = log s.
double log_envelope_tail(double p, double a, double c, double S) {
  if (p < 1.0) return kInf;
  if (p == 1.0 && a <= 1.0) return kInf;
  if (p == 1.0) {
    // closed form: ℓ^{1-a} / (2(a-1)) at s = S
    return std::pow(c + 2.0 * std::log(S), 1.0 - a) / (2.0 * (a - 1.0));
  }
  auto integrand = [p, a, c](double x) { return std::exp(-(p - 1.0) * x) * std::pow(c + 2.0 * x, -a); };
  return numerics::integrate_to_infinity(integrand, std::log(S), 1e-12).value;
}

TailEnvelope tail_envelope(const NonlinearityKind& kind, double S) {
  TailEnvelope env;
  std::visit(overloaded{
                 [&](const PowerKind& k) {
                   env.known = true;
                   const double v = k.p > 1.0 ? std::pow(S, 1.0 - k.p) / (k.p - 1.0) : kInf;
                   env.lower = env.upper = v;
                 },
                 [&](const LogPowerKind& k) {
                   // For s >= S >= 1: 2 log s <= log(2+s^2) <= 2 log s + log(1 + 2/S^2).
                   env.known = true;
                   const double lo_c = 0.0;
                   const double hi_c = std::log1p(2.0 / (S * S));
                   // 1/f = s^{-p} L^{-a}; L^{-a} is decreasing in L when a > 0.
                   const double c_small_f = k.a >= 0.0 ? lo_c : hi_c;  // envelope f_lo
                   const double c_large_f = k.a >= 0.0 ? hi_c : lo_c;  // envelope f_hi
                   env.upper = log_envelope_tail(k.p, k.a, c_small_f, S);
                   env.lower = log_envelope_tail(k.p, k.a, c_large_f, S);
                 },
                 [&](const ExpMinusLinearKind&) {
                   // e^s/2 <= e^s - s - 1 <= e^s for s >= 2.
                   env.known = S >= 2.0;
                   env.lower = std::exp(-S);
                   env.upper = 2.0 * std::exp(-S);
                 },
                 [&](const SumOfPowersKind& k) {
                   // For s >= 1: s^q <= f <= (1 + eta) s^q with q the larger exponent.
                   env.known = true;
                   const double q = k.eta > 0.0 ? std::max(k.p_lead, k.p) : k.p_lead;
                   const double base = q > 1.0 ? std::pow(S, 1.0 - q) / (q - 1.0) : kInf;
                   env.upper = base;
                   env.lower = base / (1.0 + k.eta);
                 },
                 [&](const ConvexSplineKind& k) {
                   env.known = S >= k.knots.back().s;
                   const double q = k.tail_exponent;
                   const double v = q > 1.0 ? std::pow(S, 1.0 - q) / (k.tail_coeff * (q - 1.0)) : kInf;
                   env.lower = env.upper = v;
                 },
                 [&](const ZeroKind&) { env.known = false; }},
             kind);
  return env;
}

}  // namespace

OsgoodResult check_osgood(const Nonlinearity& f, double s0) {
  require_argument(s0);
  OsgoodResult out;
  if (s0 <= 0.0) throw DomainError("check_osgood needs s0 > 0");
  if (f.is_zero() || !(f.value(s0) > 0.0)) {
    out.verdict = {VerdictStatus::inconclusive, s0, 0.0, "f vanishes at s0"};
    out.integral = kInf;
    return out;
  }
  double S = std::max(s0, 1.0) * 1e6;
  if (std::holds_alternative<ExpMinusLinearKind>(f.kind())) S = std::max(s0, 40.0);
  if (const auto* sp = std::get_if<ConvexSplineKind>(&f.kind())) {
    S = std::max(S, 2.0 * sp->knots.back().s);
  }
  out.cutoff = S;
  // ∫_{s0}^{S} ds/f(s) in x = log s.
  auto integrand = [&f](double x) {
    const double s = std::exp(x);
    if (!std::isfinite(s)) return 0.0;
    return s / f.value(s);
  };
  out.finite_part = numerics::integrate(integrand, std::log(s0), std::log(S), 1e-14, 1e-12, 8).value;
  const TailEnvelope env = tail_envelope(f.kind(), S);
  out.tail_lower = env.lower;
  out.tail_upper = env.upper;
  if (!env.known) {
    out.verdict = {VerdictStatus::inconclusive, S, 0.0, "no tail envelope"};
    out.integral = kInf;
    return out;
  }
  const bool upper_finite = std::isfinite(env.upper);
  const bool lower_finite = std::isfinite(env.lower);
  if (upper_finite && lower_finite) {
    // Tail value from quadrature of the true integrand on [S, ∞); must sit
    // inside the envelope bracket.
    // Quadrature up to x = 700 (e^x still finite), envelope midpoint beyond.
    constexpr double kLogMax = 700.0;
    const TailEnvelope far = tail_envelope(f.kind(), std::exp(kLogMax));
    double tail = 0.5 * (far.lower + far.upper);
    if (std::log(S) < kLogMax) tail += numerics::integrate(integrand, std::log(S), kLogMax, 0.0, 1e-12, 16).value;
    if (!(tail >= env.lower * (1 - 1e-8)) || !(tail <= env.upper * (1 + 1e-8))) {
      tail = 0.5 * (env.lower + env.upper);
    }
    out.integral = out.finite_part + tail;
    out.verdict = {VerdictStatus::holds, S, env.upper, "tail bounded by envelope"};
  } else if (!upper_finite && !lower_finite) {
    out.integral = kInf;
    out.verdict = {VerdictStatus::fails, S, kInf, "tail envelopes diverge"};
  } else {
    out.integral = kInf;
    out.verdict = {VerdictStatus::inconclusive, S, 0.0, "tail envelopes disagree"};
  }
  return out;
}

// ---------------------------------------------------------------------------
// (f1)-(f4), (fMM)

namespace {

Verdict check_convex(const Nonlinearity& f, std::span<const double> sample) {
  double prev = f.derivative(0.0);
  if (f.value(0.0) != 0.0) return {VerdictStatus::fails, 0.0, f.value(0.0), "f(0) != 0"};
  double worst = kInf;
  double worst_s = sample.front();
  for (double s : sample) {
    const double v = f.value(s);
    if (v < 0.0) return {VerdictStatus::fails, s, v, "f negative"};
    const double d = f.derivative(s);
    if (!std::isfinite(d)) break;
    const double slack = d - prev;
    const double tol = 1e-12 * (std::abs(d) + std::abs(prev));
    if (slack < -tol) return {VerdictStatus::fails, s, slack, "f' decreases"};
    if (slack < worst) {
      worst = slack;
      worst_s = s;
    }
    prev = d;
  }
  return {VerdictStatus::holds, worst_s, worst, "f' nondecreasing on sample"};
}

Verdict check_f1(const Nonlinearity& f, std::span<const double> sample) {
  double prev = -kInf;
  double worst = kInf;
  double worst_s = sample.front();
  for (double s : sample) {
    const double g = f.value(s) / s;
    if (!std::isfinite(g)) break;
    if (std::isfinite(prev)) {
      const double slack = g - prev;
      if (slack < -1e-12 * std::abs(g)) return {VerdictStatus::fails, s, slack, "f(s)/s decreases"};
      if (slack < worst) {
        worst = slack;
        worst_s = s;
      }
    }
    prev = g;
  }
  return {VerdictStatus::holds, worst_s, worst, "f(s)/s nondecreasing on sample"};
}

}  // namespace

HypothesisReport check_f1_f4(const Nonlinearity& f, std::span<const double> sample,
                             double lambda_max) {
  if (sample.empty()) throw PreconditionError("check_f1_f4: empty sample");
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (!(sample[i] > 0.0) || (i > 0 && !(sample[i] > sample[i - 1]))) {
      throw PreconditionError("check_f1_f4: sample must be positive and strictly increasing");
    }
  }
  if (!(lambda_max >= 10.0)) throw PreconditionError("check_f1_f4: lambda_max must be >= 10");

  HypothesisReport rep;
  const double p = f.growth_exponent();

  rep.f10_convex = check_convex(f, sample);
  const OsgoodResult osg = check_osgood(f, 1.0);
  rep.f10_osgood = osg.verdict;
  rep.osgood_integral = osg.integral;
  rep.f1_monotone = check_f1(f, sample);

  // (f2) on the compact window [1/2, 2], relative deviation, λ ladder.
  std::vector<double> window;
  for (double s : sample) {
    if (s >= 0.5 && s <= 2.0) window.push_back(s);
  }
  if (window.size() < 3) window = numerics::lin_space(0.5, 2.0, 31);
  if (!std::isfinite(p) || p <= 0.0) {
    rep.f2_scaling_limit = {VerdictStatus::fails, 10.0, kInf, "no finite power limit"};
  } else {
    std::vector<double> ladder{10.0, 1e2, 1e3};
    ladder.erase(std::remove_if(ladder.begin(), ladder.end(), [&](double l) { return l >= lambda_max; }),
                 ladder.end());
    ladder.push_back(lambda_max);
    bool overflow = false;
    for (double lam : ladder) {
      const double base = f.value(lam);
      double dev = 0.0;
      for (double s : window) {
        const double ratio = f.value(lam * s) / base;
        if (!std::isfinite(ratio)) {
          overflow = true;
          break;
        }
        dev = std::max(dev, std::abs(ratio / std::pow(s, p) - 1.0));
      }
      if (overflow) break;
      rep.f2_ladder.push_back({lam, dev});
      if (dev >= kF2Tolerance) rep.f2_transient_lambda = lam;
    }
    if (overflow || rep.f2_ladder.size() != ladder.size()) {
      rep.f2_scaling_limit = {VerdictStatus::inconclusive, lambda_max, kInf, "overflow on λ ladder"};
    } else {
      const double last = rep.f2_ladder.back().deviation;
      bool monotone = true;
      double worst_lam = ladder.front();
      for (std::size_t i = 1; i < rep.f2_ladder.size(); ++i) {
        if (rep.f2_ladder[i].deviation > rep.f2_ladder[i - 1].deviation * (1 + 1e-9) + 1e-15) {
          monotone = false;
          worst_lam = rep.f2_ladder[i].lambda;
        }
      }
      if (last < kF2Tolerance && monotone) {
        rep.f2_scaling_limit = {VerdictStatus::holds, lambda_max, kF2Tolerance - last,
                                "deviation below tolerance and nonincreasing in λ"};
      } else if (!monotone) {
        rep.f2_scaling_limit = {VerdictStatus::fails, worst_lam, -1.0, "deviation not decreasing in λ"};
      } else {
        rep.f2_scaling_limit = {VerdictStatus::fails, lambda_max, kF2Tolerance - last,
                                "deviation above tolerance at λ_max"};
      }
    }
  }

  // (f3): declared constants, else fit the smallest c_eta on this sample.
  if (f.declared_ar()) {
    rep.ar = *f.declared_ar();
  } else {
    rep.ar = ArConstants{f.ar_constants().eta, 0.0};
    for (double s : sample) {
      const double fs = f.value(s) * s;
      const double F = f.antiderivative(s);
      if (!std::isfinite(fs) || !std::isfinite(F)) break;
      const double deficit = (2.0 + rep.ar.eta) * F - fs;
      if (deficit > 1e-12 * fs) rep.ar.c_eta = std::max(rep.ar.c_eta, deficit);
    }
  }
  if (f.is_zero() || !(rep.ar.eta > 0.0)) {
    rep.f3_ar = {VerdictStatus::fails, sample.front(), 0.0, "no eta > 0"};
  } else {
    Verdict v{VerdictStatus::holds, sample.front(), kInf, "f3 holds on sample"};
    for (double s : sample) {
      const double fs = f.value(s) * s;
      const double F = f.antiderivative(s);
      if (!std::isfinite(fs) || !std::isfinite(F)) break;
      const double slack = fs - (2.0 + rep.ar.eta) * F + rep.ar.c_eta;
      if (slack < -1e-10 * std::max(1.0, fs)) {
        v = {VerdictStatus::fails, s, slack, "f3 violated"};
        break;
      }
      if (slack < v.margin) {
        v.margin = slack;
        v.witness = s;
      }
    }
    rep.f3_ar = v;
  }

  // (f4)
  if (!std::isfinite(p) || p <= 0.0) {
    rep.f4_growth = {VerdictStatus::fails, sample.back(), kInf, "no finite growth exponent"};
  } else {
    if (f.declared_growth()) {
      rep.growth = *f.declared_growth();
    } else {
      double c_f = 0.0;
      std::vector<double> ratios;
      for (double s : sample) {
        if (s >= 1.0) {
          const double r = f.value(s) / std::pow(s, p);
          ratios.push_back(r);
          c_f = std::max(c_f, r);
        }
      }
      if (c_f == 0.0) c_f = 1.0;
      double c_tilde = 0.0;
      for (double s : sample) {
        c_tilde = std::max(c_tilde, f.value(s) - c_f * std::pow(s, p));
      }
      rep.growth = {c_f, c_tilde};
      // Ratio still rising over the top of the sample: no bound can be claimed.
      const std::size_t tail = ratios.size() / 10 + 2;
      if (ratios.size() >= 4) {
        bool rising = true;
        for (std::size_t i = ratios.size() - tail; i + 1 < ratios.size(); ++i) {
          if (!(ratios[i + 1] > ratios[i] * (1 + 1e-9))) rising = false;
        }
        if (rising) {
          rep.f4_growth = {VerdictStatus::fails, sample.back(), ratios.back() - ratios[ratios.size() - 2],
                           "f(s)/s^p still increasing at the end of the sample"};
        }
      }
    }
    if (rep.f4_growth.note.empty()) {
      Verdict v{VerdictStatus::holds, sample.front(), kInf, "f4 holds on sample"};
      for (double s : sample) {
        const double bound = rep.growth.c_f * std::pow(s, p) + rep.growth.c_f_tilde;
        const double slack = bound - f.value(s);
        if (slack < -1e-12 * bound) {
          v = {VerdictStatus::fails, s, slack, "f4 violated"};
          break;
        }
        if (slack < v.margin) {
          v.margin = slack;
          v.witness = s;
        }
      }
      rep.f4_growth = v;
    }
  }

  // (fMM): c_f = min over λ, s >= 1 of f(λs) / (f(λ) s^{(p+1)/2}).
  if (!std::isfinite(p) || p <= 0.0 || f.is_zero()) {
    rep.fmm_lower = {VerdictStatus::inconclusive, 1.0, 0.0, "no finite growth exponent"};
  } else {
    std::vector<double> lambdas{1.0, 10.0, 1e2, 1e3};
    lambdas.erase(std::remove_if(lambdas.begin(), lambdas.end(), [&](double l) { return l >= lambda_max; }),
                  lambdas.end());
    lambdas.push_back(lambda_max);
    double c = kInf;
    double wit = 1.0;
    bool any = false;
    for (double lam : lambdas) {
      const double base = f.value(lam);
      for (double s : sample) {
        if (s < 1.0) continue;
        const double r = f.value(lam * s) / (base * std::pow(s, 0.5 * (p + 1.0)));
        if (!std::isfinite(r)) continue;
        any = true;
        if (r < c) {
          c = r;
          wit = s;
        }
      }
    }
    rep.c_fmm = any ? c : 0.0;
    if (!any) {
      rep.fmm_lower = {VerdictStatus::inconclusive, 1.0, 0.0, "no sample point >= 1"};
    } else if (c > 0.0) {
      rep.fmm_lower = {VerdictStatus::holds, wit, c, "derived c_f > 0"};
    } else {
      rep.fmm_lower = {VerdictStatus::fails, wit, c, "derived c_f vanishes"};
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Logarithmic example constants

double log_g(double u) {
  if (!(u > 0.0)) throw DomainError("g(u) needs u > 0");
  const double w = 2.0 + u * u;
  return std::log(w) * w / (2.0 * u * u);
}

LogConstants log_constants(double p) {
  if (!(p > 1.0)) throw DomainError("log_constants needs p > 1");
  auto eq = [](double u) { return 2.0 * std::log(2.0 + u * u) - u * u; };
  LogConstants out;
  out.u_ell = numerics::bracketed_root(eq, 1.0, 3.0, 1e-16);
  out.residual = std::abs(eq(out.u_ell));
  out.c_ell = 0.25 * (2.0 + out.u_ell * out.u_ell);
  out.a_ell = -(p - 1.0) * out.c_ell;
  return out;
}

double h_a(double p, double a, double u) {
  if (!(u > 0.0)) throw DomainError("h_a needs u > 0");
  const double g = log_g(u);
  const double w = 2.0 + u * u;
  const double k = a / (p - 1.0);
  return p * g * g + k * g * (4.0 * p + 2.0 + (2.0 * p - 1.0) * u * u) / w + k * (a - 1.0);
}

}  // namespace heatlab
