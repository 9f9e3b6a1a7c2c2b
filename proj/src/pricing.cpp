#include "bachvol/pricing.hpp"

#include <cmath>

#include "bachvol/error.hpp"
#include "bachvol/special_fn.hpp"

namespace bachvol {
namespace {

constexpr double kSqrtPi = 1.7724538509055160272981674833411;
constexpr double kSqrt2Pi = 2.5066282746310005024157652848110;
constexpr double kInvSqrt8 = 0.35355339059327376220042218105242;
constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;

// Time values below this fraction of spot are taken through the Mills-ratio
// form when a logarithm is requested.
constexpr double kDirectLogFloor = 1e-250;

struct NormalGeometry {
  double moneyness_gap;  // S - K
  double variance;       // sigma^2 T
  double stdev;          // sigma sqrt(T)
  double distance;       // |S - K| / (sigma sqrt(T))
};

NormalGeometry normal_geometry(const OptionTerms& terms, NormalVol vol) {
  const double gap = terms.spot() - terms.strike();
  const double variance = vol.value() * vol.value() * terms.maturity();
  const double stdev = vol.value() * std::sqrt(terms.maturity());
  return {gap, variance, stdev, std::abs(gap) / stdev};
}

// Argument of the incomplete gamma function, (S - K)^2 / (2 sigma^2 T). The
// closed and series forms share this expression so their exponentials agree
// bit for bit.
double gamma_argument(const NormalGeometry& g) {
  return (g.moneyness_gap * g.moneyness_gap) / (2.0 * g.variance);
}

void require_order(int p) {
  if (p < 1 || p > special::max_series_order) {
    detail::fail(ErrorKind::parameter, "series order must be in [1, 12]");
  }
}

double log_moneyness(const OptionTerms& terms) {
  return std::log1p((terms.strike() - terms.spot()) / terms.spot());
}

struct LognormalGeometry {
  double x_ln;   // ln(K / S)
  double stdev;  // sigma sqrt(T)
  double d1;
  double d2;
};

LognormalGeometry lognormal_geometry(const OptionTerms& terms, LognormalVol vol) {
  const double x = log_moneyness(terms);
  const double stdev = vol.value() * std::sqrt(terms.maturity());
  const double d1 = -x / stdev + 0.5 * stdev;
  return {x, stdev, d1, d1 - stdev};
}

}  // namespace

double bachelier_call(const OptionTerms& terms, NormalVol vol) {
  const NormalGeometry g = normal_geometry(terms, vol);
  const double d = g.moneyness_gap / g.stdev;
  if (d >= 0.0) {
    return g.moneyness_gap * special::gauss_cdf(d) + g.stdev * special::gauss_pdf(d);
  }
  // Out of the money the two terms of the formula nearly cancel; this is the
  // same expression grouped as sigma sqrt(T) (n(d) + d N(d)).
  return g.stdev * special::normal_loss(-d);
}

double bachelier_time_value(const OptionTerms& terms, NormalVol vol) {
  const NormalGeometry g = normal_geometry(terms, vol);
  return g.stdev * special::normal_loss(g.distance);
}

double bachelier_log_time_value(const OptionTerms& terms, NormalVol vol) {
  const NormalGeometry g = normal_geometry(terms, vol);
  return std::log(g.stdev / terms.spot()) + special::log_normal_loss(g.distance);
}

double bachelier_tv_gamma(const OptionTerms& terms, NormalVol vol) {
  const NormalGeometry g = normal_geometry(terms, vol);
  if (g.distance < kGammaAtmThreshold) return g.stdev / kSqrt2Pi;
  const double z = gamma_argument(g);
  return std::abs(g.moneyness_gap) / (4.0 * kSqrtPi) * special::upper_gamma_neg_half(z);
}

SeriesResult bachelier_tv_series(const OptionTerms& terms, NormalVol vol, int p) {
  require_order(p);
  if (terms.at_the_money()) {
    detail::fail(ErrorKind::degenerate_input, "time-value series is undefined at the money");
  }
  const NormalGeometry g = normal_geometry(terms, vol);
  const double gap_sq = g.moneyness_gap * g.moneyness_gap;
  const double z = gamma_argument(g);
  const double prefactor = g.variance * std::sqrt(g.variance) / (kSqrt2Pi * gap_sq) * std::exp(-z);
  const SeriesResult scaled = special::scaled_gamma_series(g.variance / gap_sq, p);
  return {prefactor * scaled.value, p, prefactor * scaled.remainder, RemainderKind::bound};
}

SeriesResult normalized_tv_normal(const OptionTerms& terms, NormalVol vol, int p) {
  require_order(p);
  if (terms.at_the_money()) {
    detail::fail(ErrorKind::degenerate_input, "normalized time value is undefined at the money");
  }
  const NormalGeometry g = normal_geometry(terms, vol);
  const double gap_sq = g.moneyness_gap * g.moneyness_gap;
  const double u = 2.0 * g.variance / gap_sq;
  // a_k / 2^k u^k = (2k+1)!! (u/2)^k, so this is the gamma series in w = u/2.
  const SeriesResult scaled = special::scaled_gamma_series(0.5 * u, p);
  const double leading = u * std::sqrt(u) * std::exp(-gamma_argument(g));
  return {leading * scaled.value, p, leading * scaled.remainder, RemainderKind::bound};
}

namespace {

// Tail arguments of the Mills-ratio form of the time value. With K n(d2) = S n(d1),
//   TV / S = n(d1) (R(a) - R(b)),  a < b,
// where (a, b) = (-d1, -d2) out of the money and (d2, d1) in the money.
struct TailArguments {
  double a;
  double b;
};

TailArguments tail_arguments(const OptionTerms& terms, const LognormalGeometry& g) {
  if (terms.strike() > terms.spot()) return {-g.d1, -g.d2};
  return {g.d2, g.d1};
}

// ln(TV / S) from the Mills-ratio form. The difference of Mills ratios loses
// about ln(a / (b - a)) digits, far fewer than S N(d1) - K N(d2) once a > 1.
double tail_log_ratio(const LognormalGeometry& g, TailArguments t) {
  const double spread = special::mills_ratio(t.a) - special::mills_ratio(t.b);
  if (!(spread > 0.0)) {
    detail::fail(ErrorKind::numerical, "Black-Scholes time value lost all precision");
  }
  return -0.5 * g.d1 * g.d1 - kLogSqrt2Pi + std::log(spread);
}

constexpr double kTailSwitch = 1.0;

}  // namespace

double black_scholes_time_value(const OptionTerms& terms, LognormalVol vol) {
  const LognormalGeometry g = lognormal_geometry(terms, vol);
  const double s = terms.spot();
  const double k = terms.strike();
  if (terms.at_the_money()) return s * special::erf(g.stdev * kInvSqrt8);
  const TailArguments t = tail_arguments(terms, g);
  if (t.a > kTailSwitch) return s * std::exp(tail_log_ratio(g, t));
  if (k > s) return s * special::gauss_cdf(g.d1) - k * special::gauss_cdf(g.d2);
  return k * special::gauss_cdf(-g.d2) - s * special::gauss_cdf(-g.d1);
}

double black_scholes_call(const OptionTerms& terms, LognormalVol vol) {
  return terms.intrinsic() + black_scholes_time_value(terms, vol);
}

double black_scholes_log_time_value(const OptionTerms& terms, LognormalVol vol) {
  const LognormalGeometry g = lognormal_geometry(terms, vol);
  if (!terms.at_the_money()) {
    const TailArguments t = tail_arguments(terms, g);
    if (t.a > kTailSwitch) return tail_log_ratio(g, t);
  }
  const double tv = black_scholes_time_value(terms, vol);
  if (tv > kDirectLogFloor * terms.spot()) return std::log(tv / terms.spot());
  // Only reachable at very small sigma sqrt(T) near the money.
  if (terms.at_the_money()) return std::log(special::erf(g.stdev * kInvSqrt8));
  return tail_log_ratio(g, tail_arguments(terms, g));
}

double lognormal_series_coefficient(int k, double x_ln) {
  if (k < 0 || k > special::max_series_order) {
    detail::fail(ErrorKind::parameter, "series coefficient index must be in [0, 12]");
  }
  const double q = x_ln * x_ln / 8.0;
  double sum = 0.0;
  double power = 1.0;
  double factorial = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) {
      power *= q;
      factorial *= j;
    }
    sum += power / (factorial * static_cast<double>(special::odd_double_factorial(j)));
  }
  return static_cast<double>(special::odd_double_factorial(k)) * sum;
}

SeriesResult normalized_tv_lognormal(const OptionTerms& terms, LognormalVol vol, int p) {
  require_order(p);
  if (terms.at_the_money()) {
    detail::fail(ErrorKind::degenerate_input, "normalized time value is undefined at the money");
  }
  const LognormalGeometry g = lognormal_geometry(terms, vol);
  const double u = 2.0 * g.stdev * g.stdev / (g.x_ln * g.x_ln);
  double sum = 0.0;
  double power = 1.0;  // (u/2)^k
  for (int k = 0; k < p; ++k) {
    const double term = lognormal_series_coefficient(k, g.x_ln) * power;
    sum += (k % 2 == 0) ? term : -term;
    power *= 0.5 * u;
  }
  const double omitted = lognormal_series_coefficient(p, g.x_ln) * power;
  const double leading = u * std::sqrt(u) * std::exp(-1.0 / u);
  return {leading * sum, p, leading * omitted, RemainderKind::estimate};
}

}  // namespace bachvol
