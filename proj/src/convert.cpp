#include "bachvol/convert.hpp"

#include <cmath>

#include "bachvol/error.hpp"
#include "bachvol/implied_vol.hpp"
#include "bachvol/pricing.hpp"

namespace bachvol {
namespace {

// Below this |ln(K/S)| the correction coefficient is taken from its Taylor
// expansion 1/24 - x^2/2880 + x^4/181440.
constexpr double kCorrectionSeriesCut = 1e-4;

double relative_strike(const OptionTerms& terms) {
  return (terms.strike() - terms.spot()) / terms.spot();
}

// ln(sinh(y) / y), accurate for every finite y.
double log_sinhc(double y) {
  const double a = std::abs(y);
  if (a >= 1.0) return a + std::log1p(-std::exp(-2.0 * a)) - std::log(2.0 * a);
  // sinh(y)/y - 1 = sum_{k>=1} y^{2k} / (2k+1)!
  const double y2 = a * a;
  double term = 1.0;
  double excess = 0.0;
  for (int k = 1; k < 20; ++k) {
    term *= y2 / ((2.0 * k) * (2.0 * k + 1.0));
    excess += term;
    if (term < 1e-17 * excess) break;
  }
  return std::log1p(excess);
}

}  // namespace

double level_factor(const OptionTerms& terms) {
  const double x = relative_strike(terms);
  if (x == 0.0) return terms.spot();
  return terms.spot() * x / std::log1p(x);
}

double correction_coefficient(const OptionTerms& terms) {
  const double x = std::log1p(relative_strike(terms));
  const double x2 = x * x;
  if (std::abs(x) < kCorrectionSeriesCut) return 1.0 / 24.0 - x2 / 2880.0 + x2 * x2 / 181440.0;
  // f / sqrt(K S) = sinh(x/2) / (x/2)
  return log_sinhc(0.5 * x) / x2;
}

NormalVol normal_from_lognormal_order0(const OptionTerms& terms, LognormalVol vol) {
  return NormalVol(level_factor(terms) * vol.value());
}

NormalVol normal_from_lognormal_order1(const OptionTerms& terms, LognormalVol vol) {
  const double s = vol.value();
  const double bracket = 1.0 - correction_coefficient(terms) * s * s * terms.maturity();
  if (!(bracket > 0.0)) {
    detail::fail(ErrorKind::asymptotic_domain,
                 "order-1 conversion is not positive; sigma_LN^2 T is too large");
  }
  return NormalVol(level_factor(terms) * s * bracket);
}

LognormalVol lognormal_from_normal_order0(const OptionTerms& terms, NormalVol vol) {
  return LognormalVol(vol.value() / level_factor(terms));
}

LognormalVol lognormal_from_normal_order1(const OptionTerms& terms, NormalVol vol) {
  const double s0 = vol.value() / level_factor(terms);
  return LognormalVol(s0 * (1.0 + correction_coefficient(terms) * s0 * s0 * terms.maturity()));
}

LognormalVol exact_lognormal_from_normal(const OptionTerms& terms, NormalVol vol) {
  const double log_ratio = bachelier_log_time_value(terms, vol);
  return implied_lognormal_exact(TimeValueQuote::from_log_ratio(terms, log_ratio));
}

NormalVol exact_normal_from_lognormal(const OptionTerms& terms, LognormalVol vol) {
  const double log_ratio = black_scholes_log_time_value(terms, vol);
  return implied_normal_exact(TimeValueQuote::from_log_ratio(terms, log_ratio));
}

double atm_skew_lognormal_from_bachelier(double spot, NormalVol vol) {
  if (!std::isfinite(spot) || !(spot > 0.0)) {
    detail::fail(ErrorKind::domain, "spot must be finite and > 0");
  }
  return -0.5 * vol.value() / spot;
}

double smile_shape(double m) {
  if (!std::isfinite(m) || !(m > 0.0)) detail::fail(ErrorKind::domain, "m must be finite and > 0");
  if (m == 1.0) return 1.0;
  return std::log(m) / (m - 1.0);
}

}  // namespace bachvol
