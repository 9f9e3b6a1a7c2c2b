#include "bachvol/greeks.hpp"

#include <cmath>

#include "bachvol/error.hpp"
#include "bachvol/special_fn.hpp"

namespace bachvol {
namespace {

void require_horizon(double dt) {
  if (!std::isfinite(dt) || !(dt > 0.0)) detail::fail(ErrorKind::domain, "dt must be finite and > 0");
}

double bachelier_distance(const OptionTerms& terms, NormalVol vol) {
  return (terms.spot() - terms.strike()) / (vol.value() * std::sqrt(terms.maturity()));
}

double black_scholes_d1(const OptionTerms& terms, LognormalVol vol) {
  const double stdev = vol.value() * std::sqrt(terms.maturity());
  const double x = std::log1p((terms.strike() - terms.spot()) / terms.spot());
  return -x / stdev + 0.5 * stdev;
}

// N(d) / N(d_other) through logarithms; both may underflow separately.
double cdf_ratio(double d, double d_other) {
  return std::exp(special::log_gauss_cdf(d) - special::log_gauss_cdf(d_other));
}

}  // namespace

GreeksReport bachelier_greeks(const OptionTerms& terms, NormalVol vol, double dt) {
  require_horizon(dt);
  const double sigma = vol.value();
  const double sqrt_t = std::sqrt(terms.maturity());
  const double d = bachelier_distance(terms, vol);
  GreeksReport r;
  r.breakeven = sigma * std::sqrt(dt);
  if (std::abs(d) > kGreeksFlushDistance) {
    r.delta = d > 0.0 ? 1.0 : 0.0;
    return r;
  }
  const double density = special::gauss_pdf(d);
  r.delta = special::gauss_cdf(d);
  r.gamma = density / (sigma * sqrt_t);
  r.vega = sqrt_t * density;
  r.theta = sigma * density / (2.0 * sqrt_t);
  if (r.gamma > 0.0 && r.theta > 0.0) r.breakeven = breakeven_move(r, dt);
  return r;
}

GreeksReport black_scholes_greeks(const OptionTerms& terms, LognormalVol vol, double dt) {
  require_horizon(dt);
  const double s = terms.spot();
  const double sigma = vol.value();
  const double sqrt_t = std::sqrt(terms.maturity());
  const double d1 = black_scholes_d1(terms, vol);
  GreeksReport r;
  r.breakeven = s * sigma * std::sqrt(dt);
  if (std::abs(d1) > kGreeksFlushDistance) {
    r.delta = d1 > 0.0 ? 1.0 : 0.0;
    return r;
  }
  const double density = special::gauss_pdf(d1);
  r.delta = special::gauss_cdf(d1);
  r.gamma = density / (s * sigma * sqrt_t);
  r.vega = s * sqrt_t * density;
  r.theta = s * sigma * density / (2.0 * sqrt_t);
  if (r.gamma > 0.0 && r.theta > 0.0) r.breakeven = breakeven_move(r, dt);
  return r;
}

double breakeven_move(const GreeksReport& report, double dt) {
  require_horizon(dt);
  if (!std::isfinite(report.gamma) || !(report.gamma > 0.0)) {
    detail::fail(ErrorKind::domain, "gamma must be finite and > 0");
  }
  if (!std::isfinite(report.theta) || !(report.theta > 0.0)) {
    detail::fail(ErrorKind::domain, "theta must be finite and > 0");
  }
  return std::sqrt(2.0 * report.theta * dt / report.gamma);
}

GreekRatios greek_ratio_limits(const OptionTerms& terms) {
  if (terms.at_the_money()) {
    detail::fail(ErrorKind::degenerate_input, "greek ratio limits are all 1 at the money");
  }
  const double gamma_ratio = terms.spot() / level_factor(terms);
  return {1.0, 1.0, gamma_ratio, 1.0 / gamma_ratio};
}

GreekRatios measured_greek_ratios(const OptionTerms& terms, NormalVol normal,
                                  LognormalVol lognormal) {
  const double s = terms.spot();
  const double sn = normal.value();
  const double sl = lognormal.value();
  const double d = bachelier_distance(terms, normal);
  const double d1 = black_scholes_d1(terms, lognormal);
  // n(d) / n(d1)
  const double density_ratio = std::exp(0.5 * (d1 - d) * (d1 + d));

  GreekRatios r;
  r.delta = cdf_ratio(d, d1);
  r.vega = density_ratio / s;
  r.gamma = density_ratio * s * sl / sn;
  r.theta = density_ratio * sn / (s * sl);
  return r;
}

}  // namespace bachvol
