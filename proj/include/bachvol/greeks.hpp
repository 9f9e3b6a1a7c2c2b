#pragma once

// Greeks of a call in the Bachelier and Black-Scholes models and the
// breakeven move of a delta-hedged position.
//
// Theta is dC/dT, the decay a long call suffers per year of elapsed time,
// reported as a positive number.

#include "bachvol/convert.hpp"
#include "bachvol/types.hpp"

namespace bachvol {

struct GreeksReport {
  double delta = 0.0;      ///< dC/dS
  double gamma = 0.0;      ///< d2C/dS2
  double vega = 0.0;       ///< dC/dsigma in the model's own volatility unit
  double theta = 0.0;      ///< dC/dT
  double breakeven = 0.0;  ///< mu = sqrt(2 theta dt / gamma)
};

/// Standardized distances beyond this flush gamma, vega and theta to 0 and
/// delta to 0 or 1.
inline constexpr double kGreeksFlushDistance = 38.0;

/// Delta N(d), gamma n(d) / (sigma sqrt T), vega sqrt(T) n(d) and theta
/// sigma n(d) / (2 sqrt T) with d = (S - K) / (sigma sqrt T). The breakeven
/// move over `dt` is sigma sqrt(dt).
GreeksReport bachelier_greeks(const OptionTerms& terms, NormalVol vol, double dt = 1.0);

/// Delta N(d1), gamma n(d1) / (S sigma sqrt T), vega S sqrt(T) n(d1) and theta
/// S sigma n(d1) / (2 sqrt T). The breakeven move over `dt` is S sigma sqrt(dt).
GreeksReport black_scholes_greeks(const OptionTerms& terms, LognormalVol vol, double dt = 1.0);

/// mu such that -theta dt + gamma dS^2 / 2 = gamma (dS^2 - mu^2) / 2.
/// Throws Error(domain) unless gamma, theta and dt are finite and > 0.
double breakeven_move(const GreeksReport& report, double dt);

/// mu_LN / mu_N = ln(m) / (m - 1); the same function as smile_shape.
inline constexpr double (*breakeven_ratio)(double) = &smile_shape;

/// Normal-to-lognormal greek ratios.
struct GreekRatios {
  double delta = 1.0;
  double vega = 1.0;
  double gamma = 1.0;
  double theta = 1.0;
};

/// Short-maturity limits of the ratios claimed for bounded volatilities:
/// delta and vega 1, gamma S (ln S - ln K) / (S - K), theta its reciprocal.
/// Throws Error(degenerate_input) at the money.
GreekRatios greek_ratio_limits(const OptionTerms& terms);

/// Ratios of bachelier_greeks(terms, normal) to black_scholes_greeks(terms,
/// lognormal). Densities are divided in log space, so the ratios stay finite
/// when both greeks underflow.
GreekRatios measured_greek_ratios(const OptionTerms& terms, NormalVol normal,
                                  LognormalVol lognormal);

}  // namespace bachvol
