#pragma once

// European call prices under the Bachelier (normal) and Black-Scholes
// (lognormal) models with zero rates, plus the time value in its closed,
// incomplete-gamma and truncated-series forms.

#include "bachvol/types.hpp"

namespace bachvol {

/// Below this standardized distance |S - K| / (sigma sqrt(T)) the
/// incomplete-gamma representation switches to its at-the-money limit.
inline constexpr double kGammaAtmThreshold = 1e-8;

/// C = (S - K) N(d) + sigma sqrt(T) n(d),  d = (S - K) / (sigma sqrt(T)).
double bachelier_call(const OptionTerms& terms, NormalVol vol);

/// C - (S - K)_+, evaluated without cancellation.
double bachelier_time_value(const OptionTerms& terms, NormalVol vol);

/// ln(TV / S). Stays finite when the time value itself underflows.
double bachelier_log_time_value(const OptionTerms& terms, NormalVol vol);

/// Time value through the incomplete gamma function:
///   |S - K| / (4 sqrt(pi)) * Gamma(-1/2, (S - K)^2 / (2 sigma^2 T))   for K != S,
///   sigma sqrt(T) / sqrt(2 pi)                                         at the money.
double bachelier_tv_gamma(const OptionTerms& terms, NormalVol vol);

/// Time value from the first p terms of its large-distance expansion in
/// w = sigma^2 T / (S - K)^2:
///
///   TV = (sigma^2 T)^{3/2} exp(-(S-K)^2 / (2 sigma^2 T)) / (sqrt(2 pi) (S-K)^2)
///        * (sum_{k<p} (-1)^k (2k+1)!! w^k + R_p),   |R_p| <= (2p+1)!! w^p.
///
/// The returned remainder is the bound scaled by the same prefactor.
/// Throws Error(degenerate_input) at the money and Error(parameter) unless
/// 1 <= p <= 12.
SeriesResult bachelier_tv_series(const OptionTerms& terms, NormalVol vol, int p);

/// (4 sqrt(pi) / |x_N|) TV / S as u^{3/2} e^{-1/u} sum_{k<p} (-1)^k a_k u^k / 2^k
/// with x_N = K/S - 1, u = 2 theta^2 / x_N^2, theta = sigma sqrt(T) / S and
/// a_k = (2k+1)!!. The remainder is a rigorous bound.
SeriesResult normalized_tv_normal(const OptionTerms& terms, NormalVol vol, int p);

/// C = S N(d1) - K N(d2),  d1 = ln(S/K) / (sigma sqrt(T)) + sigma sqrt(T) / 2,
/// d2 = d1 - sigma sqrt(T). At the money this is S erf(sigma sqrt(T) / (2 sqrt(2))).
double black_scholes_call(const OptionTerms& terms, LognormalVol vol);

/// C - (S - K)_+, computed from the out-of-the-money side.
double black_scholes_time_value(const OptionTerms& terms, LognormalVol vol);

/// ln(TV / S) for the Black-Scholes call; finite far beyond the point where
/// the time value underflows.
double black_scholes_log_time_value(const OptionTerms& terms, LognormalVol vol);

/// (4 sqrt(pi) e^{-x/2} / |x|) TV / S as u^{3/2} e^{-1/u} sum_{k<p} (-1)^k a_k u^k / 2^k
/// with x = ln(K/S), u = 2 sigma^2 T / x^2 and
///   a_k = (2k+1)!! sum_{j<=k} (x^2/8)^j / (j! (2j+1)!!).
/// Only the order of the remainder is known, so the first omitted term is
/// reported with RemainderKind::estimate.
SeriesResult normalized_tv_lognormal(const OptionTerms& terms, LognormalVol vol, int p);

/// Coefficient a_k of the lognormal expansion at log-moneyness x.
double lognormal_series_coefficient(int k, double x_ln);

}  // namespace bachvol
