#pragma once

// Conversion between normal and lognormal implied volatilities: the short
// maturity formulas at order 0 and 1 in T, and exact conversion by matching
// prices.

#include "bachvol/types.hpp"

namespace bachvol {

/// (S - K) / (ln S - ln K), continuous at K = S where it equals S.
double level_factor(const OptionTerms& terms);

/// ln(f / sqrt(K S)) / (ln S - ln K)^2 with f = level_factor(terms). Tends to
/// 1/24 at the money.
double correction_coefficient(const OptionTerms& terms);

/// sigma_N = f sigma_LN. Valid as T -> 0.
NormalVol normal_from_lognormal_order0(const OptionTerms& terms, LognormalVol vol);

/// sigma_N = f sigma_LN (1 - c sigma_LN^2 T) with c = correction_coefficient;
/// at the money S sigma_LN (1 - sigma_LN^2 T / 24). The error is O(T^2 ln T).
/// Throws Error(asymptotic_domain) when the bracket is not positive.
NormalVol normal_from_lognormal_order1(const OptionTerms& terms, LognormalVol vol);

/// sigma_LN = sigma_N / f = (ln m / (m - 1)) sigma_N / S with m = K / S.
/// Exact inverse of normal_from_lognormal_order0.
LognormalVol lognormal_from_normal_order0(const OptionTerms& terms, NormalVol vol);

/// sigma_LN = s0 (1 + c s0^2 T) with s0 = sigma_N / f: the order-1 formula
/// above solved for sigma_LN to first order in T.
LognormalVol lognormal_from_normal_order1(const OptionTerms& terms, NormalVol vol);

/// Lognormal volatility giving the same call price as `vol` under Bachelier.
/// Prices are matched on ln(TV / S), so quotes whose time value underflows a
/// double still convert.
LognormalVol exact_lognormal_from_normal(const OptionTerms& terms, NormalVol vol);

/// Normal volatility giving the same call price as `vol` under Black-Scholes.
NormalVol exact_normal_from_lognormal(const OptionTerms& terms, LognormalVol vol);

/// d sigma_LN / dm at m = 1 for the smile of a flat Bachelier model:
/// -sigma_N / (2 S).
double atm_skew_lognormal_from_bachelier(double spot, NormalVol vol);

/// ln(m) / (m - 1), extended by 1 at m = 1. Positive, decreasing and convex.
/// Throws Error(domain) unless m is finite and > 0.
double smile_shape(double m);

}  // namespace bachvol
