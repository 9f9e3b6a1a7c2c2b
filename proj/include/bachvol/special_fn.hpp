#pragma once

// Scalar special functions used by the pricing and inversion code.
//
// Every function rejects non-finite arguments with Error(domain). Results that
// underflow flush to +0 (or -inf for the log variants) without raising.

#include "bachvol/types.hpp"

namespace bachvol::special {

/// Standard normal density n(x).
double gauss_pdf(double x);

/// Standard normal distribution function N(x).
double gauss_cdf(double x);

/// ln N(x), accurate far into the lower tail where N(x) underflows.
double log_gauss_cdf(double x);

double erf(double x);
double erfc(double x);

/// Scaled complementary error function exp(x^2) erfc(x).
double erfcx(double x);

/// Mills ratio N(-x) / n(x).
double mills_ratio(double x);

/// Unit normal loss n(v) - v N(-v), the Bachelier time value per unit of
/// sigma * sqrt(T) at standardized distance v = |S - K| / (sigma sqrt(T)).
/// Requires v >= 0.
double normal_loss(double v);

/// ln normal_loss(v); finite for every finite v >= 0.
double log_normal_loss(double v);

/// Upper incomplete gamma function at a = -1/2:
///   Gamma(-1/2, z) = 2 (exp(-z) / sqrt(z) - sqrt(pi) erfc(sqrt(z))).
/// Requires z > 0. The bracket is evaluated in scaled form for large z so the
/// result keeps full relative precision until exp(-z) itself underflows.
double upper_gamma_neg_half(double z);

/// ln Gamma(-1/2, z) for z > 0, finite for all finite z.
double log_upper_gamma_neg_half(double z);

/// Largest series order accepted by the truncated gamma expansions.
inline constexpr int max_series_order = 12;

/// (2k+1)!! = 1 * 3 * ... * (2k+1) for 0 <= k <= max_series_order, as an
/// exact integer. Throws Error(parameter) outside that range.
long long odd_double_factorial(int k);

/// Truncated large-z expansion of Gamma(-1/2, z) z^{3/2} e^z in w = 1/(2z):
///
///   sum_{k<p} (-1)^k (2k+1)!! w^k,   |remainder| <= (2p+1)!! w^p.
///
/// The terms alternate and the remainder has the sign of the first omitted
/// term, so the bound is rigorous for every w > 0. Requires w > 0 and
/// 1 <= p <= max_series_order.
SeriesResult scaled_gamma_series(double w, int p);

}  // namespace bachvol::special
