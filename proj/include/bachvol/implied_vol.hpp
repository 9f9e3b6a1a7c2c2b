#pragma once

// Implied normal volatility from call prices: exact root finding, inversion of
// the incomplete gamma representation, the small-lambda asymptotic expansion
// and the at-the-money closed form.

#include <string_view>

#include "bachvol/types.hpp"

namespace bachvol {

/// Coordinates the expansions are written in. At the money both gamma fields
/// are +infinity and the closed-form path has to be used.
struct MoneynessCoords {
  double x_n = 0.0;       ///< K/S - 1
  double x_ln = 0.0;      ///< ln(K/S)
  double gamma_n = 0.0;   ///< ln(4 sqrt(pi) / |x_n|)
  double gamma_ln = 0.0;  ///< ln(4 sqrt(pi) e^{-x_ln/2} / |x_ln|)
  double m = 1.0;         ///< K/S

  bool at_the_money() const noexcept { return x_n == 0.0; }
};

MoneynessCoords coords_from_terms(const OptionTerms& terms);

/// A call quoted by its time value TV = C - (S - K)_+, stored as ln(TV / S)
/// so quotes far below the smallest double remain usable.
///
/// Every quote satisfies 0 < TV < min(S, K), i.e. (S - K)_+ < C < S, which
/// also guarantees lambda = -1 / ln(TV / S) > 0.
class TimeValueQuote {
 public:
  static TimeValueQuote from_price(const OptionTerms& terms, double price);
  static TimeValueQuote from_time_value(const OptionTerms& terms, double time_value);
  static TimeValueQuote from_log_ratio(const OptionTerms& terms, double log_ratio);

  const OptionTerms& terms() const noexcept { return terms_; }
  /// ln(TV / S)
  double log_ratio() const noexcept { return log_ratio_; }
  /// May underflow to zero for extreme quotes; log_ratio() does not.
  double time_value() const;
  double price() const;
  double lambda() const noexcept { return -1.0 / log_ratio_; }

 private:
  TimeValueQuote(const OptionTerms& terms, double log_ratio)
      : terms_(terms), log_ratio_(log_ratio) {}

  OptionTerms terms_;
  double log_ratio_;
};

/// Largest lambda accepted by the asymptotic route unless overridden. The
/// expansion error grows with gamma_N as well as lambda; at 0.05 it stays
/// below about 4% for |K/S - 1| >= 0.025 and 7% for |K/S - 1| >= 0.005.
inline constexpr double kDefaultLambdaMax = 0.05;
/// Quotes with |K/S - 1| below this use the at-the-money closed form.
inline constexpr double kAtmDispatchThreshold = 1e-10;

/// The unique sigma_N reproducing the quote, by safeguarded Newton iteration
/// on ln TV(sigma) in ln sigma. Relative accuracy is better than 1e-12.
NormalVol implied_normal_exact(const TimeValueQuote& quote);
NormalVol implied_normal_exact(const OptionTerms& terms, double price);

/// Solves Gamma(-1/2, z) = 4 sqrt(pi) TV / |S - K| for z, then
/// sigma_N = |S - K| / sqrt(2 z T). Undefined at the money.
NormalVol implied_normal_via_gamma_inverse(const TimeValueQuote& quote);
NormalVol implied_normal_via_gamma_inverse(const OptionTerms& terms, double time_value);

/// u_N = lambda - 3/2 lambda^2 ln(lambda) + gamma lambda^2 + 9/4 lambda^3 ln^2(lambda)
///       + (9/4 - 3 gamma) lambda^3 ln(lambda) + (gamma^2 - 3/2 gamma + 3/2) lambda^3.
/// Requires 0 < lambda < 1.
double u_n_expansion(double lambda, double gamma_n);

/// Lognormal counterpart of u_n_expansion; the constant of the lambda^3 term
/// is gamma^2 - 3/2 gamma - alpha with alpha = -x_ln^2 / 16 - 3/2.
double u_ln_expansion(double lambda, double gamma_ln, double x_ln);

/// sigma_N = |S - K| sqrt(u_N / 2) / sqrt(T) with u_N from u_n_expansion.
/// Throws Error(asymptotic_domain) when lambda >= lambda_max.
NormalVol implied_normal_asymptotic(const TimeValueQuote& quote,
                                    double lambda_max = kDefaultLambdaMax);
NormalVol implied_normal_asymptotic(const OptionTerms& terms, double time_value,
                                    double lambda_max = kDefaultLambdaMax);

/// sigma_N = sqrt(2 pi / T) C, exact when S = K.
NormalVol implied_normal_atm(const OptionTerms& terms, double price);

/// Black-Scholes volatility reproducing the quote, by the same safeguarded
/// iteration as implied_normal_exact.
LognormalVol implied_lognormal_exact(const TimeValueQuote& quote);
LognormalVol implied_lognormal_exact(const OptionTerms& terms, double price);

/// sigma_LN = |ln(K/S)| sqrt(u_LN / 2) / sqrt(T) with u_LN from u_ln_expansion.
LognormalVol implied_lognormal_asymptotic(const TimeValueQuote& quote,
                                          double lambda_max = kDefaultLambdaMax);

enum class ImpliedMethod { exact, gamma, asymptotic, automatic };

struct ImpliedResult {
  NormalVol vol;
  /// "exact", "exact-atm", "gamma" or "asymptotic".
  std::string_view method;
  double lambda;
};

/// Dispatches a quote to one of the routes above. Quotes within the at-the-money
/// threshold use the closed form under `exact` and `automatic`; `automatic`
/// picks the expansion when lambda < lambda_max and exact inversion otherwise.
ImpliedResult implied_normal(const TimeValueQuote& quote, ImpliedMethod method,
                             double lambda_max = kDefaultLambdaMax);

}  // namespace bachvol
