#include "bachvol/implied_vol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bachvol/detail/root.hpp"
#include "bachvol/error.hpp"
#include "bachvol/pricing.hpp"
#include "bachvol/special_fn.hpp"

namespace bachvol {
namespace {

constexpr double kLog4SqrtPi = 1.9586593040445907059;   // ln(4 sqrt(pi))
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // ln(sqrt(2 pi))
constexpr double kSqrt2Pi = 2.5066282746310005024157652848110;

// Solutions are located in logarithmic coordinates; this is the absolute
// tolerance there, i.e. the relative tolerance on the volatility.
constexpr double kLogTolerance = 1e-14;
const double kBracketStep = std::log(4.0);

bool near_atm(const OptionTerms& terms) {
  return std::abs((terms.strike() - terms.spot()) / terms.spot()) < kAtmDispatchThreshold;
}

void require_lambda_max(double lambda_max) {
  if (!(lambda_max > 0.0 && lambda_max <= 1.0)) {
    detail::fail(ErrorKind::parameter, "lambda_max must lie in (0, 1]");
  }
}

void require_expansion_lambda(double lambda) {
  if (!std::isfinite(lambda) || lambda <= 0.0 || lambda >= 1.0) {
    detail::fail(ErrorKind::asymptotic_domain, "lambda expansion requires 0 < lambda < 1");
  }
}

// Shared skeleton of the lambda expansions; they differ only in the constant
// of the lambda^3 term.
double lambda_expansion(double lambda, double gamma, double cubic_constant) {
  const double log_lambda = std::log(lambda);
  const double l2 = lambda * lambda;
  const double l3 = l2 * lambda;
  return lambda - 1.5 * l2 * log_lambda + gamma * l2 + 2.25 * l3 * log_lambda * log_lambda +
         (2.25 - 3.0 * gamma) * l3 * log_lambda + cubic_constant * l3;
}

double atm_closed_form(const TimeValueQuote& quote) {
  const OptionTerms& terms = quote.terms();
  return std::exp(quote.log_ratio() + std::log(terms.spot()) +
                  0.5 * std::log(2.0 * std::numbers::pi / terms.maturity()));
}

}  // namespace

MoneynessCoords coords_from_terms(const OptionTerms& terms) {
  MoneynessCoords c;
  c.m = terms.moneyness();
  c.x_n = (terms.strike() - terms.spot()) / terms.spot();
  c.x_ln = std::log1p(c.x_n);
  if (c.x_n == 0.0) {
    c.gamma_n = c.gamma_ln = std::numeric_limits<double>::infinity();
  } else {
    c.gamma_n = kLog4SqrtPi - std::log(std::abs(c.x_n));
    c.gamma_ln = kLog4SqrtPi - 0.5 * c.x_ln - std::log(std::abs(c.x_ln));
  }
  return c;
}

TimeValueQuote TimeValueQuote::from_log_ratio(const OptionTerms& terms, double log_ratio) {
  if (std::isnan(log_ratio) || log_ratio == std::numeric_limits<double>::infinity()) {
    detail::fail(ErrorKind::arbitrage, "log time value must be finite");
  }
  if (log_ratio == -std::numeric_limits<double>::infinity()) {
    detail::fail(ErrorKind::arbitrage, "time value must be > 0");
  }
  const double cap = std::min(0.0, std::log(terms.moneyness()));
  if (!(log_ratio < cap)) {
    detail::fail(ErrorKind::arbitrage, "time value must be below min(S, K)");
  }
  return {terms, log_ratio};
}

TimeValueQuote TimeValueQuote::from_time_value(const OptionTerms& terms, double time_value) {
  if (!std::isfinite(time_value)) detail::fail(ErrorKind::arbitrage, "time value must be finite");
  if (!(time_value > 0.0)) detail::fail(ErrorKind::arbitrage, "time value must be > 0");
  if (!(time_value < std::min(terms.spot(), terms.strike()))) {
    detail::fail(ErrorKind::arbitrage, "time value must be below min(S, K)");
  }
  return from_log_ratio(terms, std::log(time_value / terms.spot()));
}

TimeValueQuote TimeValueQuote::from_price(const OptionTerms& terms, double price) {
  if (!std::isfinite(price)) detail::fail(ErrorKind::arbitrage, "price must be finite");
  if (!(price > terms.intrinsic() && price < terms.spot())) {
    detail::fail(ErrorKind::arbitrage, "price must lie strictly between (S - K)_+ and S");
  }
  return from_time_value(terms, price - terms.intrinsic());
}

double TimeValueQuote::time_value() const { return terms_.spot() * std::exp(log_ratio_); }

double TimeValueQuote::price() const { return terms_.intrinsic() + time_value(); }

NormalVol implied_normal_exact(const TimeValueQuote& quote) {
  const OptionTerms& terms = quote.terms();
  if (near_atm(terms)) return NormalVol(atm_closed_form(quote));

  const double gap = std::abs(terms.spot() - terms.strike());
  const double log_spot = std::log(terms.spot());
  const double half_log_t = 0.5 * std::log(terms.maturity());
  const double target = quote.log_ratio();

  // In s = ln(sigma): F(s) = ln(TV(sigma)/S) - target, and dF/ds = n(v) / L(v)
  // where v = |S-K| / (sigma sqrt T) and L is the unit normal loss.
  auto objective = [&](double s) {
    const double log_stdev = s + half_log_t;
    const double v = gap / std::exp(log_stdev);
    const double log_loss = special::log_normal_loss(v);
    const double value = log_stdev - log_spot + log_loss - target;
    const double slope = std::exp(-0.5 * v * v - kLogSqrt2Pi - log_loss);
    return detail::ValueAndSlope{value, slope};
  };

  // TV(sigma) <= sigma sqrt(T) / sqrt(2 pi), so this is a lower bound.
  const double floor = target + log_spot + 0.5 * std::log(2.0 * std::numbers::pi) - half_log_t;
  const double leading = std::log(gap) + 0.5 * std::log(0.5 * quote.lambda()) - half_log_t;
  const double start = std::max(floor, leading);
  const auto [lo, hi] = detail::bracket_increasing(objective, start, kBracketStep,
                                                   "implied_normal_exact");
  const double s = detail::solve_increasing(objective, lo, hi, start, kLogTolerance,
                                            "implied_normal_exact");
  return NormalVol(std::exp(s));
}

NormalVol implied_normal_exact(const OptionTerms& terms, double price) {
  return implied_normal_exact(TimeValueQuote::from_price(terms, price));
}

NormalVol implied_normal_via_gamma_inverse(const TimeValueQuote& quote) {
  const OptionTerms& terms = quote.terms();
  if (near_atm(terms)) {
    detail::fail(ErrorKind::degenerate_input,
                 "gamma inversion is undefined at the money; use implied_normal_atm");
  }
  const double gap = std::abs(terms.spot() - terms.strike());
  const double target = kLog4SqrtPi + quote.log_ratio() + std::log(terms.spot()) - std::log(gap);

  // In t = ln(z) the function target - ln Gamma(-1/2, e^t) increases, with
  // slope z * z^{-3/2} e^{-z} / Gamma(-1/2, z).
  auto objective = [&](double t) {
    const double z = std::exp(t);
    const double log_gamma = special::log_upper_gamma_neg_half(z);
    const double slope = std::exp(-z - 0.5 * t - log_gamma);
    return detail::ValueAndSlope{target - log_gamma, slope};
  };

  const double start = -std::log(quote.lambda());
  const auto [lo, hi] = detail::bracket_increasing(objective, start, kBracketStep,
                                                   "implied_normal_via_gamma_inverse");
  const double t = detail::solve_increasing(objective, lo, hi, start, kLogTolerance,
                                            "implied_normal_via_gamma_inverse");
  return NormalVol(gap / std::sqrt(2.0 * std::exp(t) * terms.maturity()));
}

NormalVol implied_normal_via_gamma_inverse(const OptionTerms& terms, double time_value) {
  return implied_normal_via_gamma_inverse(TimeValueQuote::from_time_value(terms, time_value));
}

double u_n_expansion(double lambda, double gamma_n) {
  require_expansion_lambda(lambda);
  if (!std::isfinite(gamma_n)) {
    detail::fail(ErrorKind::degenerate_input, "gamma_N is undefined at the money");
  }
  return lambda_expansion(lambda, gamma_n, gamma_n * gamma_n - 1.5 * gamma_n + 1.5);
}

double u_ln_expansion(double lambda, double gamma_ln, double x_ln) {
  require_expansion_lambda(lambda);
  if (!std::isfinite(gamma_ln) || !std::isfinite(x_ln)) {
    detail::fail(ErrorKind::degenerate_input, "gamma_LN is undefined at the money");
  }
  const double alpha = -x_ln * x_ln / 16.0 - 1.5;
  return lambda_expansion(lambda, gamma_ln, gamma_ln * gamma_ln - 1.5 * gamma_ln - alpha);
}

NormalVol implied_normal_asymptotic(const TimeValueQuote& quote, double lambda_max) {
  require_lambda_max(lambda_max);
  const OptionTerms& terms = quote.terms();
  if (near_atm(terms)) {
    detail::fail(ErrorKind::degenerate_input,
                 "the lambda expansion is undefined at the money; use implied_normal_atm");
  }
  const double lambda = quote.lambda();
  if (!(lambda < lambda_max)) {
    detail::fail(ErrorKind::asymptotic_domain, "lambda is above lambda_max; use exact inversion");
  }
  const double u = u_n_expansion(lambda, coords_from_terms(terms).gamma_n);
  if (!(u > 0.0)) detail::fail(ErrorKind::asymptotic_domain, "lambda expansion turned negative");
  const double gap = std::abs(terms.spot() - terms.strike());
  return NormalVol(gap * std::sqrt(0.5 * u / terms.maturity()));
}

NormalVol implied_normal_asymptotic(const OptionTerms& terms, double time_value,
                                    double lambda_max) {
  return implied_normal_asymptotic(TimeValueQuote::from_time_value(terms, time_value), lambda_max);
}

NormalVol implied_normal_atm(const OptionTerms& terms, double price) {
  if (!near_atm(terms)) {
    detail::fail(ErrorKind::wrong_branch, "implied_normal_atm requires S = K");
  }
  if (!std::isfinite(price) || !(price > 0.0 && price < terms.spot())) {
    detail::fail(ErrorKind::arbitrage, "price must lie strictly between 0 and S");
  }
  return NormalVol(std::sqrt(2.0 * std::numbers::pi / terms.maturity()) * price);
}

LognormalVol implied_lognormal_exact(const TimeValueQuote& quote) {
  const OptionTerms& terms = quote.terms();
  const double x = std::log1p((terms.strike() - terms.spot()) / terms.spot());
  const double half_log_t = 0.5 * std::log(terms.maturity());
  const double target = quote.log_ratio();

  // F(s) = ln(TV(e^s)/S) - target; dF/ds = sigma * vega / TV with
  // vega = S sqrt(T) n(d1).
  auto objective = [&](double s) {
    const double sigma = std::exp(s);
    const double log_tv = black_scholes_log_time_value(terms, LognormalVol(sigma));
    const double stdev = std::exp(s + half_log_t);
    const double d1 = -x / stdev + 0.5 * stdev;
    const double slope = std::exp(s + half_log_t - 0.5 * d1 * d1 - kLogSqrt2Pi - log_tv);
    return detail::ValueAndSlope{log_tv - target, slope};
  };

  const double atm_guess = std::log(kSqrt2Pi) + target - half_log_t;
  const double tail_guess = x == 0.0 ? atm_guess
                                     : std::log(std::abs(x)) + 0.5 * std::log(0.5 * quote.lambda()) -
                                           half_log_t;
  const double start = std::max(atm_guess, tail_guess);
  const auto [lo, hi] = detail::bracket_increasing(objective, start, kBracketStep,
                                                   "implied_lognormal_exact");
  const double s = detail::solve_increasing(objective, lo, hi, start, kLogTolerance,
                                            "implied_lognormal_exact");
  return LognormalVol(std::exp(s));
}

LognormalVol implied_lognormal_exact(const OptionTerms& terms, double price) {
  return implied_lognormal_exact(TimeValueQuote::from_price(terms, price));
}

LognormalVol implied_lognormal_asymptotic(const TimeValueQuote& quote, double lambda_max) {
  require_lambda_max(lambda_max);
  const OptionTerms& terms = quote.terms();
  if (near_atm(terms)) {
    detail::fail(ErrorKind::degenerate_input, "the lambda expansion is undefined at the money");
  }
  const double lambda = quote.lambda();
  if (!(lambda < lambda_max)) {
    detail::fail(ErrorKind::asymptotic_domain, "lambda is above lambda_max; use exact inversion");
  }
  const MoneynessCoords c = coords_from_terms(terms);
  const double u = u_ln_expansion(lambda, c.gamma_ln, c.x_ln);
  if (!(u > 0.0)) detail::fail(ErrorKind::asymptotic_domain, "lambda expansion turned negative");
  return LognormalVol(std::abs(c.x_ln) * std::sqrt(0.5 * u / terms.maturity()));
}

ImpliedResult implied_normal(const TimeValueQuote& quote, ImpliedMethod method,
                             double lambda_max) {
  require_lambda_max(lambda_max);
  const double lambda = quote.lambda();
  const bool atm = near_atm(quote.terms());
  switch (method) {
    case ImpliedMethod::exact:
      if (atm) return {NormalVol(atm_closed_form(quote)), "exact-atm", lambda};
      return {implied_normal_exact(quote), "exact", lambda};
    case ImpliedMethod::gamma:
      return {implied_normal_via_gamma_inverse(quote), "gamma", lambda};
    case ImpliedMethod::asymptotic:
      return {implied_normal_asymptotic(quote, lambda_max), "asymptotic", lambda};
    case ImpliedMethod::automatic:
      if (atm) return {NormalVol(atm_closed_form(quote)), "exact-atm", lambda};
      if (lambda < lambda_max) {
        return {implied_normal_asymptotic(quote, lambda_max), "asymptotic", lambda};
      }
      return {implied_normal_exact(quote), "exact", lambda};
  }
  detail::fail(ErrorKind::parameter, "unknown implied-volatility method");
}

}  // namespace bachvol
