#pragma once

#include <cmath>
#include <string_view>

namespace bachvol {

/// Spot, strike and maturity of one European call.
///
/// Rates and dividends are not modelled: spot is the forward price of the
/// underlying and prices are undiscounted.
class OptionTerms {
 public:
  /// Throws Error(domain) unless spot, strike and maturity are finite and > 0.
  OptionTerms(double spot, double strike, double maturity);

  double spot() const noexcept { return spot_; }
  double strike() const noexcept { return strike_; }
  double maturity() const noexcept { return maturity_; }

  /// K / S.
  double moneyness() const noexcept { return strike_ / spot_; }
  /// (S - K)_+
  double intrinsic() const noexcept { return spot_ > strike_ ? spot_ - strike_ : 0.0; }
  bool at_the_money() const noexcept { return spot_ == strike_; }

  OptionTerms with_maturity(double maturity) const { return {spot_, strike_, maturity}; }
  OptionTerms with_spot(double spot) const { return {spot, strike_, maturity_}; }
  OptionTerms with_strike(double strike) const { return {spot_, strike, maturity_}; }

  friend bool operator==(const OptionTerms&, const OptionTerms&) = default;

 private:
  double spot_;
  double strike_;
  double maturity_;
};

/// Absolute (Bachelier) volatility, in currency units per square-root year.
class NormalVol {
 public:
  explicit NormalVol(double value);
  double value() const noexcept { return value_; }
  friend auto operator<=>(const NormalVol&, const NormalVol&) = default;

 private:
  double value_;
};

/// Relative (Black-Scholes) volatility, per square-root year.
class LognormalVol {
 public:
  explicit LognormalVol(double value);
  double value() const noexcept { return value_; }
  friend auto operator<=>(const LognormalVol&, const LognormalVol&) = default;

 private:
  double value_;
};

/// Whether a series remainder is a proven bound or only the size of the
/// first omitted term.
enum class RemainderKind { bound, estimate };

std::string_view to_string(RemainderKind kind) noexcept;

/// Truncated asymptotic series: partial sum of `order` terms plus the
/// magnitude of what was dropped.
struct SeriesResult {
  double value = 0.0;
  int order = 1;
  double remainder = 0.0;
  RemainderKind remainder_kind = RemainderKind::bound;
};

}  // namespace bachvol
