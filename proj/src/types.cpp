#include "bachvol/types.hpp"

#include <cmath>
#include <string>

#include "bachvol/error.hpp"

namespace bachvol {
namespace {

void require_positive(double value, const char* what) {
  if (!std::isfinite(value) || value <= 0.0) {
    detail::fail(ErrorKind::domain, std::string(what) + " must be finite and > 0");
  }
}

}  // namespace

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::degenerate_input: return "degenerate_input";
    case ErrorKind::arbitrage: return "arbitrage";
    case ErrorKind::asymptotic_domain: return "asymptotic_domain";
    case ErrorKind::wrong_branch: return "wrong_branch";
    case ErrorKind::numerical: return "numerical";
  }
  return "unknown";
}

std::string_view to_string(RemainderKind kind) noexcept {
  return kind == RemainderKind::bound ? "bound" : "estimate";
}

OptionTerms::OptionTerms(double spot, double strike, double maturity)
    : spot_(spot), strike_(strike), maturity_(maturity) {
  require_positive(spot, "spot");
  require_positive(strike, "strike");
  require_positive(maturity, "maturity");
}

NormalVol::NormalVol(double value) : value_(value) { require_positive(value, "normal volatility"); }

LognormalVol::LognormalVol(double value) : value_(value) {
  require_positive(value, "lognormal volatility");
}

}  // namespace bachvol
