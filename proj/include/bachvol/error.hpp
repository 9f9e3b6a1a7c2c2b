#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bachvol {

/// Failure categories reported by the library.
enum class ErrorKind {
  domain,             ///< an input lies outside the mathematical domain
  parameter,          ///< a tuning parameter (series order, threshold) is out of range
  degenerate_input,   ///< the operation is undefined at this point (e.g. at the money)
  arbitrage,          ///< a price or time value violates the no-arbitrage band
  asymptotic_domain,  ///< an asymptotic formula is used outside its validity range
  wrong_branch,       ///< a closed form was called for a case it does not cover
  numerical,          ///< an iteration failed to converge; treated as a bug
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace detail
}  // namespace bachvol
