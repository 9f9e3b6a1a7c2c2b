#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "bachvol/error.hpp"

namespace bachvol::detail {

struct ValueAndSlope {
  double value;
  double slope;
};

inline constexpr int kRootIterationCap = 200;

/// Root of an increasing function known to change sign inside [lo, hi].
///
/// Newton steps are taken from `guess` while they stay strictly inside the
/// current bracket; any other step bisects. After half the iteration budget
/// the search falls back to pure bisection. Hitting the cap throws
/// Error(numerical).
template <class F>
double solve_increasing(F&& f, double lo, double hi, double guess, double tolerance,
                        const char* what) {
  double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  for (int iter = 0; iter < kRootIterationCap; ++iter) {
    const ValueAndSlope eval = f(x);
    if (eval.value == 0.0) return x;
    if (eval.value < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = x - eval.value / eval.slope;
    const bool newton_ok = iter < kRootIterationCap / 2 && eval.slope > 0.0 &&
                           std::isfinite(next) && next > lo && next < hi;
    if (!newton_ok) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= tolerance || hi - lo <= tolerance) return next;
    x = next;
  }
  fail(ErrorKind::numerical, std::string(what) + ": root search hit the iteration cap");
}

/// Walks `start` outward in steps of `step` until `f` changes sign, returning
/// a bracket [lo, hi] with f(lo) < 0 <= f(hi) for increasing `f`.
template <class F>
std::pair<double, double> bracket_increasing(F&& f, double start, double step, const char* what) {
  double value = f(start).value;
  double lo = start;
  double hi = start;
  for (int iter = 0; iter < kRootIterationCap; ++iter) {
    if (value < 0.0) {
      lo = hi;
      hi += step;
      value = f(hi).value;
      if (value >= 0.0) return {lo, hi};
    } else {
      hi = lo;
      lo -= step;
      value = f(lo).value;
      if (value < 0.0) return {lo, hi};
    }
  }
  fail(ErrorKind::numerical, std::string(what) + ": could not bracket the root");
}

}  // namespace bachvol::detail
