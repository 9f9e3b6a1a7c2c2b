#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "bachvol/special_fn.hpp"
#include "check.hpp"
#include "oracle.hpp"

namespace sp = bachvol::special;
using bachvol::ErrorKind;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return out;
}

// ln N(-x) for large x from the asymptotic Mills-ratio expansion.
double log_lower_tail(double x) {
  const double r = 1.0 / (x * x);
  const double series = 1.0 - r + 3 * r * r - 15 * r * r * r + 105 * r * r * r * r;
  return -0.5 * x * x - std::log(x * std::sqrt(2.0 * std::numbers::pi)) + std::log(series);
}

}  // namespace

TEST_CASE("gauss_pdf values and symmetry") {
  CHECK(sp::gauss_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-16));
  CHECK_REL(sp::gauss_pdf(1.0), 0.24197072451914337, 1e-15);
  CHECK(sp::gauss_pdf(1.5) == sp::gauss_pdf(-1.5));
  CHECK(sp::gauss_pdf(40.0) == 0.0);
}

TEST_CASE("gauss_cdf values") {
  CHECK(sp::gauss_cdf(0.0) == 0.5);
  CHECK(sp::gauss_cdf(38.0) == 1.0);
  CHECK_REL(sp::gauss_cdf(1.0), 0.8413447460685429, 1e-15);
  CHECK_REL(sp::gauss_cdf(1.0), oracle::gauss_cdf(1.0), 1e-15);
  // Rounding x / sqrt(2) costs about x^2 ulps in the lower tail.
  for (double x : {-30.0, -12.0, -5.0, -1.3, 0.7, 4.0}) {
    CAPTURE(x);
    CHECK_REL(sp::gauss_cdf(x), oracle::gauss_cdf(x), std::max(2e-14, 1e-15 * x * x));
  }
}

TEST_CASE("gauss_cdf is symmetric") {
  for (double x = -9.0; x <= 9.0; x += 0.25) {
    CAPTURE(x);
    CHECK(std::abs(sp::gauss_cdf(x) + sp::gauss_cdf(-x) - 1.0) <= 1e-15);
  }
}

TEST_CASE("gauss_cdf derivative is gauss_pdf") {
  const double h = 1e-6;
  for (double x = -6.0; x <= 2.0; x += 0.5) {
    CAPTURE(x);
    const double fd = (sp::gauss_cdf(x + h) - sp::gauss_cdf(x - h)) / (2 * h);
    CHECK_REL(fd, sp::gauss_pdf(x), 1e-8);
  }
}

TEST_CASE("log_gauss_cdf follows the lower tail") {
  for (double x : {-3.0, -1.0, 0.0}) {
    CAPTURE(x);
    CHECK_REL(sp::log_gauss_cdf(x), std::log(sp::gauss_cdf(x)), 1e-14);
  }
  for (double x : {2.0, 6.0, 20.0}) {
    CAPTURE(x);
    CHECK_REL(sp::log_gauss_cdf(x), std::log1p(-sp::gauss_cdf(-x)), 1e-14);
  }
  for (double x : {40.0, 100.0, 1e3}) {
    CAPTURE(x);
    CHECK_REL(sp::log_gauss_cdf(-x), log_lower_tail(x), 1e-14);
  }
}

TEST_CASE("erfc values") {
  CHECK(sp::erfc(0.0) == 1.0);
  CHECK_REL(sp::erfc(1.0), 0.15729920705028513, 1e-15);
  // erfc(26) ~ 6e-296 is representable; erfc(30) ~ 2.6e-393 is below the
  // smallest subnormal.
  CHECK(sp::erfc(26.0) > 0.0);
  CHECK(sp::erfc(30.0) == 0.0);
  CHECK(sp::erfc(100.0) == 0.0);
  for (double x : {0.3, 1.7, 4.2}) {
    CAPTURE(x);
    CHECK_REL(sp::erfc(-x), 2.0 - sp::erfc(x), 1e-15);
  }
}

TEST_CASE("erfc matches the quadrature oracle on |x| <= 26") {
  for (double x = -26.0; x <= 26.0; x += 1.3) {
    CAPTURE(x);
    CHECK_REL(sp::erfc(x), oracle::erfc(x), 1e-14);
  }
}

TEST_CASE("erfcx is continuous across its branches") {
  for (double x : {-0.5, 0.0, 1.0, 2.0, 5.0, 25.0}) {
    CAPTURE(x);
    const double direct = std::exp(x * x) * oracle::erfc(x);
    CHECK_REL(sp::erfcx(x), direct, 1e-14);
  }
  // Beyond x = 26, exp(x^2) overflows; the asymptotic series takes over.
  for (double x : {27.0, 1e3, 1e8}) {
    const double w = 1 / (2 * x * x);
    const double series = (1 - w + 3 * w * w - 15 * w * w * w) / (x * std::sqrt(std::numbers::pi));
    CHECK_REL(sp::erfcx(x), series, 1e-10);
  }
  CHECK_REL(sp::erfcx(std::nextafter(2.0, 0.0)), sp::erfcx(2.0), 1e-14);
  CHECK_REL(sp::erfcx(1e8), 1.0 / (std::sqrt(std::numbers::pi) * 1e8), 1e-15);
}

TEST_CASE("normal loss and Mills ratio") {
  for (double v : {0.0, 0.5, 2.0, 2.83, 3.0, 8.0, 20.0}) {
    CAPTURE(v);
    const double reference = oracle::bachelier_time_value(1.0, 1.0 + v, 1.0, 1.0);
    CHECK_REL(sp::normal_loss(v), reference, 1e-14);
    CHECK_REL(sp::log_normal_loss(v), std::log(reference), 1e-14);
    CHECK_REL(sp::mills_ratio(v), oracle::gauss_cdf(-v) / sp::gauss_pdf(v), 1e-14);
  }
  CHECK(std::isfinite(sp::log_normal_loss(1e4)));
  CHECK_ERROR_KIND(sp::normal_loss(-1.0), ErrorKind::domain);
}

TEST_CASE("upper_gamma_neg_half values") {
  CHECK(sp::upper_gamma_neg_half(1.0) == doctest::Approx(0.17816).epsilon(1e-4));
  CHECK_REL(sp::upper_gamma_neg_half(1.0), oracle::upper_gamma_neg_half(1.0), 1e-12);
  CHECK_REL(sp::upper_gamma_neg_half(0.5), oracle::upper_gamma_neg_half(0.5), 1e-12);
  CHECK(sp::upper_gamma_neg_half(1e4) == 0.0);
  CHECK(sp::log_upper_gamma_neg_half(1e4) < -1e4);
}

TEST_CASE("upper_gamma_neg_half matches the quadrature oracle") {
  for (double z : log_grid(1e-6, 50.0, 40)) {
    CAPTURE(z);
    const double reference = oracle::upper_gamma_neg_half(z);
    CHECK_REL(sp::upper_gamma_neg_half(z), reference, 1e-11);
    CHECK_REL(sp::log_upper_gamma_neg_half(z), std::log(reference), 1e-12);
  }
}

TEST_CASE("upper_gamma_neg_half is positive and decreasing") {
  double previous = std::numeric_limits<double>::infinity();
  for (double z : log_grid(1e-8, 600.0, 200)) {
    const double g = sp::upper_gamma_neg_half(z);
    CHECK(g > 0.0);
    CHECK(g < previous);
    previous = g;
  }
}

TEST_CASE("upper_gamma_neg_half satisfies the recurrence to Gamma(1/2, z)") {
  for (double z : log_grid(1e-4, 50.0, 30)) {
    CAPTURE(z);
    const double lhs = -0.5 * sp::upper_gamma_neg_half(z) + std::exp(-z) / std::sqrt(z);
    const double rhs = std::sqrt(std::numbers::pi) * oracle::erfc(std::sqrt(z));
    CHECK_REL(lhs, rhs, 1e-12);
  }
}

TEST_CASE("log_upper_gamma_neg_half follows the large-z expansion") {
  for (double z : {800.0, 1e4, 1e7}) {
    CAPTURE(z);
    const auto series = sp::scaled_gamma_series(0.5 / z, 6);
    const double expected = -z - 1.5 * std::log(z) + std::log(series.value);
    CHECK_REL(sp::log_upper_gamma_neg_half(z), expected, 1e-15);
  }
}

TEST_CASE("special functions reject bad arguments") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_ERROR_KIND(sp::upper_gamma_neg_half(0.0), ErrorKind::domain);
  CHECK_ERROR_KIND(sp::upper_gamma_neg_half(-1.0), ErrorKind::domain);
  CHECK_ERROR_KIND(sp::log_upper_gamma_neg_half(0.0), ErrorKind::domain);
  CHECK_ERROR_KIND(sp::gauss_cdf(nan), ErrorKind::domain);
  CHECK_ERROR_KIND(sp::erfc(inf), ErrorKind::domain);
  CHECK_ERROR_KIND(sp::gauss_pdf(-inf), ErrorKind::domain);
}

TEST_CASE("odd double factorials") {
  CHECK(sp::odd_double_factorial(0) == 1);
  CHECK(sp::odd_double_factorial(1) == 3);
  CHECK(sp::odd_double_factorial(2) == 15);
  CHECK(sp::odd_double_factorial(3) == 105);
  CHECK(sp::odd_double_factorial(12) == 7905853580625LL);
  CHECK_ERROR_KIND(sp::odd_double_factorial(13), ErrorKind::parameter);
  CHECK_ERROR_KIND(sp::odd_double_factorial(-1), ErrorKind::parameter);
}

TEST_CASE("scaled_gamma_series examples") {
  const auto p1 = sp::scaled_gamma_series(0.04, 1);
  CHECK(p1.value == 1.0);
  CHECK(p1.order == 1);
  CHECK_REL(p1.remainder, 3 * 0.04, 1e-15);
  CHECK(p1.remainder_kind == bachvol::RemainderKind::bound);

  const auto p2 = sp::scaled_gamma_series(0.01, 2);
  CHECK_REL(p2.value, 0.97, 1e-15);
  CHECK_REL(p2.remainder, 15 * 1e-4, 1e-15);

  CHECK_REL(sp::scaled_gamma_series(1e-12, 7).value, 1.0, 1e-11);

  CHECK_ERROR_KIND(sp::scaled_gamma_series(0.1, 0), ErrorKind::parameter);
  CHECK_ERROR_KIND(sp::scaled_gamma_series(0.1, 13), ErrorKind::parameter);
  CHECK_ERROR_KIND(sp::scaled_gamma_series(0.0, 2), ErrorKind::domain);
}

TEST_CASE("consecutive partial sums bracket the scaled gamma function") {
  for (double w : {0.005, 0.02, 0.05, 0.1, 0.16}) {
    const double z = 0.5 / w;
    const double exact = oracle::upper_gamma_neg_half(z) * z * std::sqrt(z) * std::exp(z);
    for (int p = 1; p < sp::max_series_order; ++p) {
      // The bracketing argument needs the terms to be decreasing.
      if ((2 * p + 1) * w >= 1.0) break;
      CAPTURE(w);
      CAPTURE(p);
      const double a = sp::scaled_gamma_series(w, p).value;
      const double b = sp::scaled_gamma_series(w, p + 1).value;
      CHECK(std::min(a, b) <= exact);
      CHECK(exact <= std::max(a, b));
      CHECK(std::abs(a - exact) <= sp::scaled_gamma_series(w, p).remainder);
    }
  }
}
