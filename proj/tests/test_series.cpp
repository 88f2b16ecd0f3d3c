#include <catch2/catch.hpp>

#include <cmath>

#include "squeezamp/series.hpp"

using namespace squeezamp;

TEST_CASE("expm1_over matches (e^x-1)/x and its limit", "[series]") {
  CHECK(expm1_over(0.0) == Approx(1.0));
  CHECK(expm1_over(1.0) == Approx(std::expm1(1.0)));
  CHECK(expm1_over(-1.0) == Approx(1.0 - std::exp(-1.0)));
  // continuity across the series cutoff
  CHECK(expm1_over(1.0000001e-8) == Approx(expm1_over(0.9999999e-8)).epsilon(1e-12));
}

TEST_CASE("expm1_rem survives catastrophic-cancellation territory", "[series]") {
  // (e^x - 1 - x)/x^2 -> 1/2 with no cancellation blowup
  CHECK(std::abs(expm1_rem(1e-12) - 0.5) <= 1e-6 * 0.5);
  CHECK(expm1_rem(0.0) == Approx(0.5));
  CHECK(expm1_rem(1.0) == Approx(std::exp(1.0) - 2.0));
  CHECK(expm1_rem(-2.0) == Approx((std::exp(-2.0) - 1.0 + 2.0) / 4.0));
}

TEST_CASE("sinh_rem is odd and matches the naive form away from zero", "[series]") {
  CHECK(sinh_rem(0.5) == Approx((std::sinh(0.5) - 0.5) / 0.25));
  CHECK(sinh_rem(-0.5) == Approx(-sinh_rem(0.5)));
  CHECK(std::abs(sinh_rem(1e-10) - 1e-10 / 6.0) <= 1e-25);
  // series and naive branches agree at the cutoff point itself
  const double x = 0.02;
  const double series = (x / 6.0) * (1.0 + x * x / 20.0 * (1.0 + x * x / 42.0));
  CHECK(series == Approx((std::sinh(x) - x) / (x * x)).epsilon(1e-11));
}

TEST_CASE("sinhc", "[series]") {
  CHECK(sinhc(0.0) == Approx(1.0));
  CHECK(sinhc(0.8) == Approx(std::sinh(0.8) / 0.8));
  CHECK(sinhc(-0.8) == Approx(sinhc(0.8)));
}
