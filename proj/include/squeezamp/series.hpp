#pragma once

#include <cmath>

namespace squeezamp {

/// (e^x - 1)/x, continuous through x = 0.
inline double expm1_over(double x) {
  if (std::abs(x) < 1e-8) return 1.0 + 0.5 * x + x * x / 6.0;
  return std::expm1(x) / x;
}

/// (e^x - 1 - x)/x^2, continuous through x = 0. The naive form loses all
/// accuracy below |x| ~ 1e-6; the cutoff keeps the relative error < 1e-12.
inline double expm1_rem(double x) {
  if (std::abs(x) < 1e-3) return 0.5 + x / 6.0 + x * x / 24.0 + x * x * x / 120.0;
  return (std::expm1(x) - x) / (x * x);
}

/// (sinh x - x)/x^2, odd in x, continuous through 0.
inline double sinh_rem(double x) {
  if (std::abs(x) < 0.02)
    return (x / 6.0) * (1.0 + x * x / 20.0 * (1.0 + x * x / 42.0));
  return (std::sinh(x) - x) / (x * x);
}

/// sinh(x)/x, even in x, -> 1 as x -> 0.
inline double sinhc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0 * (1.0 + x * x / 20.0);
  return std::sinh(x) / x;
}

}  // namespace squeezamp
