#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#ifndef SELBERG_REAL
#define SELBERG_REAL double
#endif

namespace selberg {

// Every evaluator works in this scalar type. An extended-precision build only
// needs -DSELBERG_REAL="long double" (or any type std::complex accepts).
using Real = SELBERG_REAL;
using Complex = std::complex<Real>;

inline constexpr Real kPi = std::numbers::pi_v<Real>;
inline constexpr Real kEps = std::numeric_limits<Real>::epsilon();

// Default truncation tolerance for series and products.
inline constexpr Real kDefaultTol = 4 * kEps;

inline constexpr Complex kI{0, 1};

inline bool is_finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace selberg
