#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace testing {

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }
inline double rel_err(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) / std::abs(b); }

/// Tanh-sinh quadrature on [a, b]; handles integrable endpoint singularities.
inline double tanh_sinh(const std::function<double(double)>& f, double a, double b, int levels = 7) {
  const double half = 0.5 * (b - a);
  const double h = std::ldexp(1.0, -levels);
  double sum = 0.0;
  for (int i = -static_cast<int>(6.0 / h); i <= static_cast<int>(6.0 / h); ++i) {
    const double t = i * h;
    const double s = 0.5 * std::numbers::pi * std::sinh(t);
    const double c = std::cosh(s);
    const double w = 0.5 * std::numbers::pi * std::cosh(t) / (c * c);
    if (w < 1e-300) continue;
    // measured from the nearer endpoint to avoid cancellation
    const double x = s < 0 ? a + half * std::exp(s) / c : b - half * std::exp(-s) / c;
    if (x <= a || x >= b) continue;
    sum += w * f(x);
  }
  return sum * half * h;
}

}  // namespace testing
