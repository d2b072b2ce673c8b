#include "binn/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "binn/error.hpp"

namespace binn::special {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = 0.57721566490153286061;
// Above this argument J_0, J_1, Y_0, Y_1 come from the Hankel asymptotic
// expansion; the expansion's smallest term there is below 1e-20.
constexpr double kAsymptoticThreshold = 25.0;

void check_order(int n) {
  if (n < 0 || n > kMaxOrder) {
    throw UnsupportedOrderError("Bessel order " + std::to_string(n) + " outside [0, " +
                                std::to_string(kMaxOrder) + "]");
  }
}

struct Asymptotic {
  double j;
  double y;
};

// Hankel expansion J_nu, Y_nu for integer nu in {0, 1} and large x.
Asymptotic hankel_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) > prev) break;  // divergent tail
    prev = std::abs(term);
    // a_k / x^k alternates between Q (odd k) and P (even k) with signs (-1)^{floor(k/2)}.
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 1) {
      q += sign * term;
    } else {
      p += sign * term;
    }
    if (std::abs(term) < 1e-18) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  const double amp = std::sqrt(2.0 / (kPi * x));
  const double c = std::cos(chi);
  const double s = std::sin(chi);
  return {amp * (p * c - q * s), amp * (p * s + q * c)};
}

// Miller backward recurrence for J_0..J_top, normalised either by the
// Neumann sum J_0 + 2 sum J_2k = 1 or, at large x, by asymptotic J_0/J_1.
const std::vector<double>& miller_j(int top, double x) {
  const double reach = std::max(static_cast<double>(top), x);
  int start = static_cast<int>(reach + 20.0 + std::sqrt(40.0 * reach));
  start += start % 2;
  thread_local std::vector<double> t;
  t.assign(static_cast<std::size_t>(start) + 2, 0.0);
  t[static_cast<std::size_t>(start)] = 1e-30;
  constexpr double kBig = 1e250;
  for (int k = start; k >= 1; --k) {
    const auto uk = static_cast<std::size_t>(k);
    t[uk - 1] = (2.0 * k / x) * t[uk] - t[uk + 1];
    if (std::abs(t[uk - 1]) > kBig) {
      for (std::size_t i = uk - 1; i < t.size(); ++i) t[i] /= kBig;
    }
  }
  double scale;
  if (x < kAsymptoticThreshold) {
    double sum = t[0];
    for (std::size_t k = 2; k <= static_cast<std::size_t>(start); k += 2) sum += 2.0 * t[k];
    scale = 1.0 / sum;
  } else {
    const Asymptotic a0 = hankel_asymptotic(0, x);
    const Asymptotic a1 = hankel_asymptotic(1, x);
    scale = std::abs(a0.j) > std::abs(a1.j) ? a0.j / t[0] : a1.j / t[1];
  }
  for (double& v : t) v *= scale;
  return t;
}

}  // namespace

void bessel_jy_sequence(int nmax, double x, double* j, double* y) {
  if (nmax < 0 || nmax > kMaxOrder + 1) check_order(nmax);
  if (!(x > 0.0)) throw DomainError("bessel_jy_sequence requires x > 0");

  // Need J up to 2k+1 for the Neumann series of Y_1, so compute past nmax.
  const std::vector<double>& t = miller_j(std::max(nmax, 1), x);
  for (int n = 0; n <= nmax; ++n) j[n] = t[static_cast<std::size_t>(n)];

  double y0;
  double y1;
  if (x < kAsymptoticThreshold) {
    const double lg = std::log(0.5 * x) + kEulerGamma;
    double s0 = 0.0;
    double s1 = 0.0;
    const std::size_t last = t.size() - 2;
    for (std::size_t k = 1; 2 * k + 1 <= last; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      s0 += sign * t[2 * k] / static_cast<double>(k);
      s1 += sign * (t[2 * k - 1] - t[2 * k + 1]) / static_cast<double>(k);
    }
    y0 = (2.0 / kPi) * lg * t[0] - (4.0 / kPi) * s0;
    y1 = -(2.0 / kPi) * t[0] / x + (2.0 / kPi) * lg * t[1] + (2.0 / kPi) * s1;
  } else {
    y0 = hankel_asymptotic(0, x).y;
    y1 = hankel_asymptotic(1, x).y;
  }
  y[0] = y0;
  if (nmax >= 1) y[1] = y1;
  for (int n = 1; n < nmax; ++n) y[n + 1] = (2.0 * n / x) * y[n] - y[n - 1];
}

std::array<Complex, 2> hankel01(double x) {
  if (!(x > 0.0)) throw DomainError("hankel01 requires x > 0");
  if (x >= kAsymptoticThreshold) {
    const Asymptotic a0 = hankel_asymptotic(0, x);
    const Asymptotic a1 = hankel_asymptotic(1, x);
    return {Complex(a0.j, a0.y), Complex(a1.j, a1.y)};
  }
  double j[2];
  double y[2];
  bessel_jy_sequence(1, x, j, y);
  return {Complex(j[0], y[0]), Complex(j[1], y[1])};
}

BesselPair bessel_jy(int n, double x) {
  check_order(n);
  if (x < 0.0 || std::isnan(x)) throw DomainError("bessel_jy requires x >= 0");
  if (x == 0.0) return {n == 0 ? 1.0 : 0.0, -std::numeric_limits<double>::infinity()};
  std::vector<double> j(static_cast<std::size_t>(n) + 1);
  std::vector<double> y(static_cast<std::size_t>(n) + 1);
  bessel_jy_sequence(n, x, j.data(), y.data());
  return {j.back(), y.back()};
}

double bessel_j(int n, double x) { return bessel_jy(n, x).j; }

Complex hankel1(int n, double x) {
  if (!(x > 0.0)) throw DomainError("hankel1 requires x > 0");
  const BesselPair b = bessel_jy(n, x);
  return {b.j, b.y};
}

Complex hankel1_prime(int n, double x) {
  if (!(x > 0.0)) throw DomainError("hankel1_prime requires x > 0");
  check_order(n);
  double j[kMaxOrder + 2];
  double y[kMaxOrder + 2];
  bessel_jy_sequence(n + 1, x, j, y);
  if (n == 0) return -Complex(j[1], y[1]);
  return Complex(j[n - 1], y[n - 1]) - (n / x) * Complex(j[n], y[n]);
}

double bessel_j_prime(int n, double x) {
  check_order(n);
  if (x < 0.0) throw DomainError("bessel_j_prime requires x >= 0");
  if (x == 0.0) return n == 1 ? 0.5 : 0.0;
  if (n == 0) return -bessel_j(1, x);
  double j[kMaxOrder + 2];
  double y[kMaxOrder + 2];
  bessel_jy_sequence(n, x, j, y);
  return j[n - 1] - (n / x) * j[n];
}

}  // namespace binn::special
