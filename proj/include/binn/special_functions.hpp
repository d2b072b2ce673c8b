#pragma once

#include <array>
#include <complex>
#include <utility>

namespace binn {

using Complex = std::complex<double>;

namespace special {

/// Largest integer order accepted by the cylinder-function routines.
inline constexpr int kMaxOrder = 100;

struct BesselPair {
  double j;
  double y;
};

/// Bessel functions of the first and second kind, J_n(x) and Y_n(x).
///
/// x = 0 is accepted and yields J_n(0) with y = -inf. Negative x throws
/// DomainError, n outside [0, kMaxOrder] throws UnsupportedOrderError.
BesselPair bessel_jy(int n, double x);

/// J_n(x) alone; valid for x >= 0.
double bessel_j(int n, double x);

/// J_0..J_nmax and Y_0..Y_nmax in one sweep (x > 0).
void bessel_jy_sequence(int nmax, double x, double* j, double* y);

/// H_n^{(1)}(x) = J_n(x) + i Y_n(x).
Complex hankel1(int n, double x);

/// H_0^{(1)}(x) and H_1^{(1)}(x) together; the kernels' hot path.
std::array<Complex, 2> hankel01(double x);

/// d/dx H_n^{(1)}(x), from H'_n = H_{n-1} - (n/x) H_n and H'_0 = -H_1.
Complex hankel1_prime(int n, double x);

/// d/dx J_n(x), from the same recurrence as hankel1_prime.
double bessel_j_prime(int n, double x);

}  // namespace special
}  // namespace binn
