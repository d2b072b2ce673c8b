#pragma once

#include <array>

#include "binn/geometry.hpp"
#include "binn/special_functions.hpp"

namespace binn {

/// Homogeneous fluid. omega is derived as k * c.
struct AcousticMedium {
  double rho = 1.2;
  double c = 341.0;
  double k = 1.0;

  double omega() const { return k * c; }
};

/// Throws DomainError unless rho, c and k are positive.
void validate(const AcousticMedium& medium);

namespace analytic {

struct FieldValue {
  Complex p;
  std::array<Complex, 2> grad;
};

/// p = cos(k x1) + i sin(k x2), a plane-wave superposition satisfying the
/// Helmholtz equation everywhere.
FieldValue case1_exact(const Vec2& x, double k);

struct RadialValue {
  Complex p;
  Complex dp_dr;
};

/// Pulsating cylinder of radius R with radial surface velocity v_bar:
/// p = i rho c v_bar H_0(kr) / H_1(kR).
RadialValue pulsating_exact(double r, const AcousticMedium& medium, double radius, double v_bar);

/// Hard cap on the number of terms in the scattering series.
inline constexpr int kScatteringMaxTerms = 60;

struct ScatteringValue {
  Complex p;
  Complex dp_dr;
  int terms = 0;
  /// False when the last retained term was still above the relative tolerance.
  bool converged = true;
};

/// Field scattered by a rigid cylinder of radius R from a unit plane wave
/// travelling along +x. Summation stops at the first n whose term magnitude
/// falls below 1e-12 of the partial sum, or at kScatteringMaxTerms.
ScatteringValue scattering_exact(double r, double theta, double k, double radius);

/// The same series with exactly `terms` terms (n = 0 .. terms - 1).
ScatteringValue scattering_series(double r, double theta, double k, double radius, int terms);

/// Neumann symbol: 1 for n = 0, 2 otherwise.
inline double neumann_symbol(int n) { return n == 0 ? 1.0 : 2.0; }

}  // namespace analytic
}  // namespace binn
