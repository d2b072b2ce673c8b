#include "binn/analytic.hpp"

#include <cmath>
#include <vector>

#include "binn/error.hpp"

namespace binn {

void validate(const AcousticMedium& medium) {
  if (!(medium.rho > 0.0 && medium.c > 0.0 && medium.k > 0.0)) {
    throw DomainError("acoustic medium needs positive density, sound speed and wave number");
  }
}

namespace analytic {

FieldValue case1_exact(const Vec2& x, double k) {
  const double c1 = std::cos(k * x.x());
  const double s1 = std::sin(k * x.x());
  const double c2 = std::cos(k * x.y());
  const double s2 = std::sin(k * x.y());
  return {Complex(c1, s2), {Complex(-k * s1, 0.0), Complex(0.0, k * c2)}};
}

RadialValue pulsating_exact(double r, const AcousticMedium& medium, double radius, double v_bar) {
  validate(medium);
  if (!(radius > 0.0)) throw DomainError("cylinder radius must be positive");
  if (r < radius) throw DomainError("pulsating cylinder field requested inside the cylinder");
  const Complex amplitude = Complex(0.0, medium.rho * medium.c * v_bar) / special::hankel1(1, medium.k * radius);
  const auto h = special::hankel01(medium.k * r);
  return {amplitude * h[0], -medium.k * amplitude * h[1]};
}

namespace {

struct Term {
  Complex p;
  Complex dp_dr;
  double magnitude;  // theta-independent size used for the stopping rule
};

Term scattering_term(int n, const double* jr, const double* yr, const double* jR, const double* yR,
                     double k, double r, double radius, double theta) {
  auto deriv = [](int m, const double* j, const double* y, double x) {
    if (m == 0) return Complex(-j[1], -y[1]);
    return Complex(j[m - 1], y[m - 1]) - (m / x) * Complex(j[m], y[m]);
  };
  const double kR = k * radius;
  const double kr = k * r;
  const Complex hp_R = deriv(n, jR, yR, kR);
  const double jp_R = deriv(n, jR, yR, kR).real();
  const Complex ratio = jp_R / hp_R;
  const Complex h_r(jr[n], yr[n]);
  const Complex hp_r = deriv(n, jr, yr, kr);
  static const Complex kI[4] = {Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)};
  const Complex coef = -neumann_symbol(n) * kI[n % 4] * ratio;
  const double c = std::cos(n * theta);
  return {coef * h_r * c, coef * k * hp_r * c, std::abs(coef * h_r)};
}

ScatteringValue sum_series(double r, double theta, double k, double radius, int terms, bool adaptive) {
  if (!(radius > 0.0) || !(k > 0.0)) throw DomainError("scattering needs positive k and radius");
  if (r < radius) throw DomainError("scattered field requested inside the cylinder");
  if (terms < 1 || terms > special::kMaxOrder) throw DomainError("scattering term count out of range");
  std::vector<double> jr(static_cast<std::size_t>(terms) + 2);
  std::vector<double> yr(jr.size());
  std::vector<double> jR(jr.size());
  std::vector<double> yR(jr.size());
  special::bessel_jy_sequence(terms + 1, k * r, jr.data(), yr.data());
  special::bessel_jy_sequence(terms + 1, k * radius, jR.data(), yR.data());
  ScatteringValue out;
  out.converged = !adaptive;
  for (int n = 0; n < terms; ++n) {
    const Term t = scattering_term(n, jr.data(), yr.data(), jR.data(), yR.data(), k, r, radius, theta);
    out.p += t.p;
    out.dp_dr += t.dp_dr;
    out.terms = n + 1;
    if (adaptive && n > 0 && t.magnitude < 1e-12 * std::abs(out.p)) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace

ScatteringValue scattering_exact(double r, double theta, double k, double radius) {
  return sum_series(r, theta, k, radius, kScatteringMaxTerms, true);
}

ScatteringValue scattering_series(double r, double theta, double k, double radius, int terms) {
  return sum_series(r, theta, k, radius, terms, false);
}

}  // namespace analytic
}  // namespace binn
