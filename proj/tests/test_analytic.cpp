#include <doctest.h>

#include <cmath>
#include <functional>

#include "binn/analytic.hpp"
#include "binn/assembly.hpp"
#include "binn/error.hpp"
#include "support.hpp"

using namespace binn;
using namespace binn::analytic;
using testing::rel_err;

namespace {

const Complex I(0.0, 1.0);

// Five-point Laplacian residual |lap p + k^2 p| relative to k^2 |p|.
double helmholtz_residual(const std::function<Complex(const Vec2&)>& p, const Vec2& x, double k) {
  const double h = 1e-4;
  const Complex lap = (p(x + Vec2(h, 0)) + p(x - Vec2(h, 0)) + p(x + Vec2(0, h)) + p(x - Vec2(0, h)) - 4.0 * p(x)) / (h * h);
  return std::abs(lap + k * k * p(x)) / (k * k * std::abs(p(x)));
}

}  // namespace

TEST_SUITE("analytic") {
  TEST_CASE("interior plane-wave field") {
    const FieldValue v = case1_exact({1.5, 0.75}, 2.0);
    CHECK(v.p.real() == doctest::Approx(-0.989992496600445).epsilon(1e-15));
    CHECK(v.p.imag() == doctest::Approx(0.997494986604054).epsilon(1e-15));
    const FieldValue o = case1_exact({0, 0}, 3.3);
    CHECK(o.p == Complex(1.0, 0.0));
    const FieldValue g = case1_exact({0, 0}, 2.0);
    CHECK(g.grad[0] == Complex(0.0, 0.0));
    CHECK(g.grad[1] == Complex(0.0, 2.0));
  }

  TEST_CASE("medium") {
    const AcousticMedium m{1.2, 341.0, 2.0};
    CHECK(m.omega() == 682.0);
    CHECK_NOTHROW(validate(m));
    CHECK_THROWS_AS(validate(AcousticMedium{1.2, 341.0, 0.0}), DomainError);
    CHECK_THROWS_AS(validate(AcousticMedium{-1.0, 341.0, 1.0}), DomainError);
  }

  TEST_CASE("pulsating cylinder") {
    const AcousticMedium m{1.2, 341.0, 1.0};
    const RadialValue s = pulsating_exact(1.0, m, 1.0, 1.0);
    const Complex expected = 409.2 * I * Complex(0.765197686557967, 0.088256964215677) /
                             Complex(0.440050585744934, -0.781212821300289);
    CHECK(rel_err(s.p, expected) <= 1e-13);
    for (double k : {0.3, 1.0, 4.0}) {
      const AcousticMedium mk{1.2, 341.0, k};
      const RadialValue v = pulsating_exact(2.5, mk, 2.5, 0.7);
      CHECK(rel_err(v.dp_dr, -I * 1.2 * mk.omega() * 0.7) <= 1e-14);
    }
    const double ratio = std::abs(pulsating_exact(100.0, m, 1.0, 1.0).p) / std::abs(pulsating_exact(25.0, m, 1.0, 1.0).p);
    CHECK(std::abs(ratio - 0.5) <= 0.01);
    CHECK_THROWS_AS(pulsating_exact(0.9, m, 1.0, 1.0), DomainError);
    const double h = 1e-6;
    const Complex fd = (pulsating_exact(1.7 + h, m, 1.0, 1.0).p - pulsating_exact(1.7 - h, m, 1.0, 1.0).p) / (2 * h);
    CHECK(rel_err(pulsating_exact(1.7, m, 1.0, 1.0).dp_dr, fd) <= 1e-8);
  }

  TEST_CASE("rigid-cylinder scattering series") {
    CHECK(neumann_symbol(0) == 1.0);
    CHECK(neumann_symbol(1) == 2.0);
    CHECK(neumann_symbol(7) == 2.0);
    for (double t : {0.3, 1.1, 2.9}) {
      const Complex a = scattering_exact(1.6, t, 3.0, 1.0).p;
      const Complex b = scattering_exact(1.6, -t, 3.0, 1.0).p;
      CHECK(a == b);
    }
    const ScatteringValue v = scattering_exact(2.0, 0.0, 0.5, 1.0);
    CHECK(v.converged);
    const ScatteringValue ref = scattering_series(2.0, 0.0, 0.5, 1.0, 3 * v.terms);
    CHECK(rel_err(v.p, ref.p) <= 1e-12);
    CHECK_THROWS_AS(scattering_exact(0.5, 0.0, 1.0, 1.0), DomainError);
    const ScatteringValue truncated = scattering_series(1.0, 0.0, 10.0, 1.0, 3);
    CHECK(scattering_exact(1.0, 0.0, 10.0, 1.0).terms > truncated.terms);
  }

  TEST_CASE("scattered field cancels the incident normal velocity on the cylinder") {
    for (double k : {0.5, 5.0, 10.0}) {
      const PlaneWave w{1.0, Vec2(1, 0), k};
      for (double t : {0.0, 0.8, 2.0, 3.1}) {
        const Vec2 x(std::cos(t), std::sin(t));
        const Complex inc = plane_wave_trace(w, x, x).q;
        const Complex sc = scattering_exact(1.0, t, k, 1.0).dp_dr;
        CHECK(std::abs(sc + inc) <= 1e-8 * std::abs(inc) + 1e-12);
      }
    }
  }

  TEST_CASE("analytic fields satisfy the Helmholtz equation") {
    const AcousticMedium m{1.2, 341.0, 1.3};
    const auto pulsating = [&](const Vec2& x) { return pulsating_exact(x.norm(), m, 1.0, 1.0).p; };
    const auto scattered = [](const Vec2& x) {
      return scattering_exact(x.norm(), std::atan2(x.y(), x.x()), 2.0, 1.0).p;
    };
    const auto interior = [](const Vec2& x) { return case1_exact(x, 2.0).p; };
    for (const Vec2& x : {Vec2(1.3, 0.4), Vec2(-2.0, 1.5), Vec2(0.2, -3.1)}) {
      CHECK(helmholtz_residual(pulsating, x, 1.3) <= 1e-4);
      CHECK(helmholtz_residual(scattered, x, 2.0) <= 1e-4);
    }
    CHECK(helmholtz_residual(interior, {0.7, 0.6}, 2.0) <= 1e-4);
  }

  TEST_CASE("radiated fields decay like one over root r") {
    const AcousticMedium m{1.2, 341.0, 1.0};
    for (double r : {10.0, 100.0, 1000.0}) {
      CHECK(std::abs(std::sqrt(r) * pulsating_exact(r, m, 1.0, 1.0).p) <= 409.2 * 2.0);
      CHECK(std::abs(std::sqrt(r) * scattering_exact(r, 0.4, 1.0, 1.0).p) <= 5.0);
    }
  }
}
