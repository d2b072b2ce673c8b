#include "binn/benchmarks.hpp"

#include <cmath>
#include <numbers>

namespace binn::benchmarks {

ProblemSpec case1_problem(double k) {
  ProblemSpec spec;
  spec.curve = BoundaryCurve::interior_rectangle(kRectWidth, kRectHeight, kRectCenter);
  spec.medium.k = k;
  SegmentCondition exact{ConditionKind::dirichlet,
                         [k](const Vec2& x, const Vec2&) { return analytic::case1_exact(x, k).p; }};
  spec.conditions.assign(4, exact);
  return spec;
}

ExactField case1_field(double k) {
  return [k](const Vec2& x) { return analytic::case1_exact(x, k).p; };
}

ProblemSpec case2_problem(double k) {
  ProblemSpec spec;
  spec.curve = BoundaryCurve::interior_rectangle(kRectWidth, kRectHeight, kRectCenter);
  spec.medium.k = k;
  SegmentCondition rigid{ConditionKind::neumann, [](const Vec2&, const Vec2&) { return Complex(0.0, 0.0); }};
  SegmentCondition driven{ConditionKind::dirichlet,
                          [](const Vec2& x, const Vec2&) { return Complex(std::sin(x.y()), std::cos(x.y())); }};
  // bottom, right, top, left
  spec.conditions = {rigid, driven, rigid, rigid};
  return spec;
}

ProblemSpec pulsating_problem(const AcousticMedium& medium, double radius, double v_bar) {
  ProblemSpec spec;
  spec.curve = BoundaryCurve::exterior_circle(radius, Vec2::Zero());
  spec.medium = medium;
  SegmentCondition velocity{ConditionKind::neumann, [=](const Vec2& x, const Vec2& n) {
                              const double r = x.norm();
                              const auto v = analytic::pulsating_exact(std::max(r, radius), medium, radius, v_bar);
                              return v.dp_dr * (x.dot(n) / r);
                            }};
  spec.conditions = {velocity};
  return spec;
}

ExactField pulsating_field(const AcousticMedium& medium, double radius, double v_bar) {
  return [=](const Vec2& x) { return analytic::pulsating_exact(x.norm(), medium, radius, v_bar).p; };
}

ProblemSpec scattering_problem(double k, double radius) {
  ProblemSpec spec;
  spec.curve = BoundaryCurve::exterior_circle(radius, Vec2::Zero());
  spec.medium.k = k;
  const PlaneWave wave{1.0, Vec2(1.0, 0.0), k};
  SegmentCondition rigid{ConditionKind::neumann,
                         [wave](const Vec2& x, const Vec2& n) { return -plane_wave_trace(wave, x, n).q; }};
  spec.conditions = {rigid};
  return spec;
}

ExactField scattering_field(double k, double radius) {
  return [=](const Vec2& x) {
    return analytic::scattering_exact(x.norm(), std::atan2(x.y(), x.x()), k, radius).p;
  };
}

std::vector<Vec2> case1_line() {
  std::vector<Vec2> pts;
  for (int i = 0; i < 30; ++i) pts.emplace_back(kRectWidth * (i + 0.5) / 30.0, 0.75);
  return pts;
}

std::vector<Vec2> rectangle_grid(int nx, int ny) {
  std::vector<Vec2> pts;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      pts.emplace_back(kRectWidth * (i + 0.5) / nx, kRectHeight * (j + 0.5) / ny);
    }
  }
  return pts;
}

std::vector<Vec2> pulsating_grid(double radius) {
  std::vector<Vec2> pts;
  constexpr int kCells = 40;
  for (int j = 0; j < kCells; ++j) {
    for (int i = 0; i < kCells; ++i) {
      const Vec2 x(-5.0 + 10.0 * (i + 0.5) / kCells, -5.0 + 10.0 * (j + 0.5) / kCells);
      if (x.norm() > radius) pts.push_back(x);
    }
  }
  return pts;
}

std::vector<Vec2> annulus_grid(double inner, double outer, int n_angles, int n_radii) {
  std::vector<Vec2> pts;
  for (int j = 0; j < n_radii; ++j) {
    const double r = inner + (outer - inner) * (j + 0.5) / n_radii;
    for (int i = 0; i < n_angles; ++i) {
      const double t = 2.0 * std::numbers::pi * i / n_angles;
      pts.emplace_back(r * std::cos(t), r * std::sin(t));
    }
  }
  return pts;
}

}  // namespace binn::benchmarks
