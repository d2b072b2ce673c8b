#include <doctest.h>

#include <cmath>

#include "binn/benchmarks.hpp"
#include "binn/error.hpp"
#include "binn/field.hpp"
#include "binn/solver.hpp"
#include "support.hpp"

using namespace binn;
using testing::rel_err;

namespace {

struct Solved {
  BoundaryMesh mesh;
  BoundaryVectors v;
  double k;
};

Solved solve(const ProblemSpec& spec, int elements) {
  Solved s{build_mesh(spec.curve, elements), {}, spec.medium.k};
  const BoundaryData d = encode_boundary(s.mesh, spec);
  s.v = oracle_solve(d, assemble(s.mesh, s.k));
  return s;
}

double field_error(const ProblemSpec& spec, const benchmarks::ExactField& exact, int elements,
                   const std::vector<Vec2>& pts) {
  const Solved s = solve(spec, elements);
  const auto num = eval_field_batch(pts, s.v.p, s.v.q, s.mesh, s.k);
  std::vector<Complex> ref;
  for (const Vec2& x : pts) ref.push_back(exact(x));
  return relative_error_modulus(num, ref);
}

}  // namespace

TEST_SUITE("field") {
  TEST_CASE("interior point from the direct solution") {
    const Solved s = solve(benchmarks::case1_problem(2.0), 90);
    const Complex p = eval_field({1.5, 0.75}, s.v.p, s.v.q, s.mesh, 2.0);
    CHECK(rel_err(p, Complex(-0.989992496600445, 0.997494986604054)) <= 1e-5);
  }

  TEST_CASE("exterior point from exact boundary data") {
    const AcousticMedium medium{1.2, 341.0, 1.0};
    const BoundaryMesh mesh = build_mesh(BoundaryCurve::exterior_circle(1.0, {0, 0}), 50);
    const auto n = static_cast<Eigen::Index>(mesh.point_count());
    ComplexVector p(n), q(n);
    for (Eigen::Index m = 0; m < n; ++m) {
      const Vec2& x = mesh.points[m];
      const auto v = analytic::pulsating_exact(std::max(x.norm(), 1.0), medium, 1.0, 1.0);
      p[m] = v.p;
      q[m] = v.dp_dr * x.dot(mesh.normals[m]) / x.norm();
    }
    for (const Vec2& x : {Vec2(2, 0), Vec2(0, -2), Vec2(1.2, 1.6)}) {
      const Complex num = eval_field(x, p, q, mesh, 1.0);
      CHECK(rel_err(num, analytic::pulsating_exact(2.0, medium, 1.0, 1.0).p) <= 1e-5);
    }
  }

  TEST_CASE("representation formula is linear") {
    const Solved s = solve(benchmarks::case2_problem(2.0), 48);
    const ComplexVector p2 = 2.0 * s.v.p, q2 = 2.0 * s.v.q;
    for (const Vec2& x : {Vec2(0.4, 0.3), Vec2(2.2, 1.1)}) {
      CHECK(eval_field(x, p2, q2, s.mesh, 2.0) == 2.0 * eval_field(x, s.v.p, s.v.q, s.mesh, 2.0));
    }
  }

  TEST_CASE("points on or outside the boundary are rejected") {
    const Solved s = solve(benchmarks::case1_problem(2.0), 48);
    CHECK_THROWS_AS(eval_field(s.mesh.points[5], s.v.p, s.v.q, s.mesh, 2.0), DomainError);
    CHECK_THROWS_AS(eval_field({1.0, 0.0}, s.v.p, s.v.q, s.mesh, 2.0), DomainError);
    CHECK_THROWS_AS(eval_field({4.0, 0.5}, s.v.p, s.v.q, s.mesh, 2.0), DomainError);
    const BoundaryMesh circle = build_mesh(BoundaryCurve::exterior_circle(1.0, {0, 0}), 20);
    CHECK_FALSE(in_domain(circle, {0.2, 0.1}));
    CHECK(in_domain(circle, {3.0, 0.1}));
    CHECK(distance_to_boundary(s.mesh, {1.0, 0.25}) == doctest::Approx(0.25).epsilon(1e-12));
  }

  TEST_CASE("near-boundary evaluation") {
    const Solved s = solve(benchmarks::case1_problem(2.0), 90);
    for (double d : {0.05, 0.01, 0.002}) {
      const Vec2 x(1.23, d);
      const Complex num = eval_field(x, s.v.p, s.v.q, s.mesh, 2.0);
      CAPTURE(d);
      CHECK(rel_err(num, analytic::case1_exact(x, 2.0).p) <= 1e-4);
    }
  }

  TEST_CASE("field error converges at second order or better") {
    const auto line = benchmarks::case1_line();
    const double r1 = field_error(benchmarks::case1_problem(2.0), benchmarks::case1_field(2.0), 24, line);
    const double r2 = field_error(benchmarks::case1_problem(2.0), benchmarks::case1_field(2.0), 48, line);
    CHECK(std::log2(r1 / r2) >= 2.0);

    const AcousticMedium m{1.2, 341.0, 1.0};
    const std::vector<Vec2> ring = benchmarks::annulus_grid(1.5, 3.0, 16, 4);
    const double p1 = field_error(benchmarks::pulsating_problem(m, 1.0, 1.0), benchmarks::pulsating_field(m, 1.0, 1.0), 10, ring);
    const double p2 = field_error(benchmarks::pulsating_problem(m, 1.0, 1.0), benchmarks::pulsating_field(m, 1.0, 1.0), 20, ring);
    CHECK(std::log2(p1 / p2) >= 2.0);

    const double s1 = field_error(benchmarks::scattering_problem(1.0, 1.0), benchmarks::scattering_field(1.0, 1.0), 10, ring);
    const double s2 = field_error(benchmarks::scattering_problem(1.0, 1.0), benchmarks::scattering_field(1.0, 1.0), 20, ring);
    CHECK(std::log2(s1 / s2) >= 2.0);
  }

  TEST_CASE("batch evaluation matches the serial reference exactly") {
    const Solved s = solve(benchmarks::case1_problem(2.0), 48);
    const auto pts = benchmarks::rectangle_grid(12, 6);
    CHECK(eval_field_batch(pts, s.v.p, s.v.q, s.mesh, 2.0) == eval_field_batch_serial(pts, s.v.p, s.v.q, s.mesh, 2.0));
  }

  TEST_CASE("relative error metric") {
    const std::vector<Complex> a{{1, 2}, {-3, 0.5}, {0.2, -1}};
    const ComponentErrors zero = relative_error(a, a);
    CHECK(zero.re == 0.0);
    CHECK(zero.im == 0.0);
    std::vector<Complex> b;
    for (const Complex& z : a) b.push_back(1.01 * z);
    const ComponentErrors e = relative_error(b, a);
    CHECK(e.re == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(e.im == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(relative_error_modulus(b, a) == doctest::Approx(0.01).epsilon(1e-12));
    std::vector<Complex> sa, sb;
    for (std::size_t i = 0; i < a.size(); ++i) {
      sa.push_back(-7.5 * a[i]);
      sb.push_back(-7.5 * (a[i] + Complex(0.01 * i, -0.02)));
    }
    std::vector<Complex> c;
    for (std::size_t i = 0; i < a.size(); ++i) c.push_back(a[i] + Complex(0.01 * i, -0.02));
    CHECK(relative_error(sb, sa).re == doctest::Approx(relative_error(c, a).re).epsilon(1e-12));
    const std::vector<Complex> real_only{{1, 0}, {2, 0}};
    CHECK_THROWS_AS(relative_error(real_only, real_only), NormalizationError);
    CHECK_THROWS_AS(relative_error(std::vector<Complex>{}, std::vector<Complex>{}), NormalizationError);
    const auto pw = pointwise_errors(b, a);
    CHECK(pw[1].re == doctest::Approx(0.01).epsilon(1e-12));
  }
}
