#include "binn/assembly.hpp"

#include <cmath>
#include <string>

#include "binn/error.hpp"
#include "binn/quadrature.hpp"

namespace binn {

Complex kernel_G(const Vec2& x, const Vec2& y, double k) {
  const double r = (x - y).norm();
  if (r == 0.0) throw SingularEvaluationError("kernel_G evaluated at coincident points");
  return Complex(0.0, 0.25) * special::hankel01(k * r)[0];
}

Complex kernel_F(const Vec2& x, const Vec2& y, const Vec2& n_y, double k) {
  const Vec2 d = y - x;
  const double r = d.norm();
  if (r == 0.0) throw SingularEvaluationError("kernel_F evaluated at coincident points");
  return Complex(0.0, -0.25 * k) * special::hankel01(k * r)[1] * (d.dot(n_y) / r);
}

namespace {

// y(xi) = a + b xi + c xi^2 for the element's quadratic geometry.
struct Polynomial {
  Vec2 a;
  Vec2 b;
  Vec2 c;
};

Polynomial polynomial_form(const QuadraticElement& e) {
  return {e.nodes[1], 0.5 * (e.nodes[2] - e.nodes[0]), 0.5 * (e.nodes[0] + e.nodes[2]) - e.nodes[1]};
}

template <class Kernel>
void gauss_panel(const Vec2& x, const QuadraticElement& element, double lo, double hi,
                 const Kernel& kernel, ElementIntegrals& out) {
  const auto& rule = quadrature::standard_rule();
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (std::size_t g = 0; g < rule.size(); ++g) {
    const double xi = mid + half * rule.nodes[g];
    const ElementPoint p = element_point(element, xi);
    const Vec2 d = p.position - x;
    const double r = d.norm();
    const KernelValues kv = kernel(r, d.dot(p.normal) / r);
    const auto n = shape_functions(xi / element.alpha);
    const double w = rule.weights[g] * half * p.jacobian;
    for (std::size_t j = 0; j < 3; ++j) {
      out.g[j] += kv.g * (w * n[j]);
      out.f[j] += kv.f * (w * n[j]);
    }
  }
}

template <class Kernel>
void adaptive_panel(const Vec2& x, const QuadraticElement& element, double lo, double hi, int depth,
                    const Kernel& kernel, ElementIntegrals& out) {
  if (depth < kMaxSubdivision) {
    const Vec2 ya = element_point(element, lo).position;
    const Vec2 ym = element_point(element, 0.5 * (lo + hi)).position;
    const Vec2 yb = element_point(element, hi).position;
    const double length = (ym - ya).norm() + (yb - ym).norm();
    const double distance = std::min({(x - ya).norm(), (x - ym).norm(), (x - yb).norm()});
    if (distance < length) {
      const double mid = 0.5 * (lo + hi);
      adaptive_panel(x, element, lo, mid, depth + 1, kernel, out);
      adaptive_panel(x, element, mid, hi, depth + 1, kernel, out);
      return;
    }
  }
  gauss_panel(x, element, lo, hi, kernel, out);
}

}  // namespace

template <class Kernel>
ElementIntegrals integrate_regular(const Vec2& x, const QuadraticElement& element,
                                   const Kernel& kernel) {
  ElementIntegrals out;
  adaptive_panel(x, element, -1.0, 1.0, 0, kernel, out);
  return out;
}

template <class Kernel>
ElementIntegrals integrate_singular(int node, const QuadraticElement& element, const Kernel& kernel) {
  const Polynomial poly = polynomial_form(element);
  const double xi0 = element.functional_xi(node);
  const auto& gauss = quadrature::standard_rule();
  const auto& logq = quadrature::log_rule();
  ElementIntegrals out;

  // Distance vector computed in factored form, (xi - xi0)(b + c(xi + xi0)),
  // so that (y - x).n keeps full relative precision as y -> x.
  auto sample = [&](double xi, double& jac, KernelValues& kv) {
    const Vec2 tangent = poly.b + 2.0 * xi * poly.c;
    jac = tangent.norm();
    const Vec2 normal(tangent.y() / jac, -tangent.x() / jac);
    const Vec2 d = (xi - xi0) * (poly.b + (xi + xi0) * poly.c);
    const double r = d.norm();
    kv = kernel(r, d.dot(normal) / r);
  };

  for (const double side : {-1.0, 1.0}) {
    const double span = side > 0 ? 1.0 - xi0 : 1.0 + xi0;
    // integral_0^1 f(t) dt with xi = xi0 + side * span * t, dxi = span dt.
    // f = coef ln t + smooth: the first part uses the -ln t rule.
    for (std::size_t q = 0; q < logq.size(); ++q) {
      const double t = logq.nodes[q];
      const double xi = xi0 + side * span * t;
      double jac;
      KernelValues kv;
      sample(xi, jac, kv);
      const auto n = shape_functions(xi / element.alpha);
      const double w = -logq.weights[q] * span * jac;
      for (std::size_t j = 0; j < 3; ++j) {
        out.g[j] += kv.g_log * (w * n[j]);
        out.f[j] += kv.f_log * (w * n[j]);
      }
    }
    for (std::size_t g = 0; g < gauss.size(); ++g) {
      const double t = 0.5 * (gauss.nodes[g] + 1.0);
      const double xi = xi0 + side * span * t;
      double jac;
      KernelValues kv;
      sample(xi, jac, kv);
      const auto n = shape_functions(xi / element.alpha);
      const double lt = std::log(t);
      const double w = 0.5 * gauss.weights[g] * span * jac;
      for (std::size_t j = 0; j < 3; ++j) {
        out.g[j] += (kv.g - kv.g_log * lt) * (w * n[j]);
        out.f[j] += (kv.f - kv.f_log * lt) * (w * n[j]);
      }
    }
  }
  return out;
}

Complex integrate_regular(const Vec2& x, const QuadraticElement& element, KernelKind kind, int node,
                          double k) {
  const ElementIntegrals e = integrate_regular(x, element, HelmholtzKernel{k});
  const auto j = static_cast<std::size_t>(node);
  return kind == KernelKind::G ? e.g.at(j) : e.f.at(j);
}

Complex integrate_singular(int collocation_node, const QuadraticElement& element, KernelKind kind,
                           int node, double k) {
  const ElementIntegrals e = integrate_singular(collocation_node, element, HelmholtzKernel{k});
  const auto j = static_cast<std::size_t>(node);
  return kind == KernelKind::G ? e.g.at(j) : e.f.at(j);
}

namespace {

template <class Kernel>
void assemble_row(const BoundaryMesh& mesh, const Kernel& kernel, Eigen::Index m,
                  InfluenceMatrices& out) {
  const auto own = static_cast<std::size_t>(m) / 3;
  const int own_node = static_cast<int>(m % 3);
  const Vec2& x = mesh.points[static_cast<std::size_t>(m)];
  for (std::size_t i = 0; i < mesh.elements.size(); ++i) {
    const ElementIntegrals e = (i == own) ? integrate_singular(own_node, mesh.elements[i], kernel)
                                          : integrate_regular(x, mesh.elements[i], kernel);
    for (std::size_t j = 0; j < 3; ++j) {
      const auto col = static_cast<Eigen::Index>(3 * i + j);
      out.H(m, col) = e.f[j];
      out.G(m, col) = e.g[j];
    }
  }
  out.H(m, m) += 0.5;
}

void check_finite(const InfluenceMatrices& out) {
  for (Eigen::Index c = 0; c < out.H.cols(); ++c) {
    for (Eigen::Index r = 0; r < out.H.rows(); ++r) {
      if (!std::isfinite(std::abs(out.H(r, c))) || !std::isfinite(std::abs(out.G(r, c)))) {
        throw AssemblyError("non-finite influence entry at collocation point " + std::to_string(r) +
                            ", element " + std::to_string(c / 3) + " node " +
                            std::to_string(c % 3));
      }
    }
  }
}

}  // namespace

template <class Kernel>
InfluenceMatrices assemble_with(const BoundaryMesh& mesh, const Kernel& kernel, bool parallel) {
  const auto n = static_cast<Eigen::Index>(mesh.point_count());
  InfluenceMatrices out;
  out.H = ComplexMatrix::Zero(n, n);
  out.G = ComplexMatrix::Zero(n, n);
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (Eigen::Index m = 0; m < n; ++m) assemble_row(mesh, kernel, m, out);
  } else {
    for (Eigen::Index m = 0; m < n; ++m) assemble_row(mesh, kernel, m, out);
  }
  check_finite(out);
  return out;
}

InfluenceMatrices assemble(const BoundaryMesh& mesh, double k) {
  if (!(k > 0.0)) throw AssemblyError("wave number must be positive");
  InfluenceMatrices out = assemble_with(mesh, HelmholtzKernel{k}, true);
  out.k = k;
  return out;
}

InfluenceMatrices assemble_serial(const BoundaryMesh& mesh, double k) {
  if (!(k > 0.0)) throw AssemblyError("wave number must be positive");
  InfluenceMatrices out = assemble_with(mesh, HelmholtzKernel{k}, false);
  out.k = k;
  return out;
}

Trace plane_wave_trace(const PlaneWave& wave, const Vec2& x, const Vec2& n_x) {
  const Complex phase = std::exp(Complex(0.0, wave.k * wave.direction.dot(x)));
  const Complex p = wave.amplitude * phase;
  return {p, Complex(0.0, wave.k * wave.direction.dot(n_x)) * p};
}

#define BINN_INSTANTIATE(K)                                                                    \
  template ElementIntegrals integrate_regular<K>(const Vec2&, const QuadraticElement&,        \
                                                 const K&);                                    \
  template ElementIntegrals integrate_singular<K>(int, const QuadraticElement&, const K&);     \
  template InfluenceMatrices assemble_with<K>(const BoundaryMesh&, const K&, bool);

BINN_INSTANTIATE(HelmholtzKernel)
BINN_INSTANTIATE(LaplaceKernel)
BINN_INSTANTIATE(UnitKernel)

#undef BINN_INSTANTIATE

}  // namespace binn
