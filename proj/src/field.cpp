#include "binn/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "binn/error.hpp"

namespace binn {

namespace {

double distance_to_element(const QuadraticElement& e, const Vec2& x) {
  constexpr int kSamples = 9;
  double best = std::numeric_limits<double>::infinity();
  double best_xi = 0.0;
  for (int s = 0; s < kSamples; ++s) {
    const double xi = -1.0 + 2.0 * s / (kSamples - 1);
    const double d = (element_point(e, xi).position - x).norm();
    if (d < best) {
      best = d;
      best_xi = xi;
    }
  }
  // Newton on (y(xi) - x) . y'(xi) = 0
  const Vec2 c = 0.5 * (e.nodes[0] + e.nodes[2]) - e.nodes[1];
  double xi = best_xi;
  for (int it = 0; it < 30; ++it) {
    const ElementPoint p = element_point(e, xi);
    const Vec2 d = p.position - x;
    const double f = d.dot(p.tangent);
    const double df = p.tangent.squaredNorm() + d.dot(2.0 * c);
    if (df <= 0.0) break;
    const double step = f / df;
    xi = std::clamp(xi - step, -1.0, 1.0);
    if (std::abs(step) < 1e-15) break;
  }
  return std::min(best, (element_point(e, xi).position - x).norm());
}

}  // namespace

double distance_to_boundary(const BoundaryMesh& mesh, const Vec2& x) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : mesh.elements) best = std::min(best, distance_to_element(e, x));
  return best;
}

bool in_domain(const BoundaryMesh& mesh, const Vec2& x) {
  // winding number of the boundary polygon around x
  constexpr int kSamples = 16;
  double angle = 0.0;
  Vec2 prev = element_point(mesh.elements.front(), -1.0).position - x;
  for (const auto& e : mesh.elements) {
    for (int s = 1; s <= kSamples; ++s) {
      const Vec2 cur = element_point(e, -1.0 + 2.0 * s / kSamples).position - x;
      angle += std::atan2(prev.x() * cur.y() - prev.y() * cur.x(), prev.dot(cur));
      prev = cur;
    }
  }
  const long winding = std::lround(angle / (2.0 * std::numbers::pi));
  return mesh.orientation == Orientation::counterclockwise ? winding == 1 : winding == 0;
}

namespace {

Complex represent(const Vec2& x, const ComplexVector& p, const ComplexVector& q, const BoundaryMesh& mesh,
                  double k) {
  const HelmholtzKernel kernel{k};
  Complex sum = 0.0;
  for (std::size_t i = 0; i < mesh.elements.size(); ++i) {
    const ElementIntegrals e = integrate_regular(x, mesh.elements[i], kernel);
    for (std::size_t j = 0; j < 3; ++j) {
      const auto col = static_cast<Eigen::Index>(3 * i + j);
      sum += e.g[j] * q[col] - e.f[j] * p[col];
    }
  }
  return sum;
}

void check_point(const Vec2& x, const BoundaryMesh& mesh) {
  if (distance_to_boundary(mesh, x) <= kMinBoundaryDistance || !in_domain(mesh, x)) {
    std::ostringstream msg;
    msg << "evaluation point (" << x.x() << ", " << x.y() << ") is not strictly inside the acoustic domain";
    throw DomainError(msg.str());
  }
}

void check_sizes(const ComplexVector& p, const ComplexVector& q, const BoundaryMesh& mesh) {
  const auto n = static_cast<Eigen::Index>(mesh.point_count());
  if (p.size() != n || q.size() != n) throw DomainError("boundary vectors do not match the mesh");
}

}  // namespace

Complex eval_field(const Vec2& x, const ComplexVector& p, const ComplexVector& q, const BoundaryMesh& mesh,
                   double k) {
  check_sizes(p, q, mesh);
  check_point(x, mesh);
  return represent(x, p, q, mesh, k);
}

std::vector<Complex> eval_field_batch(std::span<const Vec2> points, const ComplexVector& p,
                                      const ComplexVector& q, const BoundaryMesh& mesh, double k) {
  check_sizes(p, q, mesh);
  for (const Vec2& x : points) check_point(x, mesh);
  std::vector<Complex> out(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    out[u] = represent(points[u], p, q, mesh, k);
  }
  return out;
}

std::vector<Complex> eval_field_batch_serial(std::span<const Vec2> points, const ComplexVector& p,
                                             const ComplexVector& q, const BoundaryMesh& mesh, double k) {
  std::vector<Complex> out;
  out.reserve(points.size());
  for (const Vec2& x : points) out.push_back(eval_field(x, p, q, mesh, k));
  return out;
}

ComponentErrors relative_error(std::span<const Complex> numerical, std::span<const Complex> reference) {
  if (numerical.size() != reference.size() || numerical.empty()) {
    throw NormalizationError("relative error needs two non-empty vectors of equal length");
  }
  double num_re = 0.0;
  double num_im = 0.0;
  double den_re = 0.0;
  double den_im = 0.0;
  for (std::size_t i = 0; i < numerical.size(); ++i) {
    const Complex d = numerical[i] - reference[i];
    num_re += d.real() * d.real();
    num_im += d.imag() * d.imag();
    den_re += reference[i].real() * reference[i].real();
    den_im += reference[i].imag() * reference[i].imag();
  }
  if (den_re == 0.0 || den_im == 0.0) {
    throw NormalizationError("reference component is identically zero");
  }
  return {std::sqrt(num_re / den_re), std::sqrt(num_im / den_im)};
}

double relative_error_modulus(std::span<const Complex> numerical, std::span<const Complex> reference) {
  if (numerical.size() != reference.size() || numerical.empty()) {
    throw NormalizationError("relative error needs two non-empty vectors of equal length");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < numerical.size(); ++i) {
    num += std::norm(numerical[i] - reference[i]);
    den += std::norm(reference[i]);
  }
  if (den == 0.0) throw NormalizationError("reference vector is identically zero");
  return std::sqrt(num / den);
}

std::vector<ComponentErrors> pointwise_errors(std::span<const Complex> numerical,
                                              std::span<const Complex> reference) {
  if (numerical.size() != reference.size()) throw NormalizationError("length mismatch");
  double max_re = 0.0;
  double max_im = 0.0;
  for (const Complex& r : reference) {
    max_re = std::max(max_re, std::abs(r.real()));
    max_im = std::max(max_im, std::abs(r.imag()));
  }
  if (max_re == 0.0 || max_im == 0.0) throw NormalizationError("reference component is identically zero");
  std::vector<ComponentErrors> out(numerical.size());
  for (std::size_t i = 0; i < numerical.size(); ++i) {
    const Complex d = numerical[i] - reference[i];
    out[i] = {std::abs(d.real()) / max_re, std::abs(d.imag()) / max_im};
  }
  return out;
}

}  // namespace binn
