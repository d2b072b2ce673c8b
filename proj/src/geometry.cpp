#include "binn/geometry.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>

#include "binn/error.hpp"
#include "binn/quadrature.hpp"

namespace binn {

BoundaryCurve BoundaryCurve::interior_rectangle(double width, double height, Vec2 center) {
  return {Rectangle{width, height, center}, Orientation::counterclockwise};
}

BoundaryCurve BoundaryCurve::interior_circle(double radius, Vec2 center) {
  return {Circle{radius, center}, Orientation::counterclockwise};
}

BoundaryCurve BoundaryCurve::exterior_circle(double radius, Vec2 center) {
  return {Circle{radius, center}, Orientation::clockwise};
}

std::array<double, 3> shape_functions(double xi) {
  return {0.5 * xi * (xi - 1.0), (1.0 - xi) * (1.0 + xi), 0.5 * xi * (xi + 1.0)};
}

std::array<double, 3> shape_derivatives(double xi) { return {xi - 0.5, -2.0 * xi, xi + 0.5}; }

ElementPoint element_point(const QuadraticElement& element, double xi) {
  const auto n = shape_functions(xi);
  const auto dn = shape_derivatives(xi);
  ElementPoint p;
  p.position = n[0] * element.nodes[0] + n[1] * element.nodes[1] + n[2] * element.nodes[2];
  p.tangent = dn[0] * element.nodes[0] + dn[1] * element.nodes[1] + dn[2] * element.nodes[2];
  p.jacobian = p.tangent.norm();
  if (p.jacobian < 1e-12) {
    throw GeometryError("degenerate element: jacobian " + std::to_string(p.jacobian) + " at xi " +
                        std::to_string(xi));
  }
  p.normal = Vec2(p.tangent.y(), -p.tangent.x()) / p.jacobian;
  return p;
}

Complex interpolate_nodal(const std::array<Complex, 3>& values, double xi, double alpha) {
  const auto n = shape_functions(xi / alpha);
  return n[0] * values[0] + n[1] * values[1] + n[2] * values[2];
}

double BoundaryMesh::perimeter() const {
  const auto& rule = quadrature::standard_rule();
  double total = 0.0;
  for (const auto& e : elements) {
    for (std::size_t g = 0; g < rule.size(); ++g) {
      total += rule.weights[g] * element_point(e, rule.nodes[g]).jacobian;
    }
  }
  return total;
}

namespace {

void append_element(BoundaryMesh& mesh, const QuadraticElement& element, int segment) {
  mesh.elements.push_back(element);
  mesh.segment.push_back(segment);
  for (int j = 0; j < 3; ++j) {
    const ElementPoint p = element_point(element, element.functional_xi(j));
    mesh.points.push_back(p.position);
    mesh.normals.push_back(p.normal);
  }
}

void mesh_rectangle(BoundaryMesh& mesh, const Rectangle& rect, int n_elements, Orientation dir) {
  const double perimeter = 2.0 * (rect.width + rect.height);
  const double per_width = n_elements * rect.width / perimeter;
  const double per_height = n_elements * rect.height / perimeter;
  const auto n_w = static_cast<int>(std::lround(per_width));
  const auto n_h = static_cast<int>(std::lround(per_height));
  if (std::abs(per_width - n_w) > 1e-9 || std::abs(per_height - n_h) > 1e-9 || n_w < 1 ||
      n_h < 1) {
    throw MeshError("cannot split " + std::to_string(n_elements) + " elements over a " +
                    std::to_string(rect.width) + " x " + std::to_string(rect.height) +
                    " rectangle in proportion to side length");
  }
  const Vec2 half(0.5 * rect.width, 0.5 * rect.height);
  // counterclockwise corners starting bottom-left
  std::array<Vec2, 4> corners = {rect.center + Vec2(-half.x(), -half.y()),
                                 rect.center + Vec2(half.x(), -half.y()),
                                 rect.center + Vec2(half.x(), half.y()),
                                 rect.center + Vec2(-half.x(), half.y())};
  const std::array<int, 4> counts = {n_w, n_h, n_w, n_h};
  // side s runs corners[s] -> corners[s+1]; segment ids: bottom, right, top, left
  for (int step = 0; step < 4; ++step) {
    int side;
    Vec2 a;
    Vec2 b;
    if (dir == Orientation::counterclockwise) {
      side = step;
      a = corners[static_cast<std::size_t>(side)];
      b = corners[static_cast<std::size_t>((side + 1) % 4)];
    } else {
      side = 3 - step;
      a = corners[static_cast<std::size_t>((side + 1) % 4)];
      b = corners[static_cast<std::size_t>(side)];
    }
    const int count = counts[static_cast<std::size_t>(side)];
    for (int i = 0; i < count; ++i) {
      const double t0 = static_cast<double>(i) / count;
      const double t1 = static_cast<double>(i + 1) / count;
      QuadraticElement e;
      e.alpha = mesh.alpha;
      e.nodes = {a + t0 * (b - a), a + 0.5 * (t0 + t1) * (b - a), a + t1 * (b - a)};
      append_element(mesh, e, side);
    }
  }
}

void mesh_circle(BoundaryMesh& mesh, const Circle& circle, int n_elements, Orientation dir) {
  const double sign = dir == Orientation::counterclockwise ? 1.0 : -1.0;
  const double step = sign * 2.0 * std::numbers::pi / n_elements;
  auto at = [&](double theta) {
    return Vec2(circle.center.x() + circle.radius * std::cos(theta),
                circle.center.y() + circle.radius * std::sin(theta));
  };
  for (int i = 0; i < n_elements; ++i) {
    const double t0 = i * step;
    QuadraticElement e;
    e.alpha = mesh.alpha;
    e.nodes = {at(t0), at(t0 + 0.5 * step), at(t0 + step)};
    append_element(mesh, e, 0);
  }
}

}  // namespace

BoundaryMesh build_mesh(const BoundaryCurve& curve, int n_elements, double alpha) {
  if (n_elements < 4) throw MeshError("a boundary mesh needs at least 4 elements");
  if (!(alpha > 0.0 && alpha < 1.0)) throw MeshError("alpha must lie in (0, 1)");
  BoundaryMesh mesh;
  mesh.alpha = alpha;
  mesh.orientation = curve.orientation;
  mesh.elements.reserve(static_cast<std::size_t>(n_elements));
  if (const auto* rect = std::get_if<Rectangle>(&curve.shape)) {
    if (!(rect->width > 0.0 && rect->height > 0.0)) throw MeshError("rectangle sides must be positive");
    mesh_rectangle(mesh, *rect, n_elements, curve.orientation);
  } else {
    const auto& circle = std::get<Circle>(curve.shape);
    if (!(circle.radius > 0.0)) throw MeshError("circle radius must be positive");
    mesh_circle(mesh, circle, n_elements, curve.orientation);
  }
  return mesh;
}

void write_mesh(std::ostream& out, const BoundaryMesh& mesh) {
  out << "# element y1x y1y y2x y2y y3x y3y c1x c1y c2x c2y c3x c3y n1x n1y n2x n2y n3x n3y\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < mesh.elements.size(); ++i) {
    out << i;
    for (const auto& y : mesh.elements[i].nodes) out << ' ' << y.x() << ' ' << y.y();
    for (std::size_t j = 0; j < 3; ++j) out << ' ' << mesh.points[3 * i + j].x() << ' ' << mesh.points[3 * i + j].y();
    for (std::size_t j = 0; j < 3; ++j) out << ' ' << mesh.normals[3 * i + j].x() << ' ' << mesh.normals[3 * i + j].y();
    out << '\n';
  }
}

}  // namespace binn
