#pragma once

#include <Eigen/Core>
#include <array>
#include <iosfwd>
#include <variant>
#include <vector>

#include "binn/special_functions.hpp"

namespace binn {

using Vec2 = Eigen::Vector2d;

/// Default offset of the functional nodes inside a discontinuous element.
/// Results are insensitive to its exact value within (0, 1).
inline constexpr double kDefaultAlpha = 0.8;

struct Rectangle {
  double width;
  double height;
  Vec2 center;
};

struct Circle {
  double radius;
  Vec2 center;
};

/// Direction of travel along the boundary. The acoustic domain always lies to
/// the left, so interior problems run counterclockwise and exterior problems
/// run clockwise around the obstacle.
enum class Orientation { counterclockwise, clockwise };

struct BoundaryCurve {
  std::variant<Rectangle, Circle> shape;
  Orientation orientation = Orientation::counterclockwise;

  static BoundaryCurve interior_rectangle(double width, double height, Vec2 center);
  static BoundaryCurve interior_circle(double radius, Vec2 center);
  static BoundaryCurve exterior_circle(double radius, Vec2 center);
};

/// Quadratic shape functions on [-1, 1] with nodes at -1, 0, +1.
std::array<double, 3> shape_functions(double xi);
std::array<double, 3> shape_derivatives(double xi);

/// Three-node curved element. Geometry nodes sit at xi = -1, 0, +1; the
/// functional (collocation) nodes at xi = -alpha, 0, +alpha.
struct QuadraticElement {
  std::array<Vec2, 3> nodes;
  double alpha = kDefaultAlpha;

  double functional_xi(int j) const { return (j - 1) * alpha; }
};

struct ElementPoint {
  Vec2 position;
  Vec2 tangent;  // dy/dxi
  double jacobian;
  Vec2 normal;  // unit, right of traversal
};

/// Position, tangent, Jacobian and outward normal at parametric coordinate xi.
/// Throws GeometryError if the element degenerates (|dy/dxi| < 1e-12).
ElementPoint element_point(const QuadraticElement& element, double xi);

/// Discontinuous interpolation N_j(xi / alpha) over the three nodal values.
Complex interpolate_nodal(const std::array<Complex, 3>& values, double xi, double alpha);

struct BoundaryMesh {
  std::vector<QuadraticElement> elements;
  /// Collocation points, 3 per element, element-major.
  std::vector<Vec2> points;
  std::vector<Vec2> normals;
  /// Which side of the curve each element belongs to (rectangle: 0 bottom,
  /// 1 right, 2 top, 3 left; circle: 0).
  std::vector<int> segment;
  double alpha = kDefaultAlpha;
  Orientation orientation = Orientation::counterclockwise;

  std::size_t element_count() const { return elements.size(); }
  std::size_t point_count() const { return points.size(); }
  int point_segment(std::size_t m) const { return segment[m / 3]; }
  /// Sum over elements of the integral of |J|.
  double perimeter() const;
};

/// Discretise a curve into discontinuous quadratic elements.
///
/// Rectangles distribute elements over the sides in proportion to side
/// length with equal element lengths within a side; corners are always
/// element endpoints. Throws MeshError when the split is not integral.
BoundaryMesh build_mesh(const BoundaryCurve& curve, int n_elements, double alpha = kDefaultAlpha);

/// One text record per element: 3 nodes, 3 collocation points, 3 normals.
void write_mesh(std::ostream& out, const BoundaryMesh& mesh);

}  // namespace binn
