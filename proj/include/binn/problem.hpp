#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "binn/analytic.hpp"
#include "binn/geometry.hpp"

namespace binn {

enum class ConditionKind { dirichlet, neumann };

/// Prescribed value on one side of a boundary curve. `value` receives the
/// collocation point and the unit normal (pointing out of the acoustic domain).
struct SegmentCondition {
  ConditionKind kind = ConditionKind::dirichlet;
  std::function<Complex(const Vec2& x, const Vec2& n)> value;
};

/// Boundary value problem: curve, one condition per curve segment, medium.
struct ProblemSpec {
  BoundaryCurve curve;
  /// Indexed by segment id (rectangle: bottom, right, top, left; circle: 0).
  std::vector<std::optional<SegmentCondition>> conditions;
  AcousticMedium medium;
};

/// Per collocation point knowledge of p and q = dp/dn.
struct BoundaryData {
  std::vector<std::optional<Complex>> p;
  std::vector<std::optional<Complex>> q;
  std::vector<Vec2> points;
  std::vector<Vec2> normals;

  std::size_t size() const { return points.size(); }
  std::size_t dirichlet_count() const;
  std::size_t neumann_count() const;
  /// max(|known p|, |known q| / k), or 1 if nothing non-zero is prescribed.
  double scale(double k) const;
};

/// Evaluates the conditions at every collocation point. The complementary
/// quantity is left unknown. Throws SpecificationError if a segment that
/// carries elements has no condition.
BoundaryData encode_boundary(const BoundaryMesh& mesh, const ProblemSpec& spec);

}  // namespace binn
