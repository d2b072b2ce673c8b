#include "binn/problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "binn/error.hpp"

namespace binn {

std::size_t BoundaryData::dirichlet_count() const {
  return static_cast<std::size_t>(std::count_if(p.begin(), p.end(), [](const auto& v) { return v.has_value(); }));
}

std::size_t BoundaryData::neumann_count() const {
  return static_cast<std::size_t>(std::count_if(q.begin(), q.end(), [](const auto& v) { return v.has_value(); }));
}

double BoundaryData::scale(double k) const {
  double s = 0.0;
  for (const auto& v : p) {
    if (v) s = std::max(s, std::abs(*v));
  }
  for (const auto& v : q) {
    if (v) s = std::max(s, std::abs(*v) / k);
  }
  return s > 0.0 ? s : 1.0;
}

BoundaryData encode_boundary(const BoundaryMesh& mesh, const ProblemSpec& spec) {
  BoundaryData data;
  const std::size_t n = mesh.point_count();
  data.p.resize(n);
  data.q.resize(n);
  data.points = mesh.points;
  data.normals = mesh.normals;
  for (std::size_t m = 0; m < n; ++m) {
    const auto seg = static_cast<std::size_t>(mesh.point_segment(m));
    if (seg >= spec.conditions.size() || !spec.conditions[seg] || !spec.conditions[seg]->value) {
      throw SpecificationError("no boundary condition for segment " + std::to_string(seg));
    }
    const SegmentCondition& c = *spec.conditions[seg];
    const Complex v = c.value(mesh.points[m], mesh.normals[m]);
    if (c.kind == ConditionKind::dirichlet) {
      data.p[m] = v;
    } else {
      data.q[m] = v;
    }
  }
  return data;
}

}  // namespace binn
