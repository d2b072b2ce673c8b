#pragma once

#include <span>
#include <vector>

#include "binn/assembly.hpp"

namespace binn {

/// Shortest distance from x to the discretised boundary.
double distance_to_boundary(const BoundaryMesh& mesh, const Vec2& x);

/// True when x lies in the acoustic domain (left of the boundary traversal).
bool in_domain(const BoundaryMesh& mesh, const Vec2& x);

/// Minimum admissible distance between an evaluation point and the boundary.
inline constexpr double kMinBoundaryDistance = 1e-9;

/// Pressure at x from boundary data through the representation formula
/// p(x) = sum integral G q - sum integral F p, with the element quadrature of
/// the assembly (including near-boundary subdivision). Throws DomainError if x
/// is within kMinBoundaryDistance of the boundary or outside the domain.
Complex eval_field(const Vec2& x, const ComplexVector& p, const ComplexVector& q,
                   const BoundaryMesh& mesh, double k);

/// OpenMP-parallel over points.
std::vector<Complex> eval_field_batch(std::span<const Vec2> points, const ComplexVector& p,
                                      const ComplexVector& q, const BoundaryMesh& mesh, double k);
std::vector<Complex> eval_field_batch_serial(std::span<const Vec2> points, const ComplexVector& p,
                                             const ComplexVector& q, const BoundaryMesh& mesh,
                                             double k);

struct ComponentErrors {
  double re = 0.0;
  double im = 0.0;
};

/// ||Re(num - ref)|| / ||Re ref|| and the same for imaginary parts.
/// Throws NormalizationError if a reference component is identically zero.
ComponentErrors relative_error(std::span<const Complex> numerical, std::span<const Complex> reference);

/// ||num - ref|| / ||ref|| on complex moduli.
double relative_error_modulus(std::span<const Complex> numerical, std::span<const Complex> reference);

/// Per-point component errors scaled by the largest reference magnitude of
/// that component: |Re(num_i - ref_i)| / max_j |Re ref_j|, likewise for Im.
std::vector<ComponentErrors> pointwise_errors(std::span<const Complex> numerical,
                                              std::span<const Complex> reference);

}  // namespace binn
