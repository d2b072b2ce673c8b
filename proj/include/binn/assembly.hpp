#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <numbers>

#include "binn/geometry.hpp"
#include "binn/special_functions.hpp"

namespace binn {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Values of a fundamental solution and its normal derivative at distance r.
///
/// `g_log` and `f_log` are the coefficients of ln(r) in G and F; the
/// singular quadrature integrates those parts with a logarithmic rule.
struct KernelValues {
  Complex g;
  Complex f;
  Complex g_log;
  Complex f_log;
};

/// Two-dimensional Helmholtz fundamental solution G = (i/4) H_0^{(1)}(kr)
/// and F = dG/dn(y).
struct HelmholtzKernel {
  double k;

  /// `cos_term` is ((y - x) . n_y) / r.
  KernelValues operator()(double r, double cos_term) const {
    const auto h = special::hankel01(k * r);
    constexpr double inv2pi = 0.5 / std::numbers::pi;
    const Complex i(0.0, 1.0);
    KernelValues v;
    v.g = 0.25 * i * h[0];
    v.f = -0.25 * i * k * h[1] * cos_term;
    v.g_log = -inv2pi * h[0].real();
    v.f_log = inv2pi * k * h[1].real() * cos_term;
    return v;
  }
};

/// Static (k -> 0) Laplace kernel G = -ln(r) / 2pi. Test hook only.
struct LaplaceKernel {
  KernelValues operator()(double r, double cos_term) const {
    constexpr double inv2pi = 0.5 / std::numbers::pi;
    return {-inv2pi * std::log(r), -inv2pi * cos_term / r, -inv2pi, 0.0};
  }
};

/// G = F = 1. Turns element integrals into integrals of N_j * J. Test hook only.
struct UnitKernel {
  KernelValues operator()(double, double) const { return {1.0, 1.0, 0.0, 0.0}; }
};

/// G(x, y) = (i/4) H_0^{(1)}(k|x - y|). Throws SingularEvaluationError for x == y.
Complex kernel_G(const Vec2& x, const Vec2& y, double k);

/// F(x, y) = dG/dn(y) = -(ik/4) H_1^{(1)}(kr) ((y - x) . n_y) / r.
Complex kernel_F(const Vec2& x, const Vec2& y, const Vec2& n_y, double k);

/// Integrals of G N_j(xi/alpha) J and F N_j(xi/alpha) J over one element for j = 0..2.
struct ElementIntegrals {
  std::array<Complex, 3> g{};
  std::array<Complex, 3> f{};
};

/// Maximum recursion depth of the near-singular element subdivision.
inline constexpr int kMaxSubdivision = 4;

/// Element integrals for a source point off the element. Sub-elements closer
/// to x than their own length are bisected, down to kMaxSubdivision levels,
/// before the 20-point Gauss rule is applied.
template <class Kernel>
ElementIntegrals integrate_regular(const Vec2& x, const QuadraticElement& element,
                                   const Kernel& kernel);

/// Element integrals when x is the element's own collocation node `node`.
/// The element is split at the node; on each side the ln(r) part goes to a
/// logarithmically weighted rule and the remainder to Gauss-Legendre.
template <class Kernel>
ElementIntegrals integrate_singular(int node, const QuadraticElement& element, const Kernel& kernel);

/// Single-entry views matching the per-node formulation.
enum class KernelKind { G, F };
Complex integrate_regular(const Vec2& x, const QuadraticElement& element, KernelKind kind, int node,
                          double k);
Complex integrate_singular(int collocation_node, const QuadraticElement& element, KernelKind kind,
                           int node, double k);

/// Dense influence matrices over the 3N collocation points.
///
/// H = 0.5 I + [integral of F N_j J], G = [integral of G N_j J], so that the
/// discretised boundary integral equation reads H p = G q.
struct InfluenceMatrices {
  ComplexMatrix H;
  ComplexMatrix G;
  double k = 0.0;

  Eigen::Index size() const { return H.rows(); }
};

/// OpenMP-parallel over rows.
InfluenceMatrices assemble(const BoundaryMesh& mesh, double k);
/// Row-by-row reference implementation; produces identical matrices.
InfluenceMatrices assemble_serial(const BoundaryMesh& mesh, double k);

/// Same assembly with an arbitrary kernel (test hooks, static limit).
template <class Kernel>
InfluenceMatrices assemble_with(const BoundaryMesh& mesh, const Kernel& kernel, bool parallel);

struct PlaneWave {
  Complex amplitude = 1.0;
  Vec2 direction = Vec2(1.0, 0.0);
  double k = 1.0;
};

struct Trace {
  Complex p;
  Complex q;
};

/// Incident pressure exp(i k d.x) and its derivative along n_x.
Trace plane_wave_trace(const PlaneWave& wave, const Vec2& x, const Vec2& n_x);

}  // namespace binn


