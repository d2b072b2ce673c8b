#pragma once

#include <functional>
#include <vector>

#include "binn/assembly.hpp"
#include "binn/problem.hpp"

namespace binn::benchmarks {

/// Analytic field on the acoustic domain, for error assessment.
using ExactField = std::function<Complex(const Vec2&)>;

/// 3 m x 1.5 m rectangle with lower-left corner at the origin.
inline constexpr double kRectWidth = 3.0;
inline constexpr double kRectHeight = 1.5;
inline const Vec2 kRectCenter{1.5, 0.75};

/// Dirichlet data p = cos(k x1) + i sin(k x2) on the whole rectangle.
ProblemSpec case1_problem(double k);
ExactField case1_field(double k);

/// Rigid left, top and bottom sides; p = sin x2 + i cos x2 on the right side.
ProblemSpec case2_problem(double k);

/// Cylinder of radius `radius` at the origin with uniform radial surface
/// velocity v_bar; q is the exact field derivative along the mesh normal.
ProblemSpec pulsating_problem(const AcousticMedium& medium, double radius, double v_bar);
ExactField pulsating_field(const AcousticMedium& medium, double radius, double v_bar);

/// Rigid cylinder hit by a unit plane wave along +x, posed for the
/// scattered field: q_s = -q_inc.
ProblemSpec scattering_problem(double k, double radius);
ExactField scattering_field(double k, double radius);

/// 30 equally spaced points on x2 = 0.75 m, x1 = 0.05, 0.15, ..., 2.95.
std::vector<Vec2> case1_line();

/// Cell-centred nx x ny lattice over the rectangle interior.
std::vector<Vec2> rectangle_grid(int nx, int ny);

/// Cell-centred 40 x 40 lattice over (-5, 5)^2 keeping points with r > radius.
std::vector<Vec2> pulsating_grid(double radius);

/// Polar lattice on inner < r < outer: n_angles x n_radii, radii cell-centred.
std::vector<Vec2> annulus_grid(double inner, double outer, int n_angles = 64, int n_radii = 16);

}  // namespace binn::benchmarks
