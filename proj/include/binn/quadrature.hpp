#pragma once

#include <vector>

namespace binn::quadrature {

/// One-dimensional quadrature rule: sum_i w_i f(x_i).
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1].
Rule gauss_legendre(int n);

/// n-point Gauss rule on [0, 1] for the weight -ln(t), i.e. it approximates
/// integral_0^1 f(t) (-ln t) dt exactly for polynomials f of degree < 2n.
Rule gauss_log(int n);

/// Cached 20-point Gauss-Legendre rule used for all regular element integrals.
const Rule& standard_rule();

/// Cached 20-point logarithmic rule used for weakly singular element integrals.
const Rule& log_rule();

inline constexpr int kStandardPoints = 20;

}  // namespace binn::quadrature
