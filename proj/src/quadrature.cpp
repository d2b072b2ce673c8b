#include "binn/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace binn::quadrature {

Rule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  Rule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

Rule gauss_log(int n) {
  if (n < 1) throw std::invalid_argument("gauss_log: n must be positive");
  // Discretise the measure -ln(t) dt on dyadic panels [2^-(p+1), 2^-p] where
  // the weight is smooth, then run the Stieltjes procedure on that discrete
  // measure to get the three-term recurrence of the orthogonal polynomials.
  const Rule panel = gauss_legendre(40);
  constexpr int kPanels = 64;
  std::vector<double> t;
  std::vector<double> w;
  t.reserve(panel.size() * kPanels);
  w.reserve(panel.size() * kPanels);
  for (int p = 0; p < kPanels; ++p) {
    const double b = std::ldexp(1.0, -p);
    const double a = 0.5 * b;
    for (std::size_t i = 0; i < panel.size(); ++i) {
      const double ti = a + 0.5 * (b - a) * (panel.nodes[i] + 1.0);
      t.push_back(ti);
      w.push_back(0.5 * (b - a) * panel.weights[i] * -std::log(ti));
    }
  }

  const std::size_t m = t.size();
  std::vector<double> prev(m, 0.0);
  std::vector<double> cur(m, 1.0);
  std::vector<double> alpha(static_cast<std::size_t>(n));
  std::vector<double> beta(static_cast<std::size_t>(n));
  double norm_prev = 1.0;
  for (int k = 0; k < n; ++k) {
    double norm = 0.0;
    double moment = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      norm += w[i] * cur[i] * cur[i];
      moment += w[i] * t[i] * cur[i] * cur[i];
    }
    const auto uk = static_cast<std::size_t>(k);
    alpha[uk] = moment / norm;
    beta[uk] = (k == 0) ? norm : norm / norm_prev;
    norm_prev = norm;
    for (std::size_t i = 0; i < m; ++i) {
      const double next = (t[i] - alpha[uk]) * cur[i] - (k == 0 ? 0.0 : beta[uk]) * prev[i];
      prev[i] = cur[i];
      cur[i] = next;
    }
  }

  // Golub-Welsch
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    jacobi(k, k) = alpha[static_cast<std::size_t>(k)];
    if (k + 1 < n) {
      const double off = std::sqrt(beta[static_cast<std::size_t>(k) + 1]);
      jacobi(k, k + 1) = off;
      jacobi(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  Rule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double v0 = eig.eigenvectors()(0, k);
    rule.nodes[static_cast<std::size_t>(k)] = eig.eigenvalues()(k);
    rule.weights[static_cast<std::size_t>(k)] = beta[0] * v0 * v0;
  }
  return rule;
}

const Rule& standard_rule() {
  static const Rule rule = gauss_legendre(kStandardPoints);
  return rule;
}

const Rule& log_rule() {
  static const Rule rule = gauss_log(kStandardPoints);
  return rule;
}

}  // namespace binn::quadrature
