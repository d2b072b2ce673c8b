#pragma once

#include <functional>
#include <span>
#include <vector>

namespace binn::optim {

/// Returns f(x) and writes grad f(x) into `grad`.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct AdamSettings {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adaptive-moment gradient descent with bias correction.
class Adam {
 public:
  Adam(std::size_t n, AdamSettings settings);
  void step(std::span<double> x, std::span<const double> grad);
  long steps() const { return t_; }

 private:
  AdamSettings s_;
  std::vector<double> m_;
  std::vector<double> v_;
  long t_ = 0;
};

/// Dense BFGS on the inverse Hessian with a strong-Wolfe line search.
class Bfgs {
 public:
  explicit Bfgs(std::size_t n);

  enum class Status { progressed, stalled };

  /// One quasi-Newton iteration from (x, f, g); on success all three are
  /// updated in place. `stalled` means no acceptable step was found even
  /// after resetting the curvature model.
  Status step(const Objective& objective, std::vector<double>& x, double& f, std::vector<double>& g);

  void reset();

 private:
  std::size_t n_;
  std::vector<double> inv_hessian_;  // row-major n x n
  bool fresh_ = true;
};

struct LineSearchResult {
  bool ok = false;
  double step = 0.0;
  double f = 0.0;
  std::vector<double> x;
  std::vector<double> g;
};

/// Strong-Wolfe line search (bracketing plus zoom with cubic interpolation).
LineSearchResult wolfe_line_search(const Objective& objective, std::span<const double> x, double f,
                                   std::span<const double> g, std::span<const double> direction,
                                   double initial_step, double c1 = 1e-4, double c2 = 0.9);

}  // namespace binn::optim
