#include "binn/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace binn::optim {

Adam::Adam(std::size_t n, AdamSettings settings) : s_(settings), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::span<double> x, std::span<const double> grad) {
  ++t_;
  const double c1 = 1.0 - std::pow(s_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(s_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < x.size(); ++i) {
    m_[i] = s_.beta1 * m_[i] + (1.0 - s_.beta1) * grad[i];
    v_[i] = s_.beta2 * v_[i] + (1.0 - s_.beta2) * grad[i] * grad[i];
    x[i] -= s_.learning_rate * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + s_.epsilon);
  }
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

struct Sample {
  double alpha;
  double f;
  double slope;
  std::vector<double> x;
  std::vector<double> g;
};

Sample evaluate(const Objective& objective, std::span<const double> x0, std::span<const double> d, double alpha) {
  Sample s;
  s.alpha = alpha;
  s.x.resize(x0.size());
  s.g.resize(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) s.x[i] = x0[i] + alpha * d[i];
  s.f = objective(s.x, s.g);
  s.slope = dot(s.g, d);
  return s;
}

// Minimiser of the cubic through (a, fa, da), (b, fb, db), safeguarded to
// the interior of [a, b].
double cubic_step(const Sample& a, const Sample& b) {
  const double d1 = a.slope + b.slope - 3.0 * (a.f - b.f) / (a.alpha - b.alpha);
  const double disc = d1 * d1 - a.slope * b.slope;
  const double lo = std::min(a.alpha, b.alpha);
  const double hi = std::max(a.alpha, b.alpha);
  double t = 0.5 * (lo + hi);
  if (disc >= 0.0 && std::isfinite(disc)) {
    const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
    const double denom = b.slope - a.slope + 2.0 * d2;
    if (denom != 0.0) {
      const double c = b.alpha - (b.alpha - a.alpha) * (b.slope + d2 - d1) / denom;
      if (std::isfinite(c)) t = c;
    }
  }
  const double margin = 0.1 * (hi - lo);
  return std::clamp(t, lo + margin, hi - margin);
}

}  // namespace

LineSearchResult wolfe_line_search(const Objective& objective, std::span<const double> x, double f,
                                   std::span<const double> g, std::span<const double> direction,
                                   double initial_step, double c1, double c2) {
  const double slope0 = dot(g, direction);
  LineSearchResult out;
  if (!(slope0 < 0.0)) return out;

  Sample prev{0.0, f, slope0, {x.begin(), x.end()}, {g.begin(), g.end()}};
  double alpha = initial_step;
  constexpr int kMaxBracket = 20;
  constexpr int kMaxZoom = 30;

  auto zoom = [&](Sample lo, Sample hi) {
    for (int it = 0; it < kMaxZoom; ++it) {
      const double a = cubic_step(lo, hi);
      Sample s = evaluate(objective, x, direction, a);
      if (!std::isfinite(s.f) || s.f > f + c1 * a * slope0 || s.f >= lo.f) {
        hi = std::move(s);
      } else {
        if (std::abs(s.slope) <= -c2 * slope0) return LineSearchResult{true, a, s.f, std::move(s.x), std::move(s.g)};
        if (s.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = std::move(s);
      }
      if (std::abs(hi.alpha - lo.alpha) < 1e-16 * std::max(1.0, lo.alpha)) break;
    }
    // accept the best sufficient-decrease point found, if any
    if (lo.alpha > 0.0 && lo.f < f) return LineSearchResult{true, lo.alpha, lo.f, std::move(lo.x), std::move(lo.g)};
    return LineSearchResult{};
  };

  for (int it = 0; it < kMaxBracket; ++it) {
    Sample s = evaluate(objective, x, direction, alpha);
    if (!std::isfinite(s.f)) {
      alpha = 0.5 * (prev.alpha + alpha);
      continue;
    }
    if (s.f > f + c1 * alpha * slope0 || (it > 0 && s.f >= prev.f)) return zoom(std::move(prev), std::move(s));
    if (std::abs(s.slope) <= -c2 * slope0) return LineSearchResult{true, alpha, s.f, std::move(s.x), std::move(s.g)};
    if (s.slope >= 0.0) return zoom(std::move(s), std::move(prev));
    prev = std::move(s);
    alpha *= 2.0;
  }
  return out;
}

Bfgs::Bfgs(std::size_t n) : n_(n) { reset(); }

void Bfgs::reset() {
  inv_hessian_.assign(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) inv_hessian_[i * n_ + i] = 1.0;
  fresh_ = true;
}

Bfgs::Status Bfgs::step(const Objective& objective, std::vector<double>& x, double& f, std::vector<double>& g) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<double> d(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      const double* row = inv_hessian_.data() + i * n_;
      double s = 0.0;
      for (std::size_t j = 0; j < n_; ++j) s -= row[j] * g[j];
      d[i] = s;
    }
    double initial = 1.0;
    if (fresh_) {
      const double gn = std::sqrt(dot(g, g));
      initial = gn > 0.0 ? std::min(1.0, 1.0 / gn) : 1.0;
    }
    LineSearchResult ls = wolfe_line_search(objective, x, f, g, d, initial);
    if (!ls.ok) {
      if (fresh_) return Status::stalled;
      reset();
      continue;
    }
    std::vector<double> s(n_);
    std::vector<double> y(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      s[i] = ls.x[i] - x[i];
      y[i] = ls.g[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-300) {
      if (fresh_) {
        // scale the initial inverse Hessian before the first update
        const double gamma = sy / dot(y, y);
        for (std::size_t i = 0; i < n_; ++i) inv_hessian_[i * n_ + i] = gamma;
        fresh_ = false;
      }
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      const double rho = 1.0 / sy;
      std::vector<double> hy(n_, 0.0);
      for (std::size_t i = 0; i < n_; ++i) {
        const double* row = inv_hessian_.data() + i * n_;
        double acc = 0.0;
        for (std::size_t j = 0; j < n_; ++j) acc += row[j] * y[j];
        hy[i] = acc;
      }
      const double yhy = dot(y, hy);
      const double coef = rho * rho * yhy + rho;
      for (std::size_t i = 0; i < n_; ++i) {
        double* row = inv_hessian_.data() + i * n_;
        for (std::size_t j = 0; j < n_; ++j) {
          row[j] += coef * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
        }
      }
    }
    x = std::move(ls.x);
    g = std::move(ls.g);
    f = ls.f;
    return Status::progressed;
  }
  return Status::stalled;
}

}  // namespace binn::optim
