#include "binn/solver.hpp"

#include <Eigen/LU>
#include <chrono>
#include <cmath>
#include <limits>

#include "binn/optim.hpp"

namespace binn {

std::string_view to_string(LossKind kind) { return kind == LossKind::plain ? "plain" : "composite"; }

LossKind loss_kind_from_string(std::string_view name) {
  if (name == "plain") return LossKind::plain;
  if (name == "composite") return LossKind::composite;
  throw ConfigError("unknown loss kind '" + std::string(name) + "'");
}

namespace {

Complex head_value(const PointOutput& o) { return {o.value[0], o.value[1]}; }

Complex head_normal_derivative(const PointOutput& o, const Vec2& n) {
  return {o.grad[0][0] * n.x() + o.grad[0][1] * n.y(), o.grad[1][0] * n.x() + o.grad[1][1] * n.y()};
}

}  // namespace

BoundaryVectors network_vectors(const Mlp& model, const BoundaryData& data) {
  const std::vector<PointOutput> out = model.evaluate_batch(data.points);
  const auto n = static_cast<Eigen::Index>(data.size());
  BoundaryVectors v{ComplexVector(n), ComplexVector(n)};
  for (Eigen::Index m = 0; m < n; ++m) {
    const auto u = static_cast<std::size_t>(m);
    v.p[m] = head_value(out[u]);
    v.q[m] = head_normal_derivative(out[u], data.normals[u]);
  }
  return v;
}

BoundaryVectors boundary_vectors(const Mlp& model, const BoundaryData& data) {
  BoundaryVectors v = network_vectors(model, data);
  for (std::size_t m = 0; m < data.size(); ++m) {
    const auto i = static_cast<Eigen::Index>(m);
    if (data.p[m]) v.p[i] = *data.p[m];
    if (data.q[m]) v.q[i] = *data.q[m];
  }
  return v;
}

namespace {

void check_residual(const ComplexVector& r) {
  for (Eigen::Index m = 0; m < r.size(); ++m) {
    if (!std::isfinite(r[m].real()) || !std::isfinite(r[m].imag())) {
      throw LossError("non-finite boundary integral residual", static_cast<std::size_t>(m));
    }
  }
}

}  // namespace

double loss_plain(const ComplexVector& p, const ComplexVector& q, const InfluenceMatrices& matrices) {
  if (p.size() != matrices.size() || q.size() != matrices.size()) {
    throw ConfigError("boundary vectors do not match the influence matrices");
  }
  const ComplexVector r = matrices.H * p - matrices.G * q;
  check_residual(r);
  return r.squaredNorm() / static_cast<double>(r.size());
}

double loss_composite(const Mlp& model, const BoundaryData& data, const InfluenceMatrices& matrices) {
  const BinnObjective objective(data, matrices, LossKind::composite);
  return objective.evaluate(model, {});
}

BinnObjective::BinnObjective(const BoundaryData& data, const InfluenceMatrices& matrices, LossKind kind)
    : kind_(kind), data_(&data), size_(data.size()) {
  if (static_cast<Eigen::Index>(size_) != matrices.size()) {
    throw ConfigError("boundary data do not match the influence matrices");
  }
  const bool composite = kind == LossKind::composite;
  const auto n = static_cast<Eigen::Index>(size_);
  constant_ = ComplexVector::Zero(n);
  std::vector<Eigen::Index> net_index(size_, -1);
  for (std::size_t m = 0; m < size_; ++m) {
    if (composite || !data.p[m] || !data.q[m]) {
      net_index[m] = static_cast<Eigen::Index>(net_points_.size());
      net_points_.push_back(m);
      net_coords_.push_back(data.points[m]);
    }
    const auto col = static_cast<Eigen::Index>(m);
    if (composite || !data.p[m]) {
      p_cols_.push_back(m);
      unknown_p_.push_back(net_index[m]);
    } else {
      constant_ += matrices.H.col(col) * *data.p[m];
    }
    if (composite || !data.q[m]) {
      q_cols_.push_back(m);
      unknown_q_.push_back(net_index[m]);
    } else {
      constant_ -= matrices.G.col(col) * *data.q[m];
    }
  }
  h_unknown_.resize(n, static_cast<Eigen::Index>(p_cols_.size()));
  for (std::size_t j = 0; j < p_cols_.size(); ++j) {
    h_unknown_.col(static_cast<Eigen::Index>(j)) = matrices.H.col(static_cast<Eigen::Index>(p_cols_[j]));
  }
  g_unknown_.resize(n, static_cast<Eigen::Index>(q_cols_.size()));
  for (std::size_t j = 0; j < q_cols_.size(); ++j) {
    g_unknown_.col(static_cast<Eigen::Index>(j)) = matrices.G.col(static_cast<Eigen::Index>(q_cols_[j]));
  }
}

double BinnObjective::evaluate(const Mlp& model, std::span<double> gradient) const {
  const BoundaryData& data = *data_;
  const std::vector<PointOutput> out = model.evaluate_batch(net_coords_);

  ComplexVector pu(static_cast<Eigen::Index>(p_cols_.size()));
  for (std::size_t j = 0; j < p_cols_.size(); ++j) {
    pu[static_cast<Eigen::Index>(j)] = head_value(out[static_cast<std::size_t>(unknown_p_[j])]);
  }
  ComplexVector qu(static_cast<Eigen::Index>(q_cols_.size()));
  for (std::size_t j = 0; j < q_cols_.size(); ++j) {
    qu[static_cast<Eigen::Index>(j)] =
        head_normal_derivative(out[static_cast<std::size_t>(unknown_q_[j])], data.normals[q_cols_[j]]);
  }

  ComplexVector r = constant_;
  r.noalias() += h_unknown_ * pu;
  r.noalias() -= g_unknown_ * qu;
  check_residual(r);
  const double inv_m = 1.0 / static_cast<double>(size_);
  double loss = r.squaredNorm() * inv_m;

  std::vector<PointAdjoint> adjoints(net_points_.size());
  if (kind_ == LossKind::composite) {
    const std::size_t nd = data.dirichlet_count();
    const std::size_t nn = data.neumann_count();
    for (std::size_t m = 0; m < size_; ++m) {
      // composite mode: every point is a network point, in collocation order
      if (data.p[m]) {
        const Complex d = head_value(out[m]) - *data.p[m];
        loss += std::norm(d) / static_cast<double>(nd);
        adjoints[m].value[0] += 2.0 * d.real() / static_cast<double>(nd);
        adjoints[m].value[1] += 2.0 * d.imag() / static_cast<double>(nd);
      }
      if (data.q[m]) {
        const Vec2& n = data.normals[m];
        const Complex d = head_normal_derivative(out[m], n) - *data.q[m];
        loss += std::norm(d) / static_cast<double>(nn);
        const double wr = 2.0 * d.real() / static_cast<double>(nn);
        const double wi = 2.0 * d.imag() / static_cast<double>(nn);
        adjoints[m].grad[0][0] += wr * n.x();
        adjoints[m].grad[0][1] += wr * n.y();
        adjoints[m].grad[1][0] += wi * n.x();
        adjoints[m].grad[1][1] += wi * n.y();
      }
    }
  }
  if (!std::isfinite(loss)) throw LossError("non-finite loss", 0);
  if (gradient.empty()) return loss;

  const ComplexVector ap = (2.0 * inv_m) * (h_unknown_.adjoint() * r);
  const ComplexVector aq = (-2.0 * inv_m) * (g_unknown_.adjoint() * r);
  for (std::size_t j = 0; j < p_cols_.size(); ++j) {
    auto& a = adjoints[static_cast<std::size_t>(unknown_p_[j])];
    const Complex v = ap[static_cast<Eigen::Index>(j)];
    a.value[0] += v.real();
    a.value[1] += v.imag();
  }
  for (std::size_t j = 0; j < q_cols_.size(); ++j) {
    auto& a = adjoints[static_cast<std::size_t>(unknown_q_[j])];
    const Complex v = aq[static_cast<Eigen::Index>(j)];
    const Vec2& n = data.normals[q_cols_[j]];
    a.grad[0][0] += v.real() * n.x();
    a.grad[0][1] += v.real() * n.y();
    a.grad[1][0] += v.imag() * n.x();
    a.grad[1][1] += v.imag() * n.y();
  }
  const std::vector<double> g = model.gradient_batch(net_coords_, adjoints);
  std::copy(g.begin(), g.end(), gradient.begin());
  return loss;
}

TrainResult train(Mlp model, const BoundaryData& data, const InfluenceMatrices& matrices, const TrainConfig& config) {
  if (config.max_iterations < 0) throw ConfigError("max_iterations must be non-negative");
  if (config.log_stride < 1) throw ConfigError("log_stride must be positive");
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  const BinnObjective objective(data, matrices, config.loss);
  TrainResult result;
  if (config.max_iterations == 0) {
    result.final_loss = objective.evaluate(model, {});
    result.history.iterations.push_back(0);
    result.history.loss.push_back(result.final_loss);
    result.history.seconds.push_back(elapsed());
    result.model = std::move(model);
    return result;
  }

  const double data_scale = data.scale(matrices.k);
  if (config.scale_outputs) model.set_output_scale(data_scale);
  // optimise a dimensionless loss so step sizes do not depend on units
  const double normalise = 1.0 / (data_scale * data_scale);

  Mlp work = model;
  const optim::Objective f = [&](std::span<const double> theta, std::span<double> grad) {
    work.set_parameters(theta);
    const double v = objective.evaluate(work, grad);
    for (double& g : grad) g *= normalise;
    return v * normalise;
  };

  const std::size_t n = model.parameter_count();
  std::vector<double> theta(model.parameters().begin(), model.parameters().end());
  std::vector<double> grad(n);
  double value = f(theta, grad);
  const double initial = value;

  std::vector<double> best = theta;
  double best_value = value;
  TrainHistory& history = result.history;
  auto log = [&](int it, double v) {
    history.iterations.push_back(it);
    history.loss.push_back(v / normalise);
    history.seconds.push_back(elapsed());
  };
  log(0, value);

  optim::Adam adam(n, {config.learning_rate, 0.9, 0.999, 1e-8});
  optim::Bfgs bfgs(n);
  int diverged_logs = 0;
  int it = 1;
  for (; it <= config.max_iterations; ++it) {
    const bool use_adam = !config.polish || it <= config.adam_iterations;
    if (use_adam) {
      adam.step(theta, grad);
      value = f(theta, grad);
    } else if (bfgs.step(f, theta, value, grad) == optim::Bfgs::Status::stalled) {
      break;
    }
    if (value < best_value) {
      best_value = value;
      best = theta;
    }
    if (it % config.log_stride == 0 || it == config.max_iterations) {
      log(it, value);
      diverged_logs = value > 1e6 * initial ? diverged_logs + 1 : 0;
      if (diverged_logs >= 100) throw DivergenceError("training diverged", history);
    }
  }
  result.iterations = std::min(it, config.max_iterations);
  if (history.iterations.back() != result.iterations) log(result.iterations, value);

  model.set_parameters(best);
  result.final_loss = best_value / normalise;
  result.model = std::move(model);
  return result;
}

BoundaryVectors oracle_solve(const BoundaryData& data, const InfluenceMatrices& matrices) {
  const auto n = static_cast<Eigen::Index>(data.size());
  if (n != matrices.size()) throw ConfigError("boundary data do not match the influence matrices");
  ComplexMatrix a(n, n);
  ComplexVector rhs = ComplexVector::Zero(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const auto u = static_cast<std::size_t>(m);
    if (data.p[u].has_value() == data.q[u].has_value()) {
      throw SpecificationError("direct solve needs exactly one unknown at collocation point " + std::to_string(u));
    }
    if (data.p[u]) {
      a.col(m) = -matrices.G.col(m);
      rhs -= matrices.H.col(m) * *data.p[u];
    } else {
      a.col(m) = matrices.H.col(m);
      rhs += matrices.G.col(m) * *data.q[u];
    }
  }
  const Eigen::PartialPivLU<ComplexMatrix> lu(a);
  const double rcond = std::isnan(lu.rcond()) ? 0.0 : lu.rcond();
  if (!(rcond >= kMinReciprocalCondition)) {
    throw SingularSystemError("boundary element system is numerically singular (reciprocal condition " +
                                  std::to_string(rcond) + "); wave number may be near a fictitious frequency",
                              rcond);
  }
  const ComplexVector x = lu.solve(rhs);
  BoundaryVectors v{ComplexVector(n), ComplexVector(n)};
  for (Eigen::Index m = 0; m < n; ++m) {
    const auto u = static_cast<std::size_t>(m);
    v.p[m] = data.p[u] ? *data.p[u] : x[m];
    v.q[m] = data.q[u] ? *data.q[u] : x[m];
  }
  return v;
}

}  // namespace binn
