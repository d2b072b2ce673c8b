#include "binn/mlp.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "binn/error.hpp"

namespace binn {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::arctan: return "arctan";
    case Activation::sigmoid: return "sigmoid";
    case Activation::swish: return "swish";
    case Activation::softplus: return "softplus";
    case Activation::tanh: return "tanh";
  }
  return "unknown";
}

Activation activation_from_string(std::string_view name) {
  for (Activation a : kAllActivations) {
    if (to_string(a) == name) return a;
  }
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

ActivationValue activate(Activation a, double z) {
  switch (a) {
    case Activation::arctan: {
      const double d = 1.0 / (1.0 + z * z);
      return {std::atan(z), d, -2.0 * z * d * d};
    }
    case Activation::sigmoid: {
      const double s = sigmoid(z);
      const double d1 = s * (1.0 - s);
      return {s, d1, d1 * (1.0 - 2.0 * s)};
    }
    case Activation::swish: {
      const double s = sigmoid(z);
      const double ds = s * (1.0 - s);
      return {z * s, s + z * ds, 2.0 * ds + z * ds * (1.0 - 2.0 * s)};
    }
    case Activation::softplus: {
      const double s = sigmoid(z);
      return {std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))), s, s * (1.0 - s)};
    }
    case Activation::tanh: {
      const double t = std::tanh(z);
      const double d1 = 1.0 - t * t;
      return {t, d1, -2.0 * t * d1};
    }
  }
  return {0.0, 0.0, 0.0};
}

void Mlp::build_offsets() {
  offsets_.clear();
  std::size_t offset = 0;
  for (std::size_t l = 1; l < sizes_.size(); ++l) {
    offsets_.push_back(offset);
    const auto rows = static_cast<std::size_t>(sizes_[l]);
    const auto cols = static_cast<std::size_t>(sizes_[l - 1]);
    offset += rows * cols + rows;
  }
  offsets_.push_back(offset);
}

Mlp Mlp::init(std::vector<int> layer_sizes, Activation activation, std::uint64_t seed) {
  if (layer_sizes.size() < 3) throw ConfigError("network needs at least one hidden layer");
  if (layer_sizes.front() != 2 || layer_sizes.back() != 2) {
    throw ConfigError("network maps 2 input coordinates to 2 output heads");
  }
  for (int s : layer_sizes) {
    if (s < 1) throw ConfigError("layer sizes must be positive");
  }
  Mlp m;
  m.sizes_ = std::move(layer_sizes);
  m.activation_ = activation;
  m.seed_ = seed;
  m.build_offsets();
  m.params_.assign(m.offsets_.back(), 0.0);

  std::mt19937_64 rng(seed);
  for (std::size_t l = 1; l < m.sizes_.size(); ++l) {
    const auto rows = static_cast<std::size_t>(m.sizes_[l]);
    const auto cols = static_cast<std::size_t>(m.sizes_[l - 1]);
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> dist(-limit, limit);
    double* w = m.params_.data() + m.offsets_[l - 1];
    for (std::size_t i = 0; i < rows * cols; ++i) w[i] = dist(rng);
  }
  return m;
}

void Mlp::set_parameters(std::span<const double> values) {
  if (values.size() != params_.size()) throw ConfigError("parameter vector has the wrong length");
  std::copy(values.begin(), values.end(), params_.begin());
}

void Mlp::set_input_scaling(const Vec2& shift, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("input scale must be positive");
  shift_ = shift;
  scale_ = scale;
}

// Activations of one point through the trunk with input tangents.
struct Mlp::Trace {
  // per hidden layer: z, sigma(z) and its derivatives, tangents dz/dx_d, da/dx_d
  std::vector<std::vector<double>> z, a, d1, d2;
  std::vector<std::array<std::vector<double>, 2>> zt, at;
};

void Mlp::set_output_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("output scale must be positive");
  out_scale_ = scale;
}

namespace {

Mlp::Trace& thread_trace() {
  thread_local Mlp::Trace t;
  return t;
}

}  // namespace

void Mlp::trace_forward(const Vec2& x, Trace& trace) const {
  const std::size_t hidden = sizes_.size() - 2;
  trace.z.resize(hidden + 1);
  trace.a.resize(hidden + 1);
  trace.d1.resize(hidden + 1);
  trace.d2.resize(hidden + 1);
  trace.zt.resize(hidden + 1);
  trace.at.resize(hidden + 1);
  trace.a[0] = {(x.x() - shift_.x()) * scale_, (x.y() - shift_.y()) * scale_};
  trace.at[0][0] = {scale_, 0.0};
  trace.at[0][1] = {0.0, scale_};
  for (std::size_t l = 1; l <= hidden; ++l) {
    const auto rows = static_cast<std::size_t>(sizes_[l]);
    const auto cols = static_cast<std::size_t>(sizes_[l - 1]);
    const double* w = params_.data() + offsets_[l - 1];
    const double* b = w + rows * cols;
    auto& z = trace.z[l];
    auto& a = trace.a[l];
    z.assign(rows, 0.0);
    a.resize(rows);
    trace.d1[l].resize(rows);
    trace.d2[l].resize(rows);
    for (int d = 0; d < 2; ++d) {
      trace.zt[l][d].assign(rows, 0.0);
      trace.at[l][d].resize(rows);
    }
    const auto& prev = trace.a[l - 1];
    for (std::size_t i = 0; i < rows; ++i) {
      double zi = b[i];
      double t0 = 0.0;
      double t1 = 0.0;
      for (std::size_t j = 0; j < cols; ++j) {
        const double wij = w[i * cols + j];
        zi += wij * prev[j];
        t0 += wij * trace.at[l - 1][0][j];
        t1 += wij * trace.at[l - 1][1][j];
      }
      const ActivationValue s = activate(activation_, zi);
      z[i] = zi;
      a[i] = s.value;
      trace.d1[l][i] = s.d1;
      trace.d2[l][i] = s.d2;
      trace.zt[l][0][i] = t0;
      trace.zt[l][1][i] = t1;
      trace.at[l][0][i] = s.d1 * t0;
      trace.at[l][1][i] = s.d1 * t1;
    }
  }
}

PointOutput Mlp::evaluate(const Vec2& x) const {
  Trace& trace = thread_trace();
  trace_forward(x, trace);
  const std::size_t last = sizes_.size() - 2;
  const auto width = static_cast<std::size_t>(sizes_[last]);
  const double* wh = params_.data() + offsets_[last];
  const double* bh = wh + 2 * width;
  PointOutput out;
  for (std::size_t k = 0; k < 2; ++k) {
    double v = bh[k];
    double g0 = 0.0;
    double g1 = 0.0;
    for (std::size_t i = 0; i < width; ++i) {
      v += wh[k * width + i] * trace.a[last][i];
      g0 += wh[k * width + i] * trace.at[last][0][i];
      g1 += wh[k * width + i] * trace.at[last][1][i];
    }
    out.value[k] = out_scale_ * v;
    out.grad[k] = {out_scale_ * g0, out_scale_ * g1};
  }
  return out;
}

std::array<double, 2> Mlp::forward(const Vec2& x) const { return evaluate(x).value; }

void Mlp::accumulate_gradient(const Vec2& x, const PointAdjoint& adj, std::span<double> gradient) const {
  Trace& trace = thread_trace();
  trace_forward(x, trace);
  const std::size_t last = sizes_.size() - 2;

  // heads
  std::vector<double> abar(static_cast<std::size_t>(sizes_[last]), 0.0);
  std::array<std::vector<double>, 2> atbar = {abar, abar};
  {
    const auto width = static_cast<std::size_t>(sizes_[last]);
    const double* wh = params_.data() + offsets_[last];
    double* gwh = gradient.data() + offsets_[last];
    double* gbh = gwh + 2 * width;
    for (std::size_t k = 0; k < 2; ++k) {
      const double ub = out_scale_ * adj.value[k];
      const double g0 = out_scale_ * adj.grad[k][0];
      const double g1 = out_scale_ * adj.grad[k][1];
      gbh[k] += ub;
      for (std::size_t i = 0; i < width; ++i) {
        gwh[k * width + i] += ub * trace.a[last][i] + g0 * trace.at[last][0][i] + g1 * trace.at[last][1][i];
        abar[i] += ub * wh[k * width + i];
        atbar[0][i] += g0 * wh[k * width + i];
        atbar[1][i] += g1 * wh[k * width + i];
      }
    }
  }

  std::vector<double> zbar;
  std::array<std::vector<double>, 2> ztbar;
  for (std::size_t l = last; l >= 1; --l) {
    const auto rows = static_cast<std::size_t>(sizes_[l]);
    const auto cols = static_cast<std::size_t>(sizes_[l - 1]);
    zbar.assign(rows, 0.0);
    ztbar[0].assign(rows, 0.0);
    ztbar[1].assign(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      const double d1 = trace.d1[l][i];
      const double d2 = trace.d2[l][i];
      zbar[i] = abar[i] * d1 + d2 * (atbar[0][i] * trace.zt[l][0][i] + atbar[1][i] * trace.zt[l][1][i]);
      ztbar[0][i] = atbar[0][i] * d1;
      ztbar[1][i] = atbar[1][i] * d1;
    }
    const double* w = params_.data() + offsets_[l - 1];
    double* gw = gradient.data() + offsets_[l - 1];
    double* gb = gw + rows * cols;
    const auto& prev = trace.a[l - 1];
    const auto& prev_t = trace.at[l - 1];
    for (std::size_t i = 0; i < rows; ++i) {
      gb[i] += zbar[i];
      for (std::size_t j = 0; j < cols; ++j) {
        gw[i * cols + j] += zbar[i] * prev[j] + ztbar[0][i] * prev_t[0][j] + ztbar[1][i] * prev_t[1][j];
      }
    }
    if (l == 1) break;
    abar.assign(cols, 0.0);
    atbar[0].assign(cols, 0.0);
    atbar[1].assign(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        const double wij = w[i * cols + j];
        abar[j] += wij * zbar[i];
        atbar[0][j] += wij * ztbar[0][i];
        atbar[1][j] += wij * ztbar[1][i];
      }
    }
  }
}

std::vector<PointOutput> Mlp::evaluate_batch(std::span<const Vec2> points) const {
  std::vector<PointOutput> out(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = evaluate(points[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<PointOutput> Mlp::evaluate_batch_serial(std::span<const Vec2> points) const {
  std::vector<PointOutput> out;
  out.reserve(points.size());
  for (const Vec2& x : points) out.push_back(evaluate(x));
  return out;
}

namespace {
constexpr std::size_t kGradientBlock = 16;
}

std::vector<double> Mlp::gradient_batch(std::span<const Vec2> points,
                                        std::span<const PointAdjoint> adjoints) const {
  const std::size_t blocks = (points.size() + kGradientBlock - 1) / kGradientBlock;
  std::vector<std::vector<double>> partial(blocks, std::vector<double>(params_.size(), 0.0));
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const auto ub = static_cast<std::size_t>(b);
    const std::size_t end = std::min(points.size(), (ub + 1) * kGradientBlock);
    for (std::size_t i = ub * kGradientBlock; i < end; ++i) {
      accumulate_gradient(points[i], adjoints[i], partial[ub]);
    }
  }
  std::vector<double> total(params_.size(), 0.0);
  for (const auto& p : partial) {
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += p[i];
  }
  return total;
}

std::vector<double> Mlp::gradient_batch_serial(std::span<const Vec2> points,
                                               std::span<const PointAdjoint> adjoints) const {
  std::vector<double> total(params_.size(), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) accumulate_gradient(points[i], adjoints[i], total);
  return total;
}

void Mlp::save(std::ostream& out) const {
  out << "binn-mlp 1\n";
  out << "activation " << to_string(activation_) << '\n';
  out << "layers";
  for (int s : sizes_) out << ' ' << s;
  out << '\n';
  out << "seed " << seed_ << '\n';
  out << std::setprecision(17);
  out << "input_shift " << shift_.x() << ' ' << shift_.y() << '\n';
  out << "input_scale " << scale_ << '\n';
  out << "output_scale " << out_scale_ << '\n';
  out << "parameters " << params_.size() << '\n';
  for (double p : params_) out << p << '\n';
}

Mlp Mlp::load(std::istream& in) {
  auto expect = [&](const std::string& key) {
    std::string word;
    if (!(in >> word) || word != key) throw ConfigError("model file: expected '" + key + "'");
  };
  expect("binn-mlp");
  int version = 0;
  in >> version;
  if (version != 1) throw ConfigError("model file: unsupported version");
  expect("activation");
  std::string act;
  in >> act;
  expect("layers");
  std::string line;
  std::getline(in, line);
  std::istringstream ls(line);
  std::vector<int> sizes;
  for (int s; ls >> s;) sizes.push_back(s);
  expect("seed");
  std::uint64_t seed = 0;
  in >> seed;
  Mlp m = init(sizes, activation_from_string(act), seed);
  expect("input_shift");
  double sx = 0.0;
  double sy = 0.0;
  in >> sx >> sy;
  expect("input_scale");
  double scale = 1.0;
  in >> scale;
  m.set_input_scaling(Vec2(sx, sy), scale);
  expect("output_scale");
  double out_scale = 1.0;
  in >> out_scale;
  m.set_output_scale(out_scale);
  expect("parameters");
  std::size_t count = 0;
  in >> count;
  if (count != m.parameter_count()) throw ConfigError("model file: parameter count mismatch");
  for (double& p : m.params_) {
    if (!(in >> p)) throw ConfigError("model file: truncated parameter list");
  }
  return m;
}

std::array<std::array<double, 2>, 2> input_gradient(const Mlp& model, const Vec2& x) {
  return model.evaluate(x).grad;
}

GradientResult parameter_gradient(const Mlp& model, std::span<const Vec2> points,
                                  const LossEvaluator& loss) {
  const std::vector<PointOutput> outputs = model.evaluate_batch(points);
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const auto& o = outputs[i];
    if (!std::isfinite(o.value[0] + o.value[1] + o.grad[0][0] + o.grad[0][1] + o.grad[1][0] + o.grad[1][1])) {
      throw LossError("non-finite network output", i);
    }
  }
  LossEvaluation eval = loss(outputs);
  if (eval.adjoints.size() != points.size()) throw ConfigError("loss returned wrong number of sensitivities");
  for (std::size_t i = 0; i < eval.adjoints.size(); ++i) {
    const auto& a = eval.adjoints[i];
    if (!std::isfinite(a.value[0] + a.value[1] + a.grad[0][0] + a.grad[0][1] + a.grad[1][0] + a.grad[1][1])) {
      throw LossError("non-finite loss sensitivity", i);
    }
  }
  if (!std::isfinite(eval.value)) throw LossError("non-finite loss", 0);
  return {eval.value, model.gradient_batch(points, eval.adjoints)};
}

}  // namespace binn
