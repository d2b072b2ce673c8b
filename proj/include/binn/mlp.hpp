#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "binn/geometry.hpp"

namespace binn {

enum class Activation { arctan, sigmoid, swish, softplus, tanh };

std::string_view to_string(Activation a);
/// Throws ConfigError for unknown names.
Activation activation_from_string(std::string_view name);
inline constexpr std::array<Activation, 5> kAllActivations = {
    Activation::arctan, Activation::sigmoid, Activation::swish, Activation::softplus, Activation::tanh};

/// sigma(z) with its first and second derivatives.
struct ActivationValue {
  double value;
  double d1;
  double d2;
};
ActivationValue activate(Activation a, double z);

/// Network output at one point: the two heads (Re p, Im p) and their
/// derivatives with respect to the two input coordinates, grad[head][coord].
struct PointOutput {
  std::array<double, 2> value{};
  std::array<std::array<double, 2>, 2> grad{};
};

/// Sensitivities of a scalar loss with respect to the entries of a PointOutput.
using PointAdjoint = PointOutput;

/// Fully connected network R^2 -> R^2 with a shared hidden trunk and two
/// affine output heads.
///
/// Parameters are stored flat, layer by layer: W_l (row-major, n_l x n_{l-1})
/// then b_l; the heads come last as a 2 x n_L matrix and 2 biases.
class Mlp {
 public:
  Mlp() = default;

  /// Glorot-uniform weights, zero biases. `layer_sizes` is [2, n_1, ..., n_L, 2].
  static Mlp init(std::vector<int> layer_sizes, Activation activation, std::uint64_t seed);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  Activation activation() const { return activation_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t parameter_count() const { return params_.size(); }
  std::span<const double> parameters() const { return params_; }
  std::span<double> parameters() { return params_; }
  void set_parameters(std::span<const double> values);

  /// Optional affine input map x -> (x - shift) * scale applied before the
  /// first layer. Identity by default.
  void set_input_scaling(const Vec2& shift, double scale);
  const Vec2& input_shift() const { return shift_; }
  double input_scale() const { return scale_; }

  /// Fixed factor multiplying both heads (not a trainable parameter).
  void set_output_scale(double scale);
  double output_scale() const { return out_scale_; }

  std::array<double, 2> forward(const Vec2& x) const;
  /// Outputs and exact input derivatives (forward-mode).
  PointOutput evaluate(const Vec2& x) const;

  /// Adds d(loss)/d(theta) to `gradient` for one point, given the loss
  /// sensitivities to that point's outputs and input derivatives.
  void accumulate_gradient(const Vec2& x, const PointAdjoint& adjoint, std::span<double> gradient) const;

  /// Batched evaluate; OpenMP-parallel over points.
  std::vector<PointOutput> evaluate_batch(std::span<const Vec2> points) const;
  std::vector<PointOutput> evaluate_batch_serial(std::span<const Vec2> points) const;

  /// Batched gradient. Points are grouped in fixed blocks whose partial sums
  /// are reduced in block order, so the result does not depend on the thread count.
  std::vector<double> gradient_batch(std::span<const Vec2> points,
                                     std::span<const PointAdjoint> adjoints) const;
  std::vector<double> gradient_batch_serial(std::span<const Vec2> points,
                                            std::span<const PointAdjoint> adjoints) const;

  void save(std::ostream& out) const;
  static Mlp load(std::istream& in);

  struct Trace;

 private:
  void trace_forward(const Vec2& x, Trace& trace) const;
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }

  std::vector<int> sizes_;
  std::vector<std::size_t> offsets_;  // start of each layer's W block (heads last)
  std::vector<double> params_;
  Activation activation_ = Activation::swish;
  std::uint64_t seed_ = 0;
  Vec2 shift_ = Vec2::Zero();
  double scale_ = 1.0;
  double out_scale_ = 1.0;

  void build_offsets();
};

/// Input derivatives d(Re p)/dx and d(Im p)/dx at x.
std::array<std::array<double, 2>, 2> input_gradient(const Mlp& model, const Vec2& x);

struct LossEvaluation {
  double value = 0.0;
  std::vector<PointAdjoint> adjoints;
};

/// Loss defined on the network outputs (values and input derivatives) at a point set.
using LossEvaluator = std::function<LossEvaluation(std::span<const PointOutput>)>;

struct GradientResult {
  double loss = 0.0;
  std::vector<double> gradient;
};

/// d(loss)/d(theta) for every weight and bias. Throws LossError naming the
/// first point whose output or sensitivity is not finite.
GradientResult parameter_gradient(const Mlp& model, std::span<const Vec2> points,
                                  const LossEvaluator& loss);

}  // namespace binn
