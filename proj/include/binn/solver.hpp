#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "binn/assembly.hpp"
#include "binn/error.hpp"
#include "binn/mlp.hpp"
#include "binn/problem.hpp"

namespace binn {

struct BoundaryVectors {
  ComplexVector p;
  ComplexVector q;
};

/// Known values where prescribed, network values elsewhere:
/// p = Re head + i Im head, q = n . grad(Re head) + i n . grad(Im head).
BoundaryVectors boundary_vectors(const Mlp& model, const BoundaryData& data);

/// Network values at every point, prescribed data ignored.
BoundaryVectors network_vectors(const Mlp& model, const BoundaryData& data);

/// Mean squared modulus of the discretised BIE residual H p - G q.
double loss_plain(const ComplexVector& p, const ComplexVector& q, const InfluenceMatrices& matrices);

/// BIE residual with all p, q from the network, plus mean squared mismatch
/// against the prescribed Dirichlet and Neumann values. A boundary-condition
/// term with no constrained points is omitted.
double loss_composite(const Mlp& model, const BoundaryData& data, const InfluenceMatrices& matrices);

enum class LossKind { plain, composite };
std::string_view to_string(LossKind kind);
LossKind loss_kind_from_string(std::string_view name);

/// Loss and parameter gradient of either loss form for a fixed problem.
///
/// Constant contributions of prescribed values are folded into one vector at
/// construction so that each evaluation only multiplies the unknown columns.
class BinnObjective {
 public:
  BinnObjective(const BoundaryData& data, const InfluenceMatrices& matrices, LossKind kind);

  /// Loss in physical units; `gradient` (if non-empty) receives d(loss)/d(theta).
  double evaluate(const Mlp& model, std::span<double> gradient) const;

  LossKind kind() const { return kind_; }

 private:
  LossKind kind_;
  const BoundaryData* data_;
  std::size_t size_;
  std::vector<std::size_t> net_points_;  // collocation indices that need the network
  std::vector<Vec2> net_coords_;
  std::vector<Eigen::Index> unknown_p_;  // position in net_points_, or -1
  std::vector<Eigen::Index> unknown_q_;
  ComplexMatrix h_unknown_;
  ComplexMatrix g_unknown_;
  ComplexVector constant_;
  std::vector<std::size_t> p_cols_;  // collocation index of each h_unknown_ column
  std::vector<std::size_t> q_cols_;
};

struct TrainConfig {
  LossKind loss = LossKind::plain;
  int max_iterations = 10000;
  /// Adam steps before the quasi-Newton stage; all iterations use Adam when
  /// `polish` is false.
  int adam_iterations = 1000;
  bool polish = true;
  double learning_rate = 1e-3;
  int log_stride = 100;
  /// Scale the network outputs by the magnitude of the prescribed data.
  bool scale_outputs = true;
};

struct TrainHistory {
  std::vector<int> iterations;
  std::vector<double> loss;
  std::vector<double> seconds;

  std::size_t size() const { return iterations.size(); }
};

struct TrainResult {
  Mlp model;
  TrainHistory history;
  double final_loss = 0.0;
  int iterations = 0;
};

/// Training aborted because the loss blew up; carries the history so far.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, TrainHistory history)
      : Error(what), history_(std::move(history)) {}
  const TrainHistory& history() const { return history_; }

 private:
  TrainHistory history_;
};

/// Minimises the chosen loss over the network parameters: Adam for
/// `adam_iterations`, then BFGS up to `max_iterations` in total. The
/// parameters with the lowest loss seen are returned.
TrainResult train(Mlp model, const BoundaryData& data, const InfluenceMatrices& matrices,
                  const TrainConfig& config);

/// Reciprocal condition estimate below which oracle_solve refuses to solve.
inline constexpr double kMinReciprocalCondition = 1e-14;

/// Direct boundary element solve: unknown columns of H and -G form a dense
/// system solved by LU with partial pivoting. Requires exactly one unknown
/// per point; throws SingularSystemError near fictitious frequencies.
BoundaryVectors oracle_solve(const BoundaryData& data, const InfluenceMatrices& matrices);

}  // namespace binn
