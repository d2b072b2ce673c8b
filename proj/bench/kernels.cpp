// OpenMP kernels against their serial references.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "binn/assembly.hpp"
#include "binn/benchmarks.hpp"
#include "binn/field.hpp"
#include "binn/mlp.hpp"
#include "binn/solver.hpp"

using namespace binn;

namespace {

BoundaryMesh circle(int elements) { return build_mesh(BoundaryCurve::exterior_circle(1.0, {0.0, 0.0}), elements); }

void assembly(benchmark::State& state, bool parallel) {
  const BoundaryMesh mesh = circle(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    InfluenceMatrices m = parallel ? assemble(mesh, 5.0) : assemble_serial(mesh, 5.0);
    benchmark::DoNotOptimize(m.H.data());
  }
  state.counters["rows"] = benchmark::Counter(static_cast<double>(mesh.point_count()) * state.iterations(),
                                              benchmark::Counter::kIsRate);
}

void field(benchmark::State& state, bool parallel) {
  const double k = 5.0;
  const BoundaryMesh mesh = circle(100);
  const ProblemSpec spec = benchmarks::scattering_problem(k, 1.0);
  const BoundaryVectors v = oracle_solve(encode_boundary(mesh, spec), assemble(mesh, k));
  std::vector<Vec2> pts = benchmarks::annulus_grid(1.0, 2.0);
  pts.resize(std::min<std::size_t>(pts.size(), static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) {
    auto out = parallel ? eval_field_batch(pts, v.p, v.q, mesh, k) : eval_field_batch_serial(pts, v.p, v.q, mesh, k);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["points"] =
      benchmark::Counter(static_cast<double>(pts.size()) * state.iterations(), benchmark::Counter::kIsRate);
}

std::vector<Vec2> random_points(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<Vec2> pts(n);
  for (Vec2& x : pts) x = Vec2(u(rng), u(rng));
  return pts;
}

void mlp_eval(benchmark::State& state, bool parallel) {
  const Mlp m = Mlp::init({2, 20, 20, 2}, Activation::swish, 1);
  const std::vector<Vec2> pts = random_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto out = parallel ? m.evaluate_batch(pts) : m.evaluate_batch_serial(pts);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["points"] =
      benchmark::Counter(static_cast<double>(pts.size()) * state.iterations(), benchmark::Counter::kIsRate);
}

void mlp_gradient(benchmark::State& state, bool parallel) {
  const Mlp m = Mlp::init({2, 20, 20, 2}, Activation::swish, 1);
  const std::vector<Vec2> pts = random_points(static_cast<std::size_t>(state.range(0)));
  std::vector<PointAdjoint> adj(pts.size());
  for (std::size_t i = 0; i < adj.size(); ++i) adj[i].value = {1.0, -0.5 * static_cast<double>(i % 3)};
  for (auto _ : state) {
    auto g = parallel ? m.gradient_batch(pts, adj) : m.gradient_batch_serial(pts, adj);
    benchmark::DoNotOptimize(g.data());
  }
  state.counters["points"] =
      benchmark::Counter(static_cast<double>(pts.size()) * state.iterations(), benchmark::Counter::kIsRate);
}

}  // namespace

BENCHMARK_CAPTURE(assembly, serial, false)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(assembly, openmp, true)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(field, serial, false)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(field, openmp, true)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(mlp_eval, serial, false)->Arg(300)->Arg(3000);
BENCHMARK_CAPTURE(mlp_eval, openmp, true)->Arg(300)->Arg(3000);
BENCHMARK_CAPTURE(mlp_gradient, serial, false)->Arg(300)->Arg(3000);
BENCHMARK_CAPTURE(mlp_gradient, openmp, true)->Arg(300)->Arg(3000);

BENCHMARK_MAIN();
