#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <random>
#include <sstream>

#include "binn/error.hpp"
#include "binn/mlp.hpp"

using namespace binn;

namespace {

std::vector<Vec2> random_points(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::vector<Vec2> pts;
  for (int i = 0; i < n; ++i) pts.emplace_back(u(rng), u(rng));
  return pts;
}

Mlp randomized(std::vector<int> sizes, Activation a, std::uint64_t seed) {
  Mlp m = Mlp::init(std::move(sizes), a, seed);
  std::mt19937_64 rng(seed + 99);
  std::normal_distribution<double> g(0.0, 0.6);
  std::vector<double> p(m.parameters().begin(), m.parameters().end());
  for (double& v : p) v = g(rng);
  m.set_parameters(p);
  return m;
}

// Smooth loss mixing values and input gradients at every point.
LossEvaluation mixed_loss(std::span<const PointOutput> out) {
  LossEvaluation e;
  e.adjoints.resize(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const PointOutput& o = out[i];
    const double w = 1.0 + 0.1 * static_cast<double>(i);
    e.value += w * (o.value[0] * o.value[0] + 0.5 * o.value[1]) + o.grad[0][0] * o.grad[1][1] +
               0.3 * o.grad[0][1] * o.grad[0][1] - o.grad[1][0];
    PointAdjoint& a = e.adjoints[i];
    a.value[0] = 2.0 * w * o.value[0];
    a.value[1] = 0.5 * w;
    a.grad[0][0] = o.grad[1][1];
    a.grad[1][1] = o.grad[0][0];
    a.grad[0][1] = 0.6 * o.grad[0][1];
    a.grad[1][0] = -1.0;
  }
  return e;
}

double fd_loss(const Mlp& m, std::span<const Vec2> pts) {
  std::vector<PointOutput> out;
  for (const Vec2& x : pts) out.push_back(m.evaluate(x));
  return mixed_loss(out).value;
}

double max_rel_gradient_error(const Mlp& model, std::span<const Vec2> pts) {
  const GradientResult g = parameter_gradient(model, pts, mixed_loss);
  Mlp m = model;
  std::vector<double> p(model.parameters().begin(), model.parameters().end());
  double scale = 0.0;
  for (double v : g.gradient) scale = std::max(scale, std::abs(v));
  double worst = 0.0;
  const double h = 1e-6;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double keep = p[i];
    p[i] = keep + h;
    m.set_parameters(p);
    const double fp = fd_loss(m, pts);
    p[i] = keep - h;
    m.set_parameters(p);
    const double fm = fd_loss(m, pts);
    p[i] = keep;
    const double fd = (fp - fm) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - g.gradient[i]) / std::max(std::abs(fd), 1e-2 * scale));
  }
  return worst;
}

}  // namespace

TEST_SUITE("mlp") {
  TEST_CASE("initialisation") {
    CHECK(Mlp::init({2, 10, 2}, Activation::swish, 1).parameter_count() == 52);
    CHECK(Mlp::init({2, 20, 20, 2}, Activation::swish, 1).parameter_count() == 522);
    const Mlp a = Mlp::init({2, 8, 8, 2}, Activation::tanh, 42);
    const Mlp b = Mlp::init({2, 8, 8, 2}, Activation::tanh, 42);
    const Mlp c = Mlp::init({2, 8, 8, 2}, Activation::tanh, 43);
    CHECK(std::equal(a.parameters().begin(), a.parameters().end(), b.parameters().begin()));
    CHECK_FALSE(std::equal(a.parameters().begin(), a.parameters().end(), c.parameters().begin()));
    // layer 1: 16 weights then 8 zero biases, bounded by the Glorot limit
    const auto p = a.parameters();
    const double limit = std::sqrt(6.0 / 10.0);
    for (int i = 0; i < 16; ++i) CHECK(std::abs(p[i]) <= limit);
    for (int i = 16; i < 24; ++i) CHECK(p[i] == 0.0);
    CHECK(p[p.size() - 1] == 0.0);
    CHECK(p[p.size() - 2] == 0.0);
  }

  TEST_CASE("invalid architectures") {
    CHECK_THROWS_AS(Mlp::init({2, 2}, Activation::swish, 1), ConfigError);
    CHECK_THROWS_AS(Mlp::init({3, 4, 2}, Activation::swish, 1), ConfigError);
    CHECK_THROWS_AS(Mlp::init({2, 0, 2}, Activation::swish, 1), ConfigError);
    CHECK_THROWS_AS(activation_from_string("relu"), ConfigError);
    for (Activation a : kAllActivations) CHECK(activation_from_string(to_string(a)) == a);
  }

  TEST_CASE("activation values") {
    CHECK(activate(Activation::arctan, 0.0).value == 0.0);
    CHECK(activate(Activation::sigmoid, 0.0).value == 0.5);
    CHECK(activate(Activation::swish, 0.0).value == 0.0);
    CHECK(activate(Activation::softplus, 0.0).value == doctest::Approx(0.693147180559945).epsilon(1e-15));
    CHECK(activate(Activation::tanh, 0.0).value == 0.0);
    CHECK(activate(Activation::swish, 1.0).value == doctest::Approx(0.731058578630005).epsilon(1e-15));
    const double h = 1e-5;
    for (Activation a : kAllActivations) {
      for (double z : {-3.0, -0.4, 0.0, 0.9, 2.5}) {
        const ActivationValue v = activate(a, z);
        const ActivationValue p = activate(a, z + h), m = activate(a, z - h);
        CHECK(v.d1 == doctest::Approx((p.value - m.value) / (2 * h)).epsilon(1e-8));
        CHECK(v.d2 == doctest::Approx((p.d1 - m.d1) / (2 * h)).epsilon(1e-7));
      }
    }
  }

  TEST_CASE("zero weights collapse to the head biases") {
    for (Activation a : {Activation::arctan, Activation::swish, Activation::tanh}) {
      Mlp m = Mlp::init({2, 5, 3, 2}, a, 7);
      std::vector<double> p(m.parameter_count(), 0.0);
      p[p.size() - 2] = 0.3;
      p[p.size() - 1] = -0.2;
      m.set_parameters(p);
      const auto out = m.forward({0.8, -1.1});
      CHECK(out[0] == 0.3);
      CHECK(out[1] == -0.2);
      const auto g = input_gradient(m, {0.8, -1.1});
      CHECK(g[0][0] == 0.0);
      CHECK(g[1][1] == 0.0);
    }
  }

  TEST_CASE("input gradient matches finite differences") {
    const double h = 1e-5;
    for (Activation a : kAllActivations) {
      const Mlp m = randomized({2, 6, 5, 2}, a, 3);
      for (const Vec2& x : random_points(10, 5)) {
        const auto g = input_gradient(m, x);
        for (int d = 0; d < 2; ++d) {
          Vec2 e = Vec2::Zero();
          e[d] = h;
          const auto p = m.forward(x + e), q = m.forward(x - e);
          for (int head = 0; head < 2; ++head) {
            const double fd = (p[head] - q[head]) / (2 * h);
            CHECK(std::abs(g[head][d] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
          }
        }
      }
    }
  }

  TEST_CASE("single tanh unit: gradient ratio equals weight ratio") {
    Mlp m = Mlp::init({2, 1, 2}, Activation::tanh, 1);
    // W1 = (a, b), b1 = 0.1, heads (1, 0.5), biases 0
    const double a = 0.7, b = -1.9;
    m.set_parameters(std::vector<double>{a, b, 0.1, 1.0, 0.5, 0.0, 0.0});
    const auto g = input_gradient(m, {0.2, 0.3});
    CHECK(g[0][0] / g[0][1] == doctest::Approx(a / b).epsilon(1e-14));
  }

  TEST_CASE("parameter gradient matches finite differences") {
    const auto pts = random_points(5, 11);
    for (Activation a : kAllActivations) {
      CAPTURE(to_string(a));
      CHECK(max_rel_gradient_error(randomized({2, 4, 2}, a, 21), pts) <= 1e-5);
      CHECK(max_rel_gradient_error(randomized({2, 8, 8, 2}, a, 22), pts) <= 1e-5);
    }
  }

  TEST_CASE("gradient structure") {
    Mlp m = Mlp::init({2, 4, 2}, Activation::tanh, 1);
    std::vector<double> p(m.parameter_count(), 0.0);
    p[p.size() - 2] = 0.5;
    p[p.size() - 1] = -1.0;
    m.set_parameters(p);
    const auto pts = random_points(4, 2);
    const GradientResult sq = parameter_gradient(m, pts, [](std::span<const PointOutput> out) {
      LossEvaluation e;
      for (const PointOutput& o : out) {
        e.value += o.value[0] * o.value[0] + o.value[1] * o.value[1];
        PointAdjoint a;
        a.value = {2 * o.value[0], 2 * o.value[1]};
        e.adjoints.push_back(a);
      }
      return e;
    });
    for (std::size_t i = 0; i + 2 < sq.gradient.size(); ++i) CHECK(sq.gradient[i] == 0.0);
    CHECK(sq.gradient[p.size() - 2] == doctest::Approx(4.0));
    CHECK(sq.gradient[p.size() - 1] == doctest::Approx(-8.0));

    const Mlp r = randomized({2, 4, 2}, Activation::sigmoid, 4);
    const GradientResult none = parameter_gradient(r, pts, [](std::span<const PointOutput> out) {
      return LossEvaluation{1.0, std::vector<PointAdjoint>(out.size())};
    });
    for (double g : none.gradient) CHECK(g == 0.0);
  }

  TEST_CASE("non-finite loss sensitivities are reported with the point index") {
    const Mlp m = randomized({2, 4, 2}, Activation::swish, 4);
    const auto pts = random_points(6, 3);
    try {
      parameter_gradient(m, pts, [](std::span<const PointOutput> out) {
        LossEvaluation e{0.0, std::vector<PointAdjoint>(out.size())};
        e.adjoints[4].value[1] = std::nan("");
        return e;
      });
      FAIL("expected LossError");
    } catch (const LossError& e) {
      CHECK(e.point() == 4);
    }
  }

  TEST_CASE("input and output scaling are part of the differentiated map") {
    Mlp m = randomized({2, 5, 2}, Activation::softplus, 8);
    m.set_input_scaling({1.5, 0.75}, 0.5);
    m.set_output_scale(300.0);
    const auto pts = random_points(5, 12);
    CHECK(max_rel_gradient_error(m, pts) <= 1e-5);
    const Vec2 x(0.4, 0.1);
    const double h = 1e-5;
    const auto g = input_gradient(m, x);
    const double fd = (m.forward(x + Vec2(h, 0))[1] - m.forward(x - Vec2(h, 0))[1]) / (2 * h);
    CHECK(g[1][0] == doctest::Approx(fd).epsilon(1e-7));
  }

  TEST_CASE("batch evaluation and gradients match the serial reference exactly") {
    const Mlp m = randomized({2, 20, 20, 2}, Activation::swish, 5);
    const auto pts = random_points(333, 6);
    const auto a = m.evaluate_batch(pts);
    const auto b = m.evaluate_batch_serial(pts);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].value == b[i].value);
      CHECK(a[i].grad == b[i].grad);
    }
    std::vector<PointAdjoint> adj(pts.size());
    for (std::size_t i = 0; i < adj.size(); ++i) {
      adj[i].value = {std::sin(i * 1.0), std::cos(i * 1.0)};
      adj[i].grad[0] = {0.1 * i, -0.2};
      adj[i].grad[1] = {0.3, 0.01 * i};
    }
    const auto g = m.gradient_batch(pts, adj);
    const int threads = omp_get_max_threads();
    omp_set_num_threads(3);
    CHECK(g == m.gradient_batch(pts, adj));
    omp_set_num_threads(1);
    CHECK(g == m.gradient_batch(pts, adj));
    omp_set_num_threads(threads);
    const auto s = m.gradient_batch_serial(pts, adj);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(g[i] - s[i]) <= 1e-12 * (1.0 + std::abs(s[i])));
  }

  TEST_CASE("save and load round trip") {
    Mlp m = randomized({2, 6, 4, 2}, Activation::arctan, 9);
    m.set_input_scaling({0.5, -0.25}, 2.0);
    m.set_output_scale(12.5);
    std::stringstream s;
    m.save(s);
    const Mlp r = Mlp::load(s);
    CHECK(r.layer_sizes() == m.layer_sizes());
    CHECK(r.activation() == m.activation());
    CHECK(r.seed() == m.seed());
    CHECK(std::equal(r.parameters().begin(), r.parameters().end(), m.parameters().begin()));
    CHECK(r.forward({0.3, 0.2}) == m.forward({0.3, 0.2}));
    std::stringstream bad("binn-mlp 1\nactivation swish\nlayers 3 2 4 2\n");
    CHECK_THROWS_AS(Mlp::load(bad), ConfigError);
  }
}
