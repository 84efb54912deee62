#include <cmath>

#include "doctest.h"
#include "hetinf/nn.hpp"

using namespace hetinf;

namespace {

NetSpec tiny(int in, std::vector<int> hidden, int out,
             Activation h = Activation::Relu,
             Activation o = Activation::Linear) {
  NetSpec s;
  s.input = in;
  s.hidden = std::move(hidden);
  s.output = out;
  s.hidden_act = h;
  s.output_act = o;
  return s;
}

Params zeros(const NetSpec& spec) {
  Params p;
  for (int l = 0; l < spec.layer_count(); ++l) {
    p.w.emplace_back(Eigen::MatrixXd::Zero(spec.layer_out(l), spec.layer_in(l)));
    p.b.emplace_back(Eigen::VectorXd::Zero(spec.layer_out(l)));
  }
  return p;
}

}  // namespace

TEST_CASE("forward: zero net maps to zero") {
  const auto spec = tiny(3, {4}, 2);
  const auto params = zeros(spec);
  Eigen::MatrixXd x(2, 3);
  x << 1, 2, 3, 4, 5, 6;
  CHECK(forward(spec, params, x).isZero());
}

TEST_CASE("forward: identity linear layer") {
  const auto spec = tiny(3, {}, 3, Activation::Relu, Activation::Linear);
  Params p = zeros(spec);
  p.w[0] = Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd x(2, 3);
  x << 1, -2, 3, 0.5, 0, -1;
  CHECK((forward(spec, p, x) - x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("forward: hand-computed two-layer relu case") {
  const auto spec = tiny(2, {2}, 1);
  Params p = zeros(spec);
  p.w[0] << 1, -1, 0.5, 2;   // hidden pre = (x0 - x1, 0.5 x0 + 2 x1)
  p.b[0] << 0.1, -0.2;
  p.w[1] << 3, -1;
  p.b[1] << 0.25;
  Eigen::MatrixXd x(1, 2);
  x << 2.0, 1.0;
  // pre = (1.1, 2.8) -> relu same; out = 3*1.1 - 2.8 + 0.25 = 0.75
  CHECK(forward(spec, p, x)(0, 0) == doctest::Approx(0.75).epsilon(1e-12));
  x << -3.0, 1.0;
  // pre = (-3.9, 0.3) -> relu (0, 0.3); out = -0.3 + 0.25
  CHECK(forward(spec, p, x)(0, 0) == doctest::Approx(-0.05).epsilon(1e-12));
}

TEST_CASE("forward is batch-order equivariant") {
  const auto spec = tiny(4, {5, 3}, 2);
  Rng rng(3);
  const auto p = init_params(spec, rng);
  Eigen::MatrixXd x(3, 4);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) x(r, c) = rng.normal();
  }
  const auto y = forward(spec, p, x);
  Eigen::MatrixXd xp(3, 4);
  xp.row(0) = x.row(2);
  xp.row(1) = x.row(0);
  xp.row(2) = x.row(1);
  const auto yp = forward(spec, p, xp);
  CHECK((yp.row(0) - y.row(2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((yp.row(1) - y.row(0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("backward: zero output gradient gives zero grads") {
  const auto spec = tiny(3, {4}, 2);
  Rng rng(1);
  const auto p = init_params(spec, rng);
  Eigen::MatrixXd x(2, 3);
  x.setRandom();
  ForwardCache cache;
  forward(spec, p, x, &cache);
  const auto g = backward(spec, p, cache, Eigen::MatrixXd::Zero(2, 2));
  for (const auto& w : g.w) CHECK(w.isZero());
  for (const auto& b : g.b) CHECK(b.isZero());
  CHECK(g.input.isZero());
}

TEST_CASE("backward: scalar linear regression gradient by calculus") {
  const auto spec = tiny(1, {}, 1);
  Params p = zeros(spec);
  p.w[0] << 1.7;
  p.b[0] << -0.4;
  const double x = 0.9, t = 2.0;
  Eigen::MatrixXd in(1, 1);
  in << x;
  ForwardCache cache;
  const auto out = forward(spec, p, in, &cache);
  const double resid = out(0, 0) - t;
  Eigen::MatrixXd dy(1, 1);
  dy << 2.0 * resid;  // d/dout of (out - t)^2
  const auto g = backward(spec, p, cache, dy);
  CHECK(g.w[0](0, 0) == doctest::Approx(2.0 * resid * x).epsilon(1e-12));
  CHECK(g.b[0](0) == doctest::Approx(2.0 * resid).epsilon(1e-12));
}

TEST_CASE("backward matches finite differences on a squared loss") {
  Rng rng(42);
  for (auto act : {Activation::Linear, Activation::Tanh, Activation::Relu,
                   Activation::Sigmoid}) {
    const auto spec = tiny(3, {5, 4}, 2, act);
    const auto params = init_params(spec, rng);
    Eigen::MatrixXd x(4, 3);
    Eigen::MatrixXd target(4, 2);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 3; ++c) x(r, c) = rng.normal();
      for (int c = 0; c < 2; ++c) target(r, c) = rng.normal();
    }
    const LossFn loss = [&](const Params& p, Grads* g) {
      ForwardCache cache;
      const auto y = forward(spec, p, x, g ? &cache : nullptr);
      const double l = (y - target).array().square().sum() / 4.0;
      if (g) {
        const Eigen::MatrixXd dy = 2.0 * (y - target) / 4.0;
        *g = backward(spec, p, cache, dy);
      }
      return l;
    };
    const auto rep = gradient_check(spec, params, loss, rng, 150);
    const double tol = act == Activation::Linear ? 1e-7 : 1e-4;
    CHECK(rep.max_rel_error <= tol);
  }
}

TEST_CASE("momentum step formulas") {
  const auto spec = tiny(1, {}, 1);
  Params p = zeros(spec);
  p.w[0] << 1.0;

  SUBCASE("zero gradient leaves parameters in place") {
    auto opt = OptState::momentum_sgd(spec, 0.1);
    step(opt, p, zero_grads(spec));
    CHECK(p.w[0](0, 0) == 1.0);
  }

  SUBCASE("mu = 0 is plain sgd") {
    auto opt = OptState::momentum_sgd(spec, 0.1, 0.0);
    Grads g = zero_grads(spec);
    g.w[0] << 2.0;
    step(opt, p, g);
    CHECK(p.w[0](0, 0) == doctest::Approx(1.0 - 0.1 * 2.0).epsilon(1e-12));
  }

  SUBCASE("two steps with constant gradient") {
    const double lr = 0.1, mu = 0.9, grad = 1.0;
    auto opt = OptState::momentum_sgd(spec, lr, mu);
    Grads g = zero_grads(spec);
    g.w[0] << grad;
    step(opt, p, g);
    step(opt, p, g);
    // v1 = -lr g; v2 = mu v1 - lr g; total displacement lr*g*(1 + (1+mu))
    CHECK(p.w[0](0, 0) ==
          doctest::Approx(1.0 - lr * grad * (1.0 + (1.0 + mu)))
              .epsilon(1e-12));
  }

  SUBCASE("learning rate zero is the identity") {
    auto opt = OptState::momentum_sgd(spec, 0.0);
    Grads g = zero_grads(spec);
    g.w[0] << 123.0;
    step(opt, p, g);
    CHECK(p.w[0](0, 0) == 1.0);
  }
}

TEST_CASE("rmsprop step formula by hand") {
  const auto spec = tiny(1, {}, 1);
  Params p = zeros(spec);
  p.w[0] << 1.0;
  const double lr = 0.001, rho = 0.9, eps = 1e-8, grad = 0.5;
  auto opt = OptState::rmsprop(spec, lr, rho, eps);
  Grads g = zero_grads(spec);
  g.w[0] << grad;
  step(opt, p, g);
  const double s = (1.0 - rho) * grad * grad;
  CHECK(p.w[0](0, 0) ==
        doctest::Approx(1.0 - lr * grad / std::sqrt(s + eps)).epsilon(1e-12));
}

TEST_CASE("init is seeded, He-scaled and zero-biased") {
  const auto spec = tiny(100, {50}, 10);
  Rng a(9), b(9), c(10);
  const auto pa = init_params(spec, a);
  const auto pb = init_params(spec, b);
  const auto pc = init_params(spec, c);
  CHECK((pa.w[0] - pb.w[0]).cwiseAbs().maxCoeff() == 0.0);
  CHECK((pa.w[0] - pc.w[0]).cwiseAbs().maxCoeff() > 0.0);
  CHECK(pa.b[0].isZero());
  CHECK(pa.b[1].isZero());

  // relu layer: std ~ sqrt(2/100); estimated over 100*50 = 5000 draws
  const double std_est =
      std::sqrt(pa.w[0].array().square().sum() / pa.w[0].size());
  CHECK(std_est == doctest::Approx(std::sqrt(0.02)).epsilon(0.2));

  // linear output layer: Xavier sqrt(1/50)
  const double std_out =
      std::sqrt(pa.w[1].array().square().sum() / pa.w[1].size());
  CHECK(std_out == doctest::Approx(std::sqrt(1.0 / 50)).epsilon(0.2));
}

TEST_CASE("gradient check is clean on a smooth quadratic") {
  const auto spec = tiny(2, {}, 1, Activation::Relu, Activation::Linear);
  Rng rng(13);
  const auto params = init_params(spec, rng);
  Eigen::MatrixXd x(3, 2);
  x.setRandom();
  const LossFn loss = [&](const Params& p, Grads* g) {
    ForwardCache cache;
    const auto y = forward(spec, p, x, g ? &cache : nullptr);
    if (g) *g = backward(spec, p, cache, 2.0 * y);
    return y.array().square().sum();
  };
  const auto rep = gradient_check(spec, params, loss, rng, 64);
  CHECK(rep.max_rel_error <= 1e-7);
}

TEST_CASE("shape errors are loud") {
  const auto spec = tiny(3, {2}, 1);
  Rng rng(2);
  const auto p = init_params(spec, rng);
  Eigen::MatrixXd bad(2, 4);
  CHECK_THROWS_AS(forward(spec, p, bad), ShapeError);
}
