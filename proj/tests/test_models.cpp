#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "hetinf/exact.hpp"
#include "hetinf/models.hpp"
#include "test_util.hpp"

using namespace hetinf;

namespace {

NetSpec tower(int in, std::vector<int> hidden, int out) {
  NetSpec s;
  s.input = in;
  s.hidden = std::move(hidden);
  s.output = out;
  return s;
}

Eigen::MatrixXd randn(int r, int c, Rng& rng) {
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) m(i, j) = rng.normal();
  }
  return m;
}

Eigen::MatrixXd rand01(int r, int c, Rng& rng) {
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) m(i, j) = rng.uniform01() < 0.5 ? 0.0 : 1.0;
  }
  return m;
}

struct SynthFixture {
  SynthSpec spec;
  OneHotLayout layout;
  Dataset data;
  TestSet test;

  explicit SynthFixture(SynthKind kind, std::uint64_t seed = 21,
                        int train_n = 4000) {
    spec = synth_markov_border(kind, seed);
    layout = build_layout(spec.net);
    data = build_training_set(spec.net, train_n, SamplerKind::Ancestral,
                              seed + 1);
    const OracleFn oracle = [](const BayesianNetwork& n, const Evidence& e) {
      return posterior_marginals_ve(n, e);
    };
    test = build_test_set(spec.net, 1000, seed + 2, oracle, spec.policy);
  }

  TrainInputs inputs() const {
    TrainInputs in;
    in.data = &data;
    in.layout = &layout;
    in.policy = spec.policy;
    in.validation = &test;
    in.val_scoring.only_variable = spec.target;
    return in;
  }

  ModelConfig config(ModelKind kind, std::uint64_t seed = 1) const {
    ModelConfig cfg = default_config(kind, seed);
    cfg.hidden = {10, 10};
    cfg.epochs = 60;
    return cfg;
  }
};

}  // namespace

TEST_CASE("ear loss closed-form cases") {
  Params theta;
  theta.w.emplace_back(Eigen::MatrixXd::Zero(1, 2));
  theta.b.emplace_back(Eigen::VectorXd::Zero(1));

  SUBCASE("perfect prediction with gamma 0 is free") {
    Eigen::MatrixXd X(1, 4), mask(1, 4);
    X << 1, 0, 0, 1;
    mask << 1, 1, 0, 0;
    const auto res = ear_loss(X, X, mask, theta, 1.0, 1.0, 0.0);
    CHECK(res.loss == 0.0);
    CHECK(res.d_xhat.isZero());
  }

  SUBCASE("zero prediction against M one-hot blocks costs M") {
    const int m_vars = 5;
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(1, 2 * m_vars);
    for (int j = 0; j < m_vars; ++j) X(0, 2 * j) = 1.0;
    const Eigen::MatrixXd mask = Eigen::MatrixXd::Ones(1, 2 * m_vars);
    const Eigen::MatrixXd xhat = Eigen::MatrixXd::Zero(1, 2 * m_vars);
    const auto res = ear_loss(X, xhat, mask, theta, 1.0, 0.0, 0.0);
    CHECK(res.loss == doctest::Approx(static_cast<double>(m_vars)));
  }

  SUBCASE("the l1 term adds gamma times the parameter mass") {
    theta.w[0] << -2.0, 3.0;
    Eigen::MatrixXd X(1, 2), mask(1, 2);
    X << 1, 0;
    mask << 1, 1;
    const double gamma = 0.25;
    const auto res = ear_loss(X, X, mask, theta, 1.0, 1.0, gamma);
    CHECK(res.loss == doctest::Approx(gamma * 5.0));
  }

  SUBCASE("a block weight silences off-target perturbations") {
    Eigen::MatrixXd X(1, 4), mask(1, 4);
    X << 1, 0, 1, 0;
    mask << 1, 1, 1, 1;
    Eigen::VectorXd block(4);
    block << 1, 1, 0, 0;  // target is the first variable
    Eigen::MatrixXd xhat(1, 4), xhat2(1, 4);
    xhat << 0.3, 0.4, 0.0, 0.0;
    xhat2 << 0.3, 0.4, 9.0, -7.0;  // wild values outside the target block
    const auto a = ear_loss(X, xhat, mask, theta, 1.0, 1.0, 0.0, &block);
    const auto b = ear_loss(X, xhat2, mask, theta, 1.0, 1.0, 0.0, &block);
    CHECK(a.loss == b.loss);
    CHECK(b.d_xhat(0, 2) == 0.0);
    CHECK(b.d_xhat(0, 3) == 0.0);
  }

  SUBCASE("shape mismatches are rejected") {
    Eigen::MatrixXd X(1, 4), bad(1, 3), mask(1, 4);
    X.setZero();
    bad.setZero();
    mask.setOnes();
    CHECK_THROWS_AS(ear_loss(X, bad, mask, theta, 1, 1, 0), ShapeError);
  }
}

TEST_CASE("gradient checks for every training loss") {
  const int d = 6;
  const int batch = 5;

  // one retry covers the rare case of a sampled coordinate sitting on a
  // relu or |.| kink
  auto check_with_restarts = [&](auto make_loss, const NetSpec& spec,
                                 double tol) {
    double best = 1.0;
    for (std::uint64_t seed = 50; seed < 53; ++seed) {
      Rng rng(seed);
      const Params params = init_params(spec, rng);
      const LossFn loss = make_loss(seed);
      const auto rep = gradient_check(spec, params, loss, rng, 120);
      best = std::min(best, rep.max_rel_error);
      if (best <= tol) return true;
    }
    return best <= tol;
  };

  Rng data_rng(77);
  const Eigen::MatrixXd X = rand01(batch, d, data_rng);
  Eigen::MatrixXd mask = rand01(batch, d, data_rng);
  // Observed copies, dithered: an all-zero observation row with fresh zero
  // biases parks every relu pre-activation exactly on its kink, where
  // central differences disagree with any one subgradient choice.
  const Eigen::MatrixXd O =
      ((X.array() * (1.0 - mask.array())).matrix() +
       0.01 * randn(batch, d, data_rng));
  const Eigen::MatrixXd noise4 = randn(batch, 4, data_rng);

  SUBCASE("ear loss through the regression net") {
    const auto spec = tower(d, {8}, d);
    auto make = [&](std::uint64_t) {
      return LossFn([&](const Params& p, Grads* g) {
        ForwardCache cache;
        const auto xhat = forward(spec, p, O, g ? &cache : nullptr);
        const auto res = ear_loss(X, xhat, mask, p, 1.0, 1.0, 0.005);
        if (g) {
          *g = backward(spec, p, cache, res.d_xhat);
          add_l1_subgradient(p, 0.005, g);
        }
        return res.loss;
      });
    };
    CHECK(check_with_restarts(make, spec, 1e-4));
  }

  SUBCASE("adversary discriminator log-loss") {
    const auto dspec = tower(d, {8}, 1);
    Rng frng(5);
    const Eigen::MatrixXd fake = randn(batch, d, frng) * 0.3;
    auto make = [&](std::uint64_t) {
      return LossFn([&](const Params& p, Grads* g) {
        if (g) return gan_disc_loss(dspec, p, X, fake, g);
        return gan_disc_loss(dspec, p, X, fake, nullptr);
      });
    };
    CHECK(check_with_restarts(make, dspec, 1e-4));
  }

  SUBCASE("adversary generator objective incl. the ear term") {
    const auto gspec = tower(d, {8}, d);
    const auto dspec = tower(d, {8}, 1);
    Rng drng(6);
    const Params dparams = init_params(dspec, drng);
    auto make = [&](std::uint64_t) {
      return LossFn([&](const Params& p, Grads* g) {
        ForwardCache cache;
        const auto xhat = forward(gspec, p, O, g ? &cache : nullptr);
        Eigen::MatrixXd d_fake;
        const double adv =
            gan_gen_term(dspec, dparams, xhat, g ? &d_fake : nullptr);
        const auto res = ear_loss(X, xhat, mask, p, 1.0, 1.0, 0.005);
        if (g) {
          *g = backward(gspec, p, cache, res.d_xhat + d_fake);
          add_l1_subgradient(p, 0.005, g);
        }
        return adv + res.loss;
      });
    };
    CHECK(check_with_restarts(make, gspec, 1e-4));
  }

  SUBCASE("vae bound, encoder and decoder sides") {
    const int dz = 4;
    const auto enc = tower(d, {8}, 2 * dz);
    const auto dec = tower(dz, {8}, d);
    Rng other(8);
    const Params enc_fixed = init_params(enc, other);
    const Params dec_fixed = init_params(dec, other);

    auto make_enc = [&](std::uint64_t) {
      return LossFn([&](const Params& p, Grads* g) {
        Grads eg = zero_grads(enc);
        const double l = vae_loss(enc, p, dec, dec_fixed, O, X, noise4, dz,
                                  nullptr, g ? &eg : nullptr, nullptr);
        if (g) *g = eg;
        return l;
      });
    };
    CHECK(check_with_restarts(make_enc, enc, 1e-4));

    auto make_dec = [&](std::uint64_t) {
      return LossFn([&](const Params& p, Grads* g) {
        Grads dg = zero_grads(dec);
        const double l = vae_loss(enc, enc_fixed, dec, p, O, X, noise4, dz,
                                  nullptr, nullptr, g ? &dg : nullptr);
        if (g) *g = dg;
        return l;
      });
    };
    CHECK(check_with_restarts(make_dec, dec, 1e-4));
  }

  SUBCASE("conditional vae bound with the concatenated inputs") {
    const int dz = 4;
    const auto enc = tower(2 * d, {8}, 2 * dz);
    const auto dec = tower(dz + d, {8}, d);
    Rng other(9);
    const Params dec_fixed = init_params(dec, other);
    Eigen::MatrixXd enc_in(batch, 2 * d);
    enc_in << X, O;
    auto make_enc = [&](std::uint64_t) {
      return LossFn([&](const Params& p, Grads* g) {
        Grads eg = zero_grads(enc);
        const double l = vae_loss(enc, p, dec, dec_fixed, enc_in, X, noise4,
                                  dz, &O, g ? &eg : nullptr, nullptr);
        if (g) *g = eg;
        return l;
      });
    };
    CHECK(check_with_restarts(make_enc, enc, 1e-4));
  }

  SUBCASE("conditional gan losses") {
    const int dz = 3;
    const auto gspec = tower(dz + d, {8}, d);
    const auto dspec = tower(2 * d, {8}, 1);
    Rng other(10);
    const Params dparams = init_params(dspec, other);
    const Eigen::MatrixXd z = randn(batch, dz, other);
    Eigen::MatrixXd gen_in(batch, dz + d);
    gen_in << z, O;
    Eigen::MatrixXd real_in(batch, 2 * d);
    real_in << X, O;

    auto make_disc = [&](std::uint64_t) {
      return LossFn([&](const Params& p, Grads* g) {
        Rng grng(3);
        const Params gparams = init_params(gspec, grng);
        const auto fake = forward(gspec, gparams, gen_in);
        Eigen::MatrixXd fake_in(batch, 2 * d);
        fake_in << fake, O;
        return gan_disc_loss(dspec, p, real_in, fake_in, g);
      });
    };
    CHECK(check_with_restarts(make_disc, dspec, 1e-4));

    auto make_gen = [&](std::uint64_t) {
      return LossFn([&](const Params& p, Grads* g) {
        ForwardCache cache;
        const auto fake = forward(gspec, p, gen_in, g ? &cache : nullptr);
        Eigen::MatrixXd fake_in(batch, 2 * d);
        fake_in << fake, O;
        Eigen::MatrixXd d_fake_in;
        const double term = gan_gen_term(dspec, dparams, fake_in,
                                         g ? &d_fake_in : nullptr);
        if (g) *g = backward(gspec, p, cache, d_fake_in.leftCols(d));
        return term;
      });
    };
    CHECK(check_with_restarts(make_gen, gspec, 1e-4));
  }

  SUBCASE("wasserstein critic and generator terms") {
    const auto gspec = tower(d, {8}, d);
    const auto cspec = tower(d, {8}, 1);
    Rng other(11);
    const Params cparams = init_params(cspec, other);
    Rng frng(12);
    const Eigen::MatrixXd fake_fixed = randn(batch, d, frng) * 0.4;

    auto make_critic = [&](std::uint64_t) {
      return LossFn([&](const Params& p, Grads* g) {
        return wgan_critic_loss(cspec, p, X, fake_fixed, g);
      });
    };
    CHECK(check_with_restarts(make_critic, cspec, 1e-4));

    auto make_gen = [&](std::uint64_t) {
      return LossFn([&](const Params& p, Grads* g) {
        ForwardCache cache;
        const auto fake = forward(gspec, p, O, g ? &cache : nullptr);
        Eigen::MatrixXd d_fake;
        const double term =
            wgan_gen_term(cspec, cparams, fake, g ? &d_fake : nullptr);
        if (g) *g = backward(gspec, p, cache, d_fake);
        return term;
      });
    };
    CHECK(check_with_restarts(make_gen, gspec, 1e-4));
  }
}

TEST_CASE("block-diagonal composition reproduces member outputs") {
  Rng rng(33);
  const int d = 7;

  SUBCASE("a single member composes to itself") {
    const auto spec = tower(d, {4}, 3);
    const auto params = init_params(spec, rng);
    const auto [cspec, cparams] = compose_block_diagonal({{spec, params}});
    const Eigen::MatrixXd x = randn(10, d, rng);
    CHECK((forward(cspec, cparams, x) - forward(spec, params, x))
              .cwiseAbs()
              .maxCoeff() <= 1e-9);
  }

  SUBCASE("two members concatenate exactly") {
    std::vector<std::pair<NetSpec, Params>> members;
    for (int i = 0; i < 2; ++i) {
      const auto spec = tower(d, {3 + i}, 2 + i);
      members.emplace_back(spec, init_params(spec, rng));
    }
    const auto [cspec, cparams] = compose_block_diagonal(members);
    const Eigen::MatrixXd x = randn(100, d, rng);
    const auto composed = forward(cspec, cparams, x);
    int at = 0;
    for (const auto& [mspec, mparams] : members) {
      const auto own = forward(mspec, mparams, x);
      CHECK((composed.middleCols(at, mspec.output) - own)
                .cwiseAbs()
                .maxCoeff() <= 1e-9);
      at += mspec.output;
    }
  }

  SUBCASE("an empty member list is an error") {
    CHECK_THROWS_AS(compose_block_diagonal({}), ShapeError);
  }

  SUBCASE("mismatched input widths are an error") {
    const auto a = tower(d, {3}, 2);
    const auto b = tower(d + 1, {3}, 2);
    Rng r2(1);
    CHECK_THROWS_AS(
        compose_block_diagonal(
            {{a, init_params(a, r2)}, {b, init_params(b, r2)}}),
        ShapeError);
  }
}

TEST_CASE("rbm conditionals") {
  RbmParams p;
  p.w = Eigen::MatrixXd::Zero(3, 2);
  p.a = Eigen::VectorXd::Zero(3);
  p.b = Eigen::VectorXd::Zero(2);

  SUBCASE("zero parameters give one half everywhere") {
    const auto v = rbm_visible_given_hidden(p, Eigen::VectorXd::Zero(2));
    for (int i = 0; i < 3; ++i) CHECK(v[i] == doctest::Approx(0.5));
    const auto h = rbm_hidden_given_visible(p, Eigen::VectorXd::Zero(3));
    for (int i = 0; i < 2; ++i) CHECK(h[i] == doctest::Approx(0.5));
  }

  SUBCASE("large biases saturate") {
    p.a[0] = 30.0;
    const auto v = rbm_visible_given_hidden(p, Eigen::VectorXd::Zero(2));
    CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-9));
  }

  SUBCASE("hand-sized affine case") {
    p.w << 0.5, -1.0, 0.25, 2.0, -0.75, 0.0;
    p.a << 0.1, -0.2, 0.3;
    Eigen::VectorXd h(2);
    h << 1.0, 1.0;
    const auto v = rbm_visible_given_hidden(p, h);
    auto sigmoid = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
    CHECK(v[0] == doctest::Approx(sigmoid(0.1 + 0.5 - 1.0)));
    CHECK(v[1] == doctest::Approx(sigmoid(-0.2 + 0.25 + 2.0)));
    CHECK(v[2] == doctest::Approx(sigmoid(0.3 - 0.75)));
  }
}

TEST_CASE("one cd step with pinned chains matches the hand update") {
  // huge hidden bias pins h = 1; huge negative visible bias pins v_k = 0
  RbmParams p;
  p.w = Eigen::MatrixXd::Zero(2, 2);
  p.a = Eigen::VectorXd::Constant(2, -50.0);
  p.b = Eigen::VectorXd::Constant(2, 50.0);

  Eigen::MatrixXd X(2, 2), O(2, 2);
  X << 1, 0, 0, 1;
  O << 1, 0, 0, 0;
  Rng rng(4);
  const double eps = 0.1;
  rbm_cd_update(p, X, O, 1, eps, rng);

  // h_data = 1, v_1 = 0, h_probs = sigmoid(50) = 1:
  // dW = (X' * 1 - 0) / 2, da = mean X, db = 1 - 1 = 0
  CHECK(p.w(0, 0) == doctest::Approx(eps * 0.5).epsilon(1e-9));
  CHECK(p.w(1, 1) == doctest::Approx(eps * 0.5).epsilon(1e-9));
  CHECK(p.a[0] == doctest::Approx(-50.0 + eps * 0.5).epsilon(1e-9));
  CHECK(p.b[0] == doctest::Approx(50.0).epsilon(1e-9));
}

TEST_CASE("rbm with cd-1 learns a single-variable marginal") {
  BayesianNetwork net = parse_bif(
      "network n { }\n"
      "variable v { type discrete [ 2 ] { a, b }; }\n"
      "probability ( v ) { table 0.3, 0.7; }\n");
  const auto layout = build_layout(net);
  const auto data = build_training_set(net, 4000, SamplerKind::Ancestral, 6);

  double freq1 = 0.0;
  for (const auto& s : data.samples) freq1 += s[0] == 1 ? 1.0 : 0.0;
  freq1 /= static_cast<double>(data.samples.size());

  ModelConfig cfg = default_config(ModelKind::Rbm, 3);
  cfg.rbm_hidden = 8;
  cfg.cd_k = 1;
  cfg.epochs = 60;
  cfg.learning_rate = 0.1;
  TrainInputs in;
  in.data = &data;
  in.layout = &layout;
  const auto model = train_model(in, cfg);

  Rng prng(9);
  const auto y = predict(model, {}, &prng);
  CHECK(std::abs(y[1] - freq1) <= 0.05);
  for (int i = 0; i < 2; ++i) {
    CHECK(y[i] >= 0.0);
    CHECK(y[i] <= 1.0);
  }
}

TEST_CASE("rbm predictions: zero model and sampling stability") {
  TrainedModel m;
  m.kind = ModelKind::Rbm;
  m.config = default_config(ModelKind::Rbm, 1);
  m.config.predict_samples = 100;
  BayesianNetwork net = hetinf::testing::chain_ab();
  m.layout = build_layout(net);
  m.rbm.w = Eigen::MatrixXd::Zero(4, 6);
  m.rbm.a = Eigen::VectorXd::Zero(4);
  m.rbm.b = Eigen::VectorXd::Zero(6);

  Rng r1(5);
  const auto y = predict(m, {}, &r1);
  for (int i = 0; i < 4; ++i) CHECK(y[i] == doctest::Approx(0.5));

  // small weights: repeated S=100 estimates stay within a small spread
  Rng wr(8);
  m.rbm.w = randn(4, 6, wr) * 0.3;
  std::vector<double> first;
  double spread = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    Rng r(100 + static_cast<std::uint64_t>(rep));
    const auto out = predict(m, {{0, 1}}, &r);
    if (rep == 0) {
      for (int i = 0; i < 4; ++i) first.push_back(out[i]);
    } else {
      for (int i = 0; i < 4; ++i) {
        spread = std::max(
            spread, std::abs(out[i] - first[static_cast<std::size_t>(i)]));
      }
    }
  }
  CHECK(spread <= 0.05);
  CHECK_THROWS_AS(predict(m, {}, nullptr), std::invalid_argument);
}

TEST_CASE("ear memorizes a single repeated sample") {
  BayesianNetwork net = parse_bif(
      "network n { }\n"
      "variable v { type discrete [ 3 ] { a, b, c }; }\n"
      "probability ( v ) { table 0.2, 0.3, 0.5; }\n");
  const auto layout = build_layout(net);
  Dataset data;
  data.network_name = net.name;
  data.network_hash = network_hash(net);
  data.sampler = "ancestral";
  data.samples.assign(64, Assignment{2});

  ModelConfig cfg = default_config(ModelKind::Ear, 5);
  cfg.hidden = {8, 8};
  cfg.epochs = 150;
  TrainInputs in;
  in.data = &data;
  in.layout = &layout;  // M = 1, so every mask draw is fully latent
  const auto model = train_model(in, cfg);

  const auto y = predict(model, {});
  CHECK(y[0] == doctest::Approx(0.0).epsilon(0.1));
  CHECK(y[1] == doctest::Approx(0.0).epsilon(0.1));
  CHECK(y[2] == doctest::Approx(1.0).epsilon(0.1));
  CHECK(model.log.back().loss <=
        0.05 + cfg.gamma * 100.0);  // near the l1 floor
}

TEST_CASE("ear on synthesized data") {
  SynthFixture fx(SynthKind::A);
  const auto model = train_model(fx.inputs(), fx.config(ModelKind::Ear));

  SUBCASE("validation accuracy reaches 0.9") {
    ScoringOptions sc;
    sc.only_variable = fx.spec.target;
    const auto rep = evaluate_model(
        [&](const Evidence& ev) { return predict(model, ev); }, fx.test,
        fx.layout, sc);
    CHECK(rep.acc >= 0.9);
  }

  SUBCASE("prediction is a pure function of the observation") {
    const Evidence ev = {{0, 1}};
    const auto a = predict(model, ev);
    const auto b = predict(model, ev);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("observed blocks are copied within 0.1 mean absolute deviation") {
    double dev = 0.0;
    int count = 0;
    for (const auto& tc : fx.test.cases) {
      if (tc.evidence.empty()) continue;
      const auto pair = encode_observation(fx.layout, tc.evidence);
      const auto y = predict_vector(model, pair.o);
      for (const auto& [v, s] : tc.evidence) {
        const auto uv = static_cast<std::size_t>(v);
        for (int k = 0; k < fx.layout.width[uv]; ++k) {
          dev += std::abs(y[fx.layout.offset[uv] + k] -
                          pair.o[fx.layout.offset[uv] + k]);
          ++count;
        }
      }
    }
    CHECK(dev / count <= 0.1);
  }
}

TEST_CASE("trained kind-B ear predicts the prior regardless of evidence") {
  SynthFixture fx(SynthKind::B, 31);
  const auto model = train_model(fx.inputs(), fx.config(ModelKind::Ear));
  const auto prior = posterior_marginals_ve(fx.spec.net, {});
  const auto& target_prior = prior.marginals.at(fx.spec.target);
  for (const Evidence& ev : {Evidence{}, Evidence{{1, 0}}, Evidence{{1, 1}}}) {
    const auto y = predict(model, ev);
    const auto off =
        fx.layout.offset[static_cast<std::size_t>(fx.spec.target)];
    CHECK(std::abs(y[off] - target_prior[0]) <= 0.1);
    CHECK(std::abs(y[off + 1] - target_prior[1]) <= 0.1);
  }
}

TEST_CASE("all-observed masks reduce training to the stability fit") {
  SynthFixture fx(SynthKind::A, 41, 2000);
  TrainInputs in = fx.inputs();
  in.policy = ObservationPolicy::all_observed();
  in.validation = nullptr;
  ModelConfig cfg = fx.config(ModelKind::Ear);
  cfg.epochs = 80;
  const auto model = train_model(in, cfg);
  // with every block observed the net learns to copy its input
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const auto a = ancestral_sample(fx.spec.net, rng);
    const auto x = encode_assignment(fx.layout, a);
    const auto y = predict_vector(model, x);
    CHECK((y - x).cwiseAbs().maxCoeff() <= 0.15);
  }
}

TEST_CASE("training is bit-reproducible for a fixed seed") {
  SynthFixture fx(SynthKind::C, 51, 1500);
  ModelConfig cfg = fx.config(ModelKind::Ear, 7);
  cfg.epochs = 10;
  const auto a = train_model(fx.inputs(), cfg);
  const auto b = train_model(fx.inputs(), cfg);
  REQUIRE(a.params.size() == b.params.size());
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    for (std::size_t l = 0; l < a.params[i].w.size(); ++l) {
      CHECK((a.params[i].w[l] - b.params[i].w[l]).cwiseAbs().maxCoeff() ==
            0.0);
    }
  }
  CHECK(model_to_json(a) == model_to_json(b));
}

TEST_CASE("eara with a silent adversary walks the ear trajectory") {
  SynthFixture fx(SynthKind::A, 61, 1500);
  ModelConfig ear_cfg = fx.config(ModelKind::Ear, 9);
  ear_cfg.epochs = 8;
  ModelConfig eara_cfg = fx.config(ModelKind::Eara, 9);
  eara_cfg.epochs = 8;
  eara_cfg.adv_weight = 0.0;

  const auto ear = train_model(fx.inputs(), ear_cfg);
  const auto eara = train_model(fx.inputs(), eara_cfg);
  for (std::size_t l = 0; l < ear.params[0].w.size(); ++l) {
    CHECK((ear.params[0].w[l] - eara.params[0].w[l]).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("checkpoints round trip through json") {
  SynthFixture fx(SynthKind::A, 71, 1200);
  ModelConfig cfg = fx.config(ModelKind::Cvae, 3);
  cfg.epochs = 5;
  cfg.latent_dim = 4;
  const auto model = train_model(fx.inputs(), cfg);

  namespace fs = std::filesystem;
  const auto path =
      (fs::temp_directory_path() / "hetinf_ckpt_test.json").string();
  save_model(model, path);
  const auto again = load_model(path);
  CHECK(model_to_json(model) == model_to_json(again));

  Rng r1(5), r2(5);
  const auto a = predict(model, {{1, 1}}, &r1);
  const auto b = predict(again, {{1, 1}}, &r2);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  fs::remove(path);
}

TEST_CASE("stochastic predictions are pure functions of the seed") {
  SynthFixture fx(SynthKind::C, 81, 1200);
  for (ModelKind kind : {ModelKind::Cgan, ModelKind::Cvae, ModelKind::Rbm}) {
    ModelConfig cfg = fx.config(kind, 11);
    cfg.epochs = 4;
    cfg.latent_dim = 4;
    const auto model = train_model(fx.inputs(), cfg);
    Rng r1(42), r2(42), r3(43);
    const auto a = predict(model, {{1, 0}}, &r1);
    const auto b = predict(model, {{1, 0}}, &r2);
    const auto c = predict(model, {{1, 0}}, &r3);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    // different seeds genuinely resample
    if (kind != ModelKind::Rbm) {
      CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
    }
  }
}

TEST_CASE("cgan with a zero-width latent is deterministic") {
  SynthFixture fx(SynthKind::A, 91, 1200);
  ModelConfig cfg = fx.config(ModelKind::Cgan, 13);
  cfg.epochs = 4;
  cfg.latent_dim = 0;
  const auto model = train_model(fx.inputs(), cfg);
  Rng r1(1), r2(999);
  const auto a = predict(model, {{0, 1}}, &r1);
  const auto b = predict(model, {{0, 1}}, &r2);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("vae kl term closed forms via engineered encoders") {
  const int d = 2;
  const int dz = 2;
  const auto enc = tower(d, {2}, 2 * dz);
  const auto dec = tower(dz, {2}, d);
  auto zero_params = [](const NetSpec& spec) {
    Params p;
    for (int l = 0; l < spec.layer_count(); ++l) {
      p.w.emplace_back(
          Eigen::MatrixXd::Zero(spec.layer_out(l), spec.layer_in(l)));
      p.b.emplace_back(Eigen::VectorXd::Zero(spec.layer_out(l)));
    }
    return p;
  };
  Params enc_p = zero_params(enc);
  Params dec_p = zero_params(dec);
  const Eigen::MatrixXd X = Eigen::MatrixXd::Zero(1, d);
  const Eigen::MatrixXd O = Eigen::MatrixXd::Zero(1, d);
  const Eigen::MatrixXd noise = Eigen::MatrixXd::Zero(1, dz);

  // mu = 0, log variance = 0: the bound collapses to the reconstruction
  CHECK(vae_loss(enc, enc_p, dec, dec_p, O, X, noise, dz, nullptr, nullptr,
                 nullptr) == doctest::Approx(0.0));

  // mu = (1, 0), sigma = 1: KL = 0.5
  enc_p.b[1][0] = 1.0;
  CHECK(vae_loss(enc, enc_p, dec, dec_p, O, X, noise, dz, nullptr, nullptr,
                 nullptr) == doctest::Approx(0.5));
}

TEST_CASE("nc requires a target and ear family rejects empty data") {
  SynthFixture fx(SynthKind::A, 95, 1000);
  ModelConfig cfg = fx.config(ModelKind::Nc, 1);
  cfg.nc_target = -1;
  CHECK_THROWS_AS(train_model(fx.inputs(), cfg), std::invalid_argument);

  Dataset empty;
  empty.network_name = "x";
  TrainInputs in;
  in.data = &empty;
  in.layout = &fx.layout;
  CHECK_THROWS_AS(train_model(in, fx.config(ModelKind::Ear)),
                  std::invalid_argument);
}
