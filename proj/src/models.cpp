#include "hetinf/models.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace hetinf {

std::string model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Ear: return "ear";
    case ModelKind::Eara: return "eara";
    case ModelKind::Nc: return "nc";
    case ModelKind::Rbm: return "rbm";
    case ModelKind::Wgan: return "wgan";
    case ModelKind::Cgan: return "cgan";
    case ModelKind::Vae: return "vae";
    case ModelKind::Cvae: return "cvae";
  }
  return "ear";
}

ModelKind model_kind_from_name(const std::string& name) {
  for (ModelKind k : all_model_kinds()) {
    if (model_kind_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown model kind: " + name);
}

const std::vector<ModelKind>& all_model_kinds() {
  static const std::vector<ModelKind> kinds = {
      ModelKind::Rbm,  ModelKind::Wgan, ModelKind::Cgan, ModelKind::Vae,
      ModelKind::Cvae, ModelKind::Ear,  ModelKind::Eara, ModelKind::Nc};
  return kinds;
}

ModelConfig default_config(ModelKind kind, std::uint64_t seed) {
  ModelConfig c;
  c.kind = kind;
  c.seed = seed;
  switch (kind) {
    case ModelKind::Wgan:
    case ModelKind::Cgan:
      c.optimizer = "rmsprop";
      c.learning_rate = 0.001;
      break;
    case ModelKind::Rbm:
      c.optimizer = "sgd";
      c.learning_rate = 0.05;
      break;
    default:
      c.optimizer = "momentum";
      c.learning_rate = 0.01;
      break;
  }
  return c;
}

namespace {

nlohmann::ordered_json config_json(const ModelConfig& c) {
  nlohmann::ordered_json j;
  j["kind"] = model_kind_name(c.kind);
  j["hidden"] = c.hidden;
  j["disc_hidden"] = c.disc_hidden;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["gamma"] = c.gamma;
  j["optimizer"] = c.optimizer;
  j["learning_rate"] = c.learning_rate;
  j["momentum"] = c.momentum;
  j["rmsprop_rho"] = c.rmsprop_rho;
  j["rmsprop_eps"] = c.rmsprop_eps;
  j["disc_learning_rate"] = c.disc_learning_rate;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["latent_dim"] = c.latent_dim;
  j["cd_k"] = c.cd_k;
  j["rbm_hidden"] = c.rbm_hidden;
  j["predict_samples"] = c.predict_samples;
  j["patience"] = c.patience;
  j["min_epochs"] = c.min_epochs;
  j["adv_weight"] = c.adv_weight;
  j["n_critic"] = c.n_critic;
  j["clip"] = c.clip;
  j["seed"] = c.seed;
  j["nc_target"] = c.nc_target;
  j["extra_state_encoding"] = c.extra_state_encoding;
  return j;
}

ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.kind = model_kind_from_name(j.at("kind").get<std::string>());
  c.hidden = j.at("hidden").get<std::vector<int>>();
  c.disc_hidden = j.at("disc_hidden").get<int>();
  c.alpha = j.at("alpha").get<double>();
  c.beta = j.at("beta").get<double>();
  c.gamma = j.at("gamma").get<double>();
  c.optimizer = j.at("optimizer").get<std::string>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.momentum = j.at("momentum").get<double>();
  c.rmsprop_rho = j.at("rmsprop_rho").get<double>();
  c.rmsprop_eps = j.at("rmsprop_eps").get<double>();
  c.disc_learning_rate = j.at("disc_learning_rate").get<double>();
  c.epochs = j.at("epochs").get<int>();
  c.batch_size = j.at("batch_size").get<int>();
  c.latent_dim = j.at("latent_dim").get<int>();
  c.cd_k = j.at("cd_k").get<int>();
  c.rbm_hidden = j.at("rbm_hidden").get<int>();
  c.predict_samples = j.at("predict_samples").get<int>();
  c.patience = j.at("patience").get<int>();
  c.min_epochs = j.value("min_epochs", 40);
  c.adv_weight = j.at("adv_weight").get<double>();
  c.n_critic = j.at("n_critic").get<int>();
  c.clip = j.at("clip").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.nc_target = j.at("nc_target").get<int>();
  c.extra_state_encoding = j.at("extra_state_encoding").get<bool>();
  return c;
}

}  // namespace

std::string ModelConfig::to_json() const { return config_json(*this).dump(2); }

ModelConfig ModelConfig::from_json(const std::string& text) {
  return config_from_json(nlohmann::json::parse(text));
}

// --- loss evaluators ---

EarLossResult ear_loss(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Xhat,
                       const Eigen::MatrixXd& mask, const Params& params,
                       double alpha, double beta, double gamma,
                       const Eigen::VectorXd* block_weight) {
  if (X.rows() != Xhat.rows() || X.cols() != Xhat.cols() ||
      X.rows() != mask.rows() || X.cols() != mask.cols()) {
    throw ShapeError("ear_loss: shape mismatch");
  }
  const double n = static_cast<double>(X.rows());
  Eigen::ArrayXXd weight =
      alpha * mask.array() + beta * (1.0 - mask.array());
  if (block_weight) {
    weight.rowwise() *= block_weight->transpose().array();
  }
  const Eigen::ArrayXXd diff = Xhat.array() - X.array();
  EarLossResult res;
  res.loss = (weight * diff.square()).sum() / n + gamma * params.l1_norm();
  res.d_xhat = ((2.0 / n) * weight * diff).matrix();
  return res;
}

void add_l1_subgradient(const Params& params, double gamma, Grads* grads) {
  if (gamma == 0.0) return;
  for (std::size_t l = 0; l < params.w.size(); ++l) {
    grads->w[l] += gamma * params.w[l].array().sign().matrix();
    grads->b[l] += gamma * params.b[l].array().sign().matrix();
  }
}

namespace {

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

Eigen::ArrayXd sigmoid_col(const Eigen::MatrixXd& logits) {
  return 1.0 / (1.0 + (-logits.col(0).array()).exp());
}

}  // namespace

double gan_disc_loss(const NetSpec& spec, const Params& params,
                     const Eigen::MatrixXd& real_in,
                     const Eigen::MatrixXd& fake_in, Grads* grads) {
  const double n_real = static_cast<double>(real_in.rows());
  const double n_fake = static_cast<double>(fake_in.rows());

  ForwardCache real_cache, fake_cache;
  const Eigen::MatrixXd u_real = forward(spec, params, real_in, &real_cache);
  const Eigen::MatrixXd u_fake = forward(spec, params, fake_in, &fake_cache);

  double loss = 0.0;
  for (int i = 0; i < u_real.rows(); ++i) loss += softplus(-u_real(i, 0));
  loss /= n_real;
  double loss_fake = 0.0;
  for (int i = 0; i < u_fake.rows(); ++i) loss_fake += softplus(u_fake(i, 0));
  loss += loss_fake / n_fake;

  if (grads) {
    Eigen::MatrixXd du_real =
        ((sigmoid_col(u_real) - 1.0) / n_real).matrix();
    Eigen::MatrixXd du_fake = (sigmoid_col(u_fake) / n_fake).matrix();
    Grads g_real = backward(spec, params, real_cache, du_real);
    Grads g_fake = backward(spec, params, fake_cache, du_fake);
    for (std::size_t l = 0; l < grads->w.size(); ++l) {
      grads->w[l] += g_real.w[l] + g_fake.w[l];
      grads->b[l] += g_real.b[l] + g_fake.b[l];
    }
  }
  return loss;
}

double gan_gen_term(const NetSpec& spec, const Params& params,
                    const Eigen::MatrixXd& fake_in, Eigen::MatrixXd* d_fake,
                    double* mean_fake_score) {
  const double n = static_cast<double>(fake_in.rows());
  ForwardCache cache;
  const Eigen::MatrixXd u = forward(spec, params, fake_in, &cache);
  double term = 0.0;
  for (int i = 0; i < u.rows(); ++i) term -= softplus(u(i, 0));
  term /= n;
  const Eigen::ArrayXd s = sigmoid_col(u);
  if (mean_fake_score) *mean_fake_score = s.mean();
  if (d_fake) {
    Eigen::MatrixXd du = (-s / n).matrix();
    *d_fake = backward(spec, params, cache, du).input;
  }
  return term;
}

double wgan_critic_loss(const NetSpec& spec, const Params& params,
                        const Eigen::MatrixXd& real_in,
                        const Eigen::MatrixXd& fake_in, Grads* grads) {
  const double n_real = static_cast<double>(real_in.rows());
  const double n_fake = static_cast<double>(fake_in.rows());
  ForwardCache real_cache, fake_cache;
  const Eigen::MatrixXd u_real = forward(spec, params, real_in, &real_cache);
  const Eigen::MatrixXd u_fake = forward(spec, params, fake_in, &fake_cache);
  const double loss =
      u_fake.col(0).mean() - u_real.col(0).mean();
  if (grads) {
    Eigen::MatrixXd du_real =
        Eigen::MatrixXd::Constant(u_real.rows(), 1, -1.0 / n_real);
    Eigen::MatrixXd du_fake =
        Eigen::MatrixXd::Constant(u_fake.rows(), 1, 1.0 / n_fake);
    Grads g_real = backward(spec, params, real_cache, du_real);
    Grads g_fake = backward(spec, params, fake_cache, du_fake);
    for (std::size_t l = 0; l < grads->w.size(); ++l) {
      grads->w[l] += g_real.w[l] + g_fake.w[l];
      grads->b[l] += g_real.b[l] + g_fake.b[l];
    }
  }
  return loss;
}

double wgan_gen_term(const NetSpec& spec, const Params& params,
                     const Eigen::MatrixXd& fake_in,
                     Eigen::MatrixXd* d_fake) {
  const double n = static_cast<double>(fake_in.rows());
  ForwardCache cache;
  const Eigen::MatrixXd u = forward(spec, params, fake_in, &cache);
  const double loss = -u.col(0).mean();
  if (d_fake) {
    Eigen::MatrixXd du =
        Eigen::MatrixXd::Constant(u.rows(), 1, -1.0 / n);
    *d_fake = backward(spec, params, cache, du).input;
  }
  return loss;
}

double vae_loss(const NetSpec& enc_spec, const Params& enc_params,
                const NetSpec& dec_spec, const Params& dec_params,
                const Eigen::MatrixXd& enc_in, const Eigen::MatrixXd& X,
                const Eigen::MatrixXd& noise, int latent_dim,
                const Eigen::MatrixXd* dec_extra_in, Grads* enc_grads,
                Grads* dec_grads) {
  const auto n_rows = X.rows();
  const double n = static_cast<double>(n_rows);
  if (enc_spec.output != 2 * latent_dim) {
    throw ShapeError("vae_loss: encoder output must be 2 * latent_dim");
  }

  ForwardCache enc_cache;
  const Eigen::MatrixXd enc_out =
      forward(enc_spec, enc_params, enc_in, &enc_cache);
  const Eigen::MatrixXd mu = enc_out.leftCols(latent_dim);
  const Eigen::MatrixXd lv = enc_out.rightCols(latent_dim);
  const Eigen::ArrayXXd sigma = (0.5 * lv.array()).exp();
  const Eigen::MatrixXd z =
      mu + (sigma * noise.array()).matrix();

  Eigen::MatrixXd dec_in;
  if (dec_extra_in) {
    dec_in.resize(n_rows, z.cols() + dec_extra_in->cols());
    dec_in << z, *dec_extra_in;
  } else {
    dec_in = z;
  }

  ForwardCache dec_cache;
  const Eigen::MatrixXd xhat =
      forward(dec_spec, dec_params, dec_in, &dec_cache);

  const Eigen::ArrayXXd diff = xhat.array() - X.array();
  const double recon = diff.square().sum() / n;
  const double kl =
      0.5 *
      (mu.array().square() + lv.array().exp() - 1.0 - lv.array()).sum() / n;

  if (enc_grads || dec_grads) {
    Eigen::MatrixXd d_xhat = (2.0 / n) * diff.matrix();
    Grads dec_g = backward(dec_spec, dec_params, dec_cache, d_xhat);
    if (dec_grads) {
      for (std::size_t l = 0; l < dec_grads->w.size(); ++l) {
        dec_grads->w[l] += dec_g.w[l];
        dec_grads->b[l] += dec_g.b[l];
      }
    }
    if (enc_grads) {
      const Eigen::MatrixXd dz = dec_g.input.leftCols(latent_dim);
      Eigen::MatrixXd d_enc_out(n_rows, 2 * latent_dim);
      d_enc_out.leftCols(latent_dim) = dz + (mu.array() / n).matrix();
      d_enc_out.rightCols(latent_dim) =
          (dz.array() * noise.array() * 0.5 * sigma +
           0.5 * (lv.array().exp() - 1.0) / n)
              .matrix();
      Grads enc_g = backward(enc_spec, enc_params, enc_cache, d_enc_out);
      for (std::size_t l = 0; l < enc_grads->w.size(); ++l) {
        enc_grads->w[l] += enc_g.w[l];
        enc_grads->b[l] += enc_g.b[l];
      }
    }
  }
  return recon + kl;
}

Eigen::VectorXd rbm_visible_given_hidden(const RbmParams& p,
                                         const Eigen::VectorXd& h) {
  const Eigen::ArrayXd act = (p.a + p.w * h).array();
  return (1.0 / (1.0 + (-act).exp())).matrix();
}

Eigen::VectorXd rbm_hidden_given_visible(const RbmParams& p,
                                         const Eigen::VectorXd& v) {
  const Eigen::ArrayXd act = (p.b + p.w.transpose() * v).array();
  return (1.0 / (1.0 + (-act).exp())).matrix();
}

std::pair<NetSpec, Params> compose_block_diagonal(
    const std::vector<std::pair<NetSpec, Params>>& members) {
  if (members.empty()) {
    throw ShapeError("compose_block_diagonal: no member nets");
  }
  const int input = members.front().first.input;
  int hidden_total = 0;
  int output_total = 0;
  for (const auto& [spec, params] : members) {
    if (spec.layer_count() != 2 || spec.hidden.size() != 1) {
      throw ShapeError("compose_block_diagonal: members must be 3-layer nets");
    }
    if (spec.input != input) {
      throw ShapeError("compose_block_diagonal: mismatched input widths");
    }
    if (spec.hidden_act != members.front().first.hidden_act ||
        spec.output_act != members.front().first.output_act) {
      throw ShapeError("compose_block_diagonal: mismatched activations");
    }
    hidden_total += spec.hidden[0];
    output_total += spec.output;
  }

  NetSpec spec;
  spec.input = input;
  spec.hidden = {hidden_total};
  spec.output = output_total;
  spec.hidden_act = members.front().first.hidden_act;
  spec.output_act = members.front().first.output_act;

  Params params;
  params.w.emplace_back(Eigen::MatrixXd::Zero(hidden_total, input));
  params.b.emplace_back(Eigen::VectorXd::Zero(hidden_total));
  params.w.emplace_back(Eigen::MatrixXd::Zero(output_total, hidden_total));
  params.b.emplace_back(Eigen::VectorXd::Zero(output_total));

  int h_at = 0;
  int o_at = 0;
  for (const auto& [mspec, mparams] : members) {
    const int h = mspec.hidden[0];
    const int o = mspec.output;
    params.w[0].block(h_at, 0, h, input) = mparams.w[0];
    params.b[0].segment(h_at, h) = mparams.b[0];
    params.w[1].block(o_at, h_at, o, h) = mparams.w[1];
    params.b[1].segment(o_at, o) = mparams.b[1];
    h_at += h;
    o_at += o;
  }
  return {spec, params};
}

// --- prediction ---

namespace {

Eigen::VectorXd forward_single(const NetSpec& spec, const Params& params,
                               const Eigen::VectorXd& in) {
  Eigen::MatrixXd x(1, in.size());
  x.row(0) = in.transpose();
  return forward(spec, params, x).row(0).transpose();
}

Eigen::VectorXd sample_bernoulli(const Eigen::VectorXd& probs, Rng& rng) {
  Eigen::VectorXd out(probs.size());
  for (int i = 0; i < probs.size(); ++i) {
    out[i] = rng.uniform01() < probs[i] ? 1.0 : 0.0;
  }
  return out;
}

}  // namespace

Eigen::VectorXd predict_vector(const TrainedModel& model,
                               const Eigen::VectorXd& o, Rng* rng) {
  if (static_cast<int>(o.size()) != model.layout.total) {
    throw ShapeError("predict: observation width mismatch");
  }
  const int s_count = std::max(1, model.config.predict_samples);
  switch (model.kind) {
    case ModelKind::Ear:
    case ModelKind::Eara:
    case ModelKind::Nc:
    case ModelKind::Wgan:
      return forward_single(model.specs[0], model.params[0], o);
    case ModelKind::Vae: {
      const int dz = model.config.latent_dim;
      const Eigen::VectorXd enc_out =
          forward_single(model.specs[0], model.params[0], o);
      const Eigen::VectorXd mu = enc_out.head(dz);
      return forward_single(model.specs[1], model.params[1], mu);
    }
    case ModelKind::Cvae: {
      if (!rng) throw std::invalid_argument("cvae predict needs an rng");
      const int dz = model.config.latent_dim;
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(model.layout.total);
      Eigen::VectorXd dec_in(dz + model.layout.total);
      for (int s = 0; s < s_count; ++s) {
        for (int i = 0; i < dz; ++i) dec_in[i] = rng->normal();
        dec_in.tail(model.layout.total) = o;
        acc += forward_single(model.specs[1], model.params[1], dec_in);
      }
      return acc / static_cast<double>(s_count);
    }
    case ModelKind::Cgan: {
      if (!rng) throw std::invalid_argument("cgan predict needs an rng");
      const int dz = model.config.latent_dim;
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(model.layout.total);
      Eigen::VectorXd gen_in(dz + model.layout.total);
      for (int s = 0; s < s_count; ++s) {
        for (int i = 0; i < dz; ++i) gen_in[i] = rng->normal();
        gen_in.tail(model.layout.total) = o;
        acc += forward_single(model.specs[0], model.params[0], gen_in);
      }
      return acc / static_cast<double>(s_count);
    }
    case ModelKind::Rbm: {
      if (!rng) throw std::invalid_argument("rbm predict needs an rng");
      const Eigen::VectorXd h_probs = rbm_hidden_given_visible(model.rbm, o);
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(model.layout.total);
      for (int s = 0; s < s_count; ++s) {
        const Eigen::VectorXd h = sample_bernoulli(h_probs, *rng);
        acc += rbm_visible_given_hidden(model.rbm, h);
      }
      return acc / static_cast<double>(s_count);
    }
  }
  throw std::logic_error("unreachable model kind");
}

Eigen::VectorXd predict(const TrainedModel& model, const Evidence& evidence,
                        Rng* rng) {
  return predict_vector(model, encode_observation(model.layout, evidence).o,
                        rng);
}

// --- checkpoints ---

namespace {

nlohmann::ordered_json spec_json(const NetSpec& s) {
  nlohmann::ordered_json j;
  j["input"] = s.input;
  j["hidden"] = s.hidden;
  j["output"] = s.output;
  j["hidden_act"] = activation_name(s.hidden_act);
  j["output_act"] = activation_name(s.output_act);
  return j;
}

NetSpec spec_from_json(const nlohmann::json& j) {
  NetSpec s;
  s.input = j.at("input").get<int>();
  s.hidden = j.at("hidden").get<std::vector<int>>();
  s.output = j.at("output").get<int>();
  s.hidden_act = activation_from_name(j.at("hidden_act").get<std::string>());
  s.output_act = activation_from_name(j.at("output_act").get<std::string>());
  return s;
}

nlohmann::ordered_json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int r = 0; r < m.rows(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.size();
  if (rows == 0) return Eigen::MatrixXd(0, 0);
  const auto cols = j.at(0).size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<int>(r), static_cast<int>(c)) = j.at(r).at(c).get<double>();
    }
  }
  return m;
}

nlohmann::ordered_json vector_json(const Eigen::VectorXd& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<int>(i)] = j.at(i).get<double>();
  }
  return v;
}

}  // namespace

std::string model_to_json(const TrainedModel& model) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["kind"] = model_kind_name(model.kind);
  j["config"] = config_json(model.config);
  j["network_name"] = model.network_name;
  j["network_hash"] = hex64(model.network_hash);
  j["layout"]["extra_state"] = model.layout.extra_state;
  j["layout"]["total"] = model.layout.total;
  j["layout"]["offset"] = model.layout.offset;
  j["layout"]["width"] = model.layout.width;
  j["layout"]["data_width"] = model.layout.data_width;
  j["nets"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < model.specs.size(); ++i) {
    nlohmann::ordered_json net;
    net["spec"] = spec_json(model.specs[i]);
    net["w"] = nlohmann::ordered_json::array();
    net["b"] = nlohmann::ordered_json::array();
    for (const auto& w : model.params[i].w) net["w"].push_back(matrix_json(w));
    for (const auto& b : model.params[i].b) net["b"].push_back(vector_json(b));
    j["nets"].push_back(std::move(net));
  }
  if (model.kind == ModelKind::Rbm) {
    j["rbm"]["w"] = matrix_json(model.rbm.w);
    j["rbm"]["a"] = vector_json(model.rbm.a);
    j["rbm"]["b"] = vector_json(model.rbm.b);
  }
  j["log"] = nlohmann::ordered_json::array();
  for (const auto& e : model.log) {
    nlohmann::ordered_json je;
    je["epoch"] = e.epoch;
    je["loss"] = e.loss;
    je["val_ad"] = e.val_ad;
    je["aux"] = e.aux;
    j["log"].push_back(std::move(je));
  }
  return j.dump(2) + "\n";
}

TrainedModel model_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  TrainedModel m;
  m.kind = model_kind_from_name(j.at("kind").get<std::string>());
  m.config = config_from_json(j.at("config"));
  m.network_name = j.at("network_name").get<std::string>();
  m.network_hash =
      std::stoull(j.at("network_hash").get<std::string>(), nullptr, 16);
  m.layout.extra_state = j.at("layout").at("extra_state").get<bool>();
  m.layout.total = j.at("layout").at("total").get<int>();
  m.layout.offset = j.at("layout").at("offset").get<std::vector<int>>();
  m.layout.width = j.at("layout").at("width").get<std::vector<int>>();
  m.layout.data_width =
      j.at("layout").at("data_width").get<std::vector<int>>();
  for (const auto& net : j.at("nets")) {
    m.specs.push_back(spec_from_json(net.at("spec")));
    Params p;
    for (const auto& w : net.at("w")) p.w.push_back(matrix_from_json(w));
    for (const auto& b : net.at("b")) p.b.push_back(vector_from_json(b));
    m.params.push_back(std::move(p));
  }
  if (j.contains("rbm")) {
    m.rbm.w = matrix_from_json(j.at("rbm").at("w"));
    m.rbm.a = vector_from_json(j.at("rbm").at("a"));
    m.rbm.b = vector_from_json(j.at("rbm").at("b"));
  }
  for (const auto& je : j.at("log")) {
    TrainingLogEntry e;
    e.epoch = je.at("epoch").get<int>();
    e.loss = je.at("loss").get<double>();
    e.val_ad = je.at("val_ad").get<double>();
    e.aux = je.at("aux").get<std::map<std::string, double>>();
    m.log.push_back(std::move(e));
  }
  return m;
}

void save_model(const TrainedModel& model, const std::string& path) {
  write_text_file(path, model_to_json(model));
}

TrainedModel load_model(const std::string& path) {
  return model_from_json(read_text_file(path));
}

}  // namespace hetinf
