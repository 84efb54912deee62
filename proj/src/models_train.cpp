#include <algorithm>
#include <cmath>
#include <limits>

#include "hetinf/models.hpp"

namespace hetinf {
namespace {

struct TrainStreams {
  Rng init;
  Rng shuffle;
  Rng mask;
  Rng noise;
  Rng aux_init;     // adversary / second net
  Rng aux_shuffle;  // adversary batch stream
  Rng aux_mask;
  std::uint64_t val_base;

  explicit TrainStreams(std::uint64_t seed)
      : init(Rng(seed).derive(1)),
        shuffle(Rng(seed).derive(2)),
        mask(Rng(seed).derive(3)),
        noise(Rng(seed).derive(4)),
        aux_init(Rng(seed).derive(11)),
        aux_shuffle(Rng(seed).derive(12)),
        aux_mask(Rng(seed).derive(13)),
        val_base(Rng::mix(seed ^ 0xda7a5e7)) {}
};

/// Shuffled minibatch cursor over the dataset; re-shuffles per pass.
class BatchStream {
 public:
  BatchStream(const Dataset& data, int batch_size, Rng& rng)
      : data_(data), batch_(batch_size), rng_(rng) {
    idx_.resize(data.samples.size());
    for (std::size_t i = 0; i < idx_.size(); ++i) {
      idx_[i] = static_cast<int>(i);
    }
    reshuffle();
  }

  std::vector<int> next() {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(batch_));
    for (int i = 0; i < batch_; ++i) {
      if (at_ >= idx_.size()) reshuffle();
      out.push_back(idx_[at_++]);
    }
    return out;
  }

  int batches_per_pass() const {
    return static_cast<int>(
        (idx_.size() + static_cast<std::size_t>(batch_) - 1) /
        static_cast<std::size_t>(batch_));
  }

 private:
  void reshuffle() {
    rng_.shuffle(idx_);
    at_ = 0;
  }

  const Dataset& data_;
  int batch_;
  Rng& rng_;
  std::vector<int> idx_;
  std::size_t at_ = 0;
};

struct EncodedBatch {
  Eigen::MatrixXd x;     // true samples, one-hot
  Eigen::MatrixXd o;     // observation vectors
  Eigen::MatrixXd mask;  // 1 on latent blocks
};

EncodedBatch encode_batch(const Dataset& data, const OneHotLayout& layout,
                          const ObservationPolicy& policy,
                          const std::vector<int>& indices, Rng& mask_rng) {
  const int n = static_cast<int>(indices.size());
  EncodedBatch b;
  b.x.resize(n, layout.total);
  b.o.resize(n, layout.total);
  b.mask.resize(n, layout.total);
  for (int i = 0; i < n; ++i) {
    const Assignment& a =
        data.samples[static_cast<std::size_t>(indices[static_cast<std::size_t>(i)])];
    b.x.row(i) = encode_assignment(layout, a).transpose();
    const Evidence ev = policy.draw(a, layout.var_count(), mask_rng);
    const ObservationPair pair = encode_observation(layout, ev);
    b.o.row(i) = pair.o.transpose();
    b.mask.row(i) = pair.mask.transpose();
  }
  return b;
}

OptState make_opt(const NetSpec& spec, const ModelConfig& cfg, double lr) {
  if (cfg.optimizer == "rmsprop") {
    return OptState::rmsprop(spec, lr, cfg.rmsprop_rho, cfg.rmsprop_eps);
  }
  const double mu = cfg.optimizer == "sgd" ? 0.0 : cfg.momentum;
  return OptState::momentum_sgd(spec, lr, mu);
}

double disc_lr(const ModelConfig& cfg) {
  return cfg.disc_learning_rate > 0.0 ? cfg.disc_learning_rate
                                      : cfg.learning_rate;
}

Eigen::MatrixXd gaussian_matrix(int rows, int cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = rng.normal();
  }
  return m;
}

Eigen::MatrixXd bernoulli_matrix(const Eigen::MatrixXd& probs, Rng& rng) {
  Eigen::MatrixXd out(probs.rows(), probs.cols());
  for (int r = 0; r < probs.rows(); ++r) {
    for (int c = 0; c < probs.cols(); ++c) {
      out(r, c) = rng.uniform01() < probs(r, c) ? 1.0 : 0.0;
    }
  }
  return out;
}

double validation_ad(const TrainedModel& snapshot, const TestSet& val,
                     const ScoringOptions& scoring, std::uint64_t seed) {
  Rng rng(seed);
  Rng* rng_ptr = nullptr;
  if (snapshot.kind == ModelKind::Rbm || snapshot.kind == ModelKind::Cgan ||
      snapshot.kind == ModelKind::Cvae) {
    rng_ptr = &rng;
  }
  const auto fn = [&](const Evidence& ev) {
    return predict(snapshot, ev, rng_ptr);
  };
  const MetricsReport rep =
      evaluate_model(fn, val, snapshot.layout, scoring);
  return rep.empty ? std::numeric_limits<double>::infinity() : rep.ad;
}

/// Tracks the best validation AD and restores the best parameter snapshot.
class EarlyStopper {
 public:
  EarlyStopper(const TrainInputs& inputs, const ModelConfig& cfg)
      : inputs_(inputs), patience_left_(cfg.patience) {}

  bool enabled() const { return inputs_.validation != nullptr; }

  /// Returns true when training should stop. The patience countdown only
  /// starts after the warm-up window; adversarial trainers in particular
  /// have noisy early validation curves.
  bool observe(TrainedModel& model, int epoch, TrainingLogEntry& entry,
               std::uint64_t val_base) {
    if (!enabled()) return false;
    TrainedModel probe = model;
    probe.config.predict_samples =
        std::min(model.config.predict_samples, 10);
    const double ad =
        validation_ad(probe, *inputs_.validation, inputs_.val_scoring,
                      Rng::mix(val_base + static_cast<std::uint64_t>(epoch)));
    entry.val_ad = ad;
    if (ad < best_ - 1e-12) {
      best_ = ad;
      best_params_ = model.params;
      best_rbm_ = model.rbm;
      patience_left_ = model.config.patience;
      return false;
    }
    if (epoch + 1 < model.config.min_epochs) return false;
    return --patience_left_ <= 0;
  }

  void restore(TrainedModel& model) const {
    if (!enabled() || best_params_.empty()) return;
    model.params = best_params_;
    model.rbm = best_rbm_;
  }

 private:
  const TrainInputs& inputs_;
  double best_ = std::numeric_limits<double>::infinity();
  std::vector<Params> best_params_;
  RbmParams best_rbm_;
  int patience_left_;
};

TrainedModel init_model(const TrainInputs& inputs, const ModelConfig& cfg) {
  if (!inputs.data || inputs.data->samples.empty()) {
    throw std::invalid_argument("training requires a nonempty dataset");
  }
  if (!inputs.layout) throw std::invalid_argument("training requires a layout");
  TrainedModel m;
  m.kind = cfg.kind;
  m.config = cfg;
  m.layout = *inputs.layout;
  m.network_name = inputs.data->network_name;
  m.network_hash = inputs.data->network_hash;
  return m;
}

NetSpec tower_spec(int in, const std::vector<int>& hidden, int out) {
  NetSpec s;
  s.input = in;
  s.hidden = hidden;
  s.output = out;
  return s;
}

// --- EAR / NC / EARA ---

TrainedModel train_ear_family(const TrainInputs& inputs,
                              const ModelConfig& cfg) {
  TrainedModel model = init_model(inputs, cfg);
  const OneHotLayout& layout = model.layout;
  const int d = layout.total;
  const bool adversarial = cfg.kind == ModelKind::Eara;

  Eigen::VectorXd block_weight = Eigen::VectorXd::Ones(d);
  const Eigen::VectorXd* block_ptr = nullptr;
  if (cfg.kind == ModelKind::Nc) {
    if (cfg.nc_target < 0 || cfg.nc_target >= layout.var_count()) {
      throw std::invalid_argument("nc training requires a valid target");
    }
    block_weight.setZero();
    const auto t = static_cast<std::size_t>(cfg.nc_target);
    for (int k = 0; k < layout.width[t]; ++k) {
      block_weight[layout.offset[t] + k] = 1.0;
    }
    block_ptr = &block_weight;
  }

  TrainStreams streams(cfg.seed);
  model.specs.push_back(tower_spec(d, cfg.hidden, d));
  model.params.push_back(init_params(model.specs[0], streams.init));
  OptState gen_opt = make_opt(model.specs[0], cfg, cfg.learning_rate);

  NetSpec dspec;
  Params dparams;
  OptState dopt;
  if (adversarial) {
    dspec = tower_spec(d, {cfg.disc_hidden}, 1);
    dparams = init_params(dspec, streams.aux_init);
    dopt = make_opt(dspec, cfg, disc_lr(cfg));
  }

  EarlyStopper stopper(inputs, cfg);
  BatchStream gen_stream(*inputs.data, cfg.batch_size, streams.shuffle);
  BatchStream disc_stream(*inputs.data, cfg.batch_size, streams.aux_shuffle);
  const int batches = gen_stream.batches_per_pass();

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_loss = 0.0;
    double epoch_disc = 0.0;
    int saturated = 0;
    for (int t = 0; t < batches; ++t) {
      if (adversarial) {
        const auto idx = disc_stream.next();
        const EncodedBatch db = encode_batch(*inputs.data, layout,
                                             inputs.policy, idx,
                                             streams.aux_mask);
        const Eigen::MatrixXd fake =
            forward(model.specs[0], model.params[0], db.o);
        Grads dgrads = zero_grads(dspec);
        epoch_disc +=
            gan_disc_loss(dspec, dparams, db.x, fake, &dgrads);
        step(dopt, dparams, dgrads);
      }

      const auto idx = gen_stream.next();
      const EncodedBatch b = encode_batch(*inputs.data, layout, inputs.policy,
                                          idx, streams.mask);
      ForwardCache cache;
      const Eigen::MatrixXd xhat =
          forward(model.specs[0], model.params[0], b.o, &cache);
      EarLossResult ear = ear_loss(b.x, xhat, b.mask, model.params[0],
                                   cfg.alpha, cfg.beta, cfg.gamma, block_ptr);
      Eigen::MatrixXd dy = ear.d_xhat;
      double loss = ear.loss;
      if (adversarial && cfg.adv_weight != 0.0) {
        Eigen::MatrixXd d_fake;
        double fake_score = 0.0;
        const double term =
            gan_gen_term(dspec, dparams, xhat, &d_fake, &fake_score);
        loss += cfg.adv_weight * term;
        dy += cfg.adv_weight * d_fake;
        if (fake_score < 1e-3) ++saturated;
      }
      if (!std::isfinite(loss)) {
        throw DivergenceError("ear training diverged (non-finite loss)");
      }
      Grads grads = backward(model.specs[0], model.params[0], cache, dy);
      add_l1_subgradient(model.params[0], cfg.gamma, &grads);
      step(gen_opt, model.params[0], grads);
      epoch_loss += loss;
    }

    TrainingLogEntry entry;
    entry.epoch = epoch;
    entry.loss = epoch_loss / batches;
    if (adversarial) {
      entry.aux["disc_loss"] = epoch_disc / batches;
      entry.aux["saturated_batches"] = saturated;
    }
    const bool stop = stopper.observe(model, epoch, entry, streams.val_base);
    model.log.push_back(entry);
    if (stop) break;
  }
  stopper.restore(model);
  if (adversarial) {
    model.specs.push_back(dspec);
    model.params.push_back(dparams);
  }
  return model;
}

// --- WGAN ---

TrainedModel train_wgan(const TrainInputs& inputs, const ModelConfig& cfg) {
  TrainedModel model = init_model(inputs, cfg);
  const OneHotLayout& layout = model.layout;
  const int d = layout.total;

  TrainStreams streams(cfg.seed);
  model.specs.push_back(tower_spec(d, cfg.hidden, d));  // generator o -> X
  model.params.push_back(init_params(model.specs[0], streams.init));
  OptState gen_opt = make_opt(model.specs[0], cfg, cfg.learning_rate);

  NetSpec cspec = tower_spec(d, {cfg.disc_hidden}, 1);
  Params cparams = init_params(cspec, streams.aux_init);
  OptState copt = make_opt(cspec, cfg, disc_lr(cfg));

  auto clip_params = [&](Params& p) {
    for (std::size_t l = 0; l < p.w.size(); ++l) {
      p.w[l] = p.w[l].cwiseMax(-cfg.clip).cwiseMin(cfg.clip);
      p.b[l] = p.b[l].cwiseMax(-cfg.clip).cwiseMin(cfg.clip);
    }
  };

  EarlyStopper stopper(inputs, cfg);
  BatchStream stream(*inputs.data, cfg.batch_size, streams.shuffle);
  const int cycle = cfg.n_critic + 1;
  const int cycles_per_epoch =
      std::max(1, stream.batches_per_pass() / cycle);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_critic = 0.0;
    double epoch_gen = 0.0;
    for (int t = 0; t < cycles_per_epoch; ++t) {
      for (int c = 0; c < cfg.n_critic; ++c) {
        const EncodedBatch b = encode_batch(*inputs.data, layout,
                                            inputs.policy, stream.next(),
                                            streams.mask);
        const Eigen::MatrixXd fake =
            forward(model.specs[0], model.params[0], b.o);
        Grads cgrads = zero_grads(cspec);
        epoch_critic += wgan_critic_loss(cspec, cparams, b.x, fake, &cgrads);
        step(copt, cparams, cgrads);
        clip_params(cparams);
      }
      const EncodedBatch b = encode_batch(*inputs.data, layout, inputs.policy,
                                          stream.next(), streams.mask);
      ForwardCache cache;
      const Eigen::MatrixXd fake =
          forward(model.specs[0], model.params[0], b.o, &cache);
      Eigen::MatrixXd d_fake;
      const double gen_loss = wgan_gen_term(cspec, cparams, fake, &d_fake);
      if (!std::isfinite(gen_loss)) {
        throw DivergenceError("wgan training diverged");
      }
      Grads grads = backward(model.specs[0], model.params[0], cache, d_fake);
      step(gen_opt, model.params[0], grads);
      epoch_gen += gen_loss;
    }

    TrainingLogEntry entry;
    entry.epoch = epoch;
    entry.loss = epoch_gen / cycles_per_epoch;
    entry.aux["critic_loss"] =
        epoch_critic / (cycles_per_epoch * cfg.n_critic);
    const bool stop = stopper.observe(model, epoch, entry, streams.val_base);
    model.log.push_back(entry);
    if (stop) break;
  }
  stopper.restore(model);
  model.specs.push_back(cspec);
  model.params.push_back(cparams);
  return model;
}

// --- CGAN ---

TrainedModel train_cgan(const TrainInputs& inputs, const ModelConfig& cfg) {
  TrainedModel model = init_model(inputs, cfg);
  const OneHotLayout& layout = model.layout;
  const int d = layout.total;
  const int dz = cfg.latent_dim;

  TrainStreams streams(cfg.seed);
  model.specs.push_back(tower_spec(dz + d, cfg.hidden, d));  // G(z | o)
  model.params.push_back(init_params(model.specs[0], streams.init));
  OptState gen_opt = make_opt(model.specs[0], cfg, cfg.learning_rate);

  NetSpec dspec = tower_spec(2 * d, {cfg.disc_hidden}, 1);  // D(x | o)
  Params dparams = init_params(dspec, streams.aux_init);
  OptState dopt = make_opt(dspec, cfg, disc_lr(cfg));

  EarlyStopper stopper(inputs, cfg);
  BatchStream stream(*inputs.data, cfg.batch_size, streams.shuffle);
  const int batches = stream.batches_per_pass();

  auto concat_cols = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows(), a.cols() + b.cols());
    out << a, b;
    return out;
  };

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_disc = 0.0;
    double epoch_gen = 0.0;
    for (int t = 0; t < batches; ++t) {
      const EncodedBatch b = encode_batch(*inputs.data, layout, inputs.policy,
                                          stream.next(), streams.mask);
      const int n = static_cast<int>(b.x.rows());

      // discriminator step
      {
        const Eigen::MatrixXd z = gaussian_matrix(n, dz, streams.noise);
        const Eigen::MatrixXd fake = forward(
            model.specs[0], model.params[0], concat_cols(z, b.o));
        Grads dgrads = zero_grads(dspec);
        epoch_disc += gan_disc_loss(dspec, dparams, concat_cols(b.x, b.o),
                                    concat_cols(fake, b.o), &dgrads);
        step(dopt, dparams, dgrads);
      }

      // generator step, fresh noise on the same conditioning batch
      {
        const Eigen::MatrixXd z = gaussian_matrix(n, dz, streams.noise);
        ForwardCache cache;
        const Eigen::MatrixXd fake = forward(
            model.specs[0], model.params[0], concat_cols(z, b.o), &cache);
        Eigen::MatrixXd d_fake_in;
        const double term = gan_gen_term(dspec, dparams,
                                         concat_cols(fake, b.o), &d_fake_in,
                                         nullptr);
        if (!std::isfinite(term)) {
          throw DivergenceError("cgan training diverged");
        }
        const Eigen::MatrixXd d_fake = d_fake_in.leftCols(d);
        Grads grads = backward(model.specs[0], model.params[0], cache, d_fake);
        step(gen_opt, model.params[0], grads);
        epoch_gen += term;
      }
    }

    TrainingLogEntry entry;
    entry.epoch = epoch;
    entry.loss = epoch_gen / batches;
    entry.aux["disc_loss"] = epoch_disc / batches;
    const bool stop = stopper.observe(model, epoch, entry, streams.val_base);
    model.log.push_back(entry);
    if (stop) break;
  }
  stopper.restore(model);
  model.specs.push_back(dspec);
  model.params.push_back(dparams);
  return model;
}

// --- VAE / CVAE ---

TrainedModel train_vae_family(const TrainInputs& inputs,
                              const ModelConfig& cfg) {
  TrainedModel model = init_model(inputs, cfg);
  const OneHotLayout& layout = model.layout;
  const int d = layout.total;
  const int dz = cfg.latent_dim;
  const bool conditional = cfg.kind == ModelKind::Cvae;

  TrainStreams streams(cfg.seed);
  const int enc_in_width = conditional ? 2 * d : d;
  const int dec_in_width = conditional ? dz + d : dz;
  model.specs.push_back(tower_spec(enc_in_width, {cfg.disc_hidden}, 2 * dz));
  model.params.push_back(init_params(model.specs[0], streams.init));
  model.specs.push_back(tower_spec(dec_in_width, {cfg.disc_hidden}, d));
  model.params.push_back(init_params(model.specs[1], streams.aux_init));
  OptState enc_opt = make_opt(model.specs[0], cfg, cfg.learning_rate);
  OptState dec_opt = make_opt(model.specs[1], cfg, cfg.learning_rate);

  EarlyStopper stopper(inputs, cfg);
  BatchStream stream(*inputs.data, cfg.batch_size, streams.shuffle);
  const int batches = stream.batches_per_pass();

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_loss = 0.0;
    for (int t = 0; t < batches; ++t) {
      const EncodedBatch b = encode_batch(*inputs.data, layout, inputs.policy,
                                          stream.next(), streams.mask);
      const int n = static_cast<int>(b.x.rows());
      Eigen::MatrixXd enc_in;
      if (conditional) {
        enc_in.resize(n, 2 * d);
        enc_in << b.x, b.o;
      } else {
        enc_in = b.o;
      }
      const Eigen::MatrixXd noise = gaussian_matrix(n, dz, streams.noise);
      Grads enc_grads = zero_grads(model.specs[0]);
      Grads dec_grads = zero_grads(model.specs[1]);
      const double loss = vae_loss(
          model.specs[0], model.params[0], model.specs[1], model.params[1],
          enc_in, b.x, noise, dz, conditional ? &b.o : nullptr, &enc_grads,
          &dec_grads);
      if (!std::isfinite(loss)) {
        throw DivergenceError("vae training diverged");
      }
      step(enc_opt, model.params[0], enc_grads);
      step(dec_opt, model.params[1], dec_grads);
      epoch_loss += loss;
    }

    TrainingLogEntry entry;
    entry.epoch = epoch;
    entry.loss = epoch_loss / batches;
    const bool stop = stopper.observe(model, epoch, entry, streams.val_base);
    model.log.push_back(entry);
    if (stop) break;
  }
  stopper.restore(model);
  return model;
}

// --- RBM ---

Eigen::MatrixXd rbm_sigmoid(const Eigen::MatrixXd& m) {
  return (1.0 / (1.0 + (-m.array()).exp())).matrix();
}

TrainedModel train_rbm(const TrainInputs& inputs, const ModelConfig& cfg) {
  TrainedModel model = init_model(inputs, cfg);
  const OneHotLayout& layout = model.layout;
  const int d = layout.total;
  const int h = cfg.rbm_hidden;

  TrainStreams streams(cfg.seed);
  model.rbm.w = 0.01 * gaussian_matrix(d, h, streams.init);
  model.rbm.a = Eigen::VectorXd::Zero(d);
  model.rbm.b = Eigen::VectorXd::Zero(h);

  EarlyStopper stopper(inputs, cfg);
  BatchStream stream(*inputs.data, cfg.batch_size, streams.shuffle);
  const int batches = stream.batches_per_pass();

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_recon = 0.0;
    for (int t = 0; t < batches; ++t) {
      const EncodedBatch batch = encode_batch(*inputs.data, layout,
                                              inputs.policy, stream.next(),
                                              streams.mask);
      rbm_cd_update(model.rbm, batch.x, batch.o, cfg.cd_k, cfg.learning_rate,
                    streams.noise);
      if (!model.rbm.w.allFinite()) {
        throw DivergenceError("rbm training diverged");
      }
      const Eigen::MatrixXd recon = rbm_sigmoid(
          (rbm_sigmoid((batch.o * model.rbm.w).rowwise() +
                       model.rbm.b.transpose()) *
           model.rbm.w.transpose())
              .rowwise() +
          model.rbm.a.transpose());
      epoch_recon += (recon - batch.x).array().square().mean();
    }

    TrainingLogEntry entry;
    entry.epoch = epoch;
    entry.loss = epoch_recon / batches;
    const bool stop = stopper.observe(model, epoch, entry, streams.val_base);
    model.log.push_back(entry);
    if (stop) break;
  }
  stopper.restore(model);
  return model;
}

}  // namespace

void rbm_cd_update(RbmParams& params, const Eigen::MatrixXd& X,
                   const Eigen::MatrixXd& O, int k, double eps, Rng& rng) {
  const double n = static_cast<double>(X.rows());

  // positive phase: pair the full sample with h ~ P(h | o)
  const Eigen::MatrixXd h_data_probs =
      rbm_sigmoid((O * params.w).rowwise() + params.b.transpose());
  const Eigen::MatrixXd h_data = bernoulli_matrix(h_data_probs, rng);

  // negative phase: k Gibbs steps from the observation vector,
  // probabilities on the final hidden update
  Eigen::MatrixXd h_state = h_data;
  Eigen::MatrixXd v_state;
  Eigen::MatrixXd h_probs;
  for (int t = 0; t < k; ++t) {
    const Eigen::MatrixXd v_probs = rbm_sigmoid(
        (h_state * params.w.transpose()).rowwise() + params.a.transpose());
    v_state = bernoulli_matrix(v_probs, rng);
    h_probs =
        rbm_sigmoid((v_state * params.w).rowwise() + params.b.transpose());
    if (t + 1 < k) h_state = bernoulli_matrix(h_probs, rng);
  }

  params.w +=
      eps * (X.transpose() * h_data - v_state.transpose() * h_probs) / n;
  params.a +=
      eps * (X.colwise().sum() - v_state.colwise().sum()).transpose() / n;
  params.b +=
      eps * (h_data.colwise().sum() - h_probs.colwise().sum()).transpose() / n;
}

TrainedModel train_model(const TrainInputs& inputs, const ModelConfig& cfg) {
  switch (cfg.kind) {
    case ModelKind::Ear:
    case ModelKind::Nc:
    case ModelKind::Eara:
      return train_ear_family(inputs, cfg);
    case ModelKind::Wgan:
      return train_wgan(inputs, cfg);
    case ModelKind::Cgan:
      return train_cgan(inputs, cfg);
    case ModelKind::Vae:
    case ModelKind::Cvae:
      return train_vae_family(inputs, cfg);
    case ModelKind::Rbm:
      return train_rbm(inputs, cfg);
  }
  throw std::logic_error("unreachable model kind");
}

}  // namespace hetinf
