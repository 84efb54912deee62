#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hetinf/encoding.hpp"
#include "hetinf/metrics.hpp"
#include "hetinf/nn.hpp"
#include "hetinf/sampling.hpp"

namespace hetinf {

enum class ModelKind { Ear, Eara, Nc, Rbm, Wgan, Cgan, Vae, Cvae };

std::string model_kind_name(ModelKind k);
ModelKind model_kind_from_name(const std::string& name);
const std::vector<ModelKind>& all_model_kinds();

struct ModelConfig {
  ModelKind kind = ModelKind::Ear;
  std::vector<int> hidden = {64, 128, 128, 64};  // main tower
  int disc_hidden = 128;                         // adversary / critic / VAE nets
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.005;
  std::string optimizer = "momentum";  // "momentum" | "rmsprop"
  double learning_rate = 0.01;
  double momentum = 0.9;
  double rmsprop_rho = 0.9;
  double rmsprop_eps = 1e-8;
  double disc_learning_rate = 0.0;  // 0 -> same as learning_rate
  int epochs = 200;
  int batch_size = 64;
  int latent_dim = 32;      // VAE/CVAE/CGAN noise width
  int cd_k = 10;            // RBM contrastive divergence steps
  int rbm_hidden = 36;
  int predict_samples = 100;  // S for stochastic predicts
  int patience = 20;          // early stopping on validation AD
  int min_epochs = 40;        // warm-up before the patience countdown
  double adv_weight = 1.0;    // EARA adversarial term weight
  int n_critic = 5;           // WGAN critic steps per generator step
  double clip = 0.01;         // WGAN weight clipping
  std::uint64_t seed = 1;
  int nc_target = -1;  // NC: the single scored variable
  bool extra_state_encoding = false;

  std::string to_json() const;
  static ModelConfig from_json(const std::string& text);
};

/// Kind-appropriate defaults on top of the common ones (optimizer and
/// learning rate per kind).
ModelConfig default_config(ModelKind kind, std::uint64_t seed);

struct RbmParams {
  Eigen::MatrixXd w;  // visible x hidden
  Eigen::VectorXd a;  // visible bias
  Eigen::VectorXd b;  // hidden bias
};

struct TrainingLogEntry {
  int epoch = 0;
  double loss = 0.0;
  double val_ad = 0.0;
  std::map<std::string, double> aux;
};

struct TrainedModel {
  ModelKind kind = ModelKind::Ear;
  ModelConfig config;
  OneHotLayout layout;
  std::string network_name;
  std::uint64_t network_hash = 0;
  std::vector<NetSpec> specs;    // role order per kind (generator first)
  std::vector<Params> params;
  RbmParams rbm;
  std::vector<TrainingLogEntry> log;
};

struct TrainInputs {
  const Dataset* data = nullptr;
  const OneHotLayout* layout = nullptr;
  ObservationPolicy policy = ObservationPolicy::uniform_count();
  const TestSet* validation = nullptr;  // enables early stopping
  ScoringOptions val_scoring;
};

TrainedModel train_model(const TrainInputs& inputs, const ModelConfig& config);

/// Raw length-D prediction for an encoded observation. `rng` is required
/// for the sampled predictions of RBM/CGAN/CVAE and ignored otherwise.
Eigen::VectorXd predict_vector(const TrainedModel& model,
                               const Eigen::VectorXd& o, Rng* rng = nullptr);

Eigen::VectorXd predict(const TrainedModel& model, const Evidence& evidence,
                        Rng* rng = nullptr);

// --- loss evaluators (shared by trainers and gradient checks) ---

struct EarLossResult {
  double loss = 0.0;
  Eigen::MatrixXd d_xhat;  // gradient w.r.t. the prediction batch
};

/// L = alpha||mask (X - Xhat)||^2 + beta||(1-mask)(X - Xhat)||^2
///     + gamma||theta||_1, squared norms averaged over the batch.
/// `block_weight`, when non-null, multiplies both data terms elementwise
/// (the NC target restriction).
EarLossResult ear_loss(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Xhat,
                       const Eigen::MatrixXd& mask, const Params& params,
                       double alpha, double beta, double gamma,
                       const Eigen::VectorXd* block_weight = nullptr);

/// gamma * sign(theta) with sign(0) = 0, accumulated into `grads`.
void add_l1_subgradient(const Params& params, double gamma, Grads* grads);

/// -mean log s(u_real) - mean log(1 - s(u_fake)); fills parameter grads.
double gan_disc_loss(const NetSpec& spec, const Params& params,
                     const Eigen::MatrixXd& real_in,
                     const Eigen::MatrixXd& fake_in, Grads* grads);

/// mean log(1 - s(u_fake)) plus its gradient w.r.t. the fake inputs
/// (parameters of the discriminator held fixed).
double gan_gen_term(const NetSpec& spec, const Params& params,
                    const Eigen::MatrixXd& fake_in, Eigen::MatrixXd* d_fake,
                    double* mean_fake_score = nullptr);

/// Critic objective -(mean u_real - mean u_fake) for minimization.
double wgan_critic_loss(const NetSpec& spec, const Params& params,
                        const Eigen::MatrixXd& real_in,
                        const Eigen::MatrixXd& fake_in, Grads* grads);

/// -mean u_fake plus gradient w.r.t. fake inputs.
double wgan_gen_term(const NetSpec& spec, const Params& params,
                     const Eigen::MatrixXd& fake_in, Eigen::MatrixXd* d_fake);

/// Reconstruction + KL bound with pinned reparameterization noise:
/// z = mu + exp(lv/2) * eps. Loss is mean over the batch of
/// ||X - dec(z)||^2 + KL(N(mu, exp(lv)) || N(0, I)).
double vae_loss(const NetSpec& enc_spec, const Params& enc_params,
                const NetSpec& dec_spec, const Params& dec_params,
                const Eigen::MatrixXd& enc_in, const Eigen::MatrixXd& X,
                const Eigen::MatrixXd& noise, int latent_dim,
                const Eigen::MatrixXd* dec_extra_in, Grads* enc_grads,
                Grads* dec_grads);

/// sigmoid(a_i + W_i h) / sigmoid(b_j + W_j' v), elementwise.
Eigen::VectorXd rbm_visible_given_hidden(const RbmParams& p,
                                         const Eigen::VectorXd& h);
Eigen::VectorXd rbm_hidden_given_visible(const RbmParams& p,
                                         const Eigen::VectorXd& v);

/// One CD-k ascent step on a batch: positive statistics pair the full
/// samples X with h ~ P(h|o); the negative chain runs k sampled Gibbs
/// steps from o (probabilities on the final hidden update).
void rbm_cd_update(RbmParams& params, const Eigen::MatrixXd& X,
                   const Eigen::MatrixXd& O, int k, double eps, Rng& rng);

/// Theorem-2 style construction: stacks per-variable 3-layer nets
/// (shared input width) into one net whose second weight matrix is block
/// diagonal; output is the exact concatenation of member outputs.
std::pair<NetSpec, Params> compose_block_diagonal(
    const std::vector<std::pair<NetSpec, Params>>& members);

// --- checkpoints ---

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace hetinf
