#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "hetinf/rng.hpp"
#include "hetinf/util.hpp"

namespace hetinf {

enum class Activation { Relu, Sigmoid, Tanh, Linear };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

/// Fully connected net: input -> hidden... -> output. One activation for
/// all hidden layers, one for the output layer.
struct NetSpec {
  int input = 0;
  std::vector<int> hidden;
  int output = 0;
  Activation hidden_act = Activation::Relu;
  Activation output_act = Activation::Linear;

  int layer_count() const { return static_cast<int>(hidden.size()) + 1; }
  int layer_in(int l) const;
  int layer_out(int l) const;
  Activation layer_act(int l) const {
    return l + 1 == layer_count() ? output_act : hidden_act;
  }
};

/// Weights are (out x in), biases (out). Batches are row vectors.
struct Params {
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> b;

  std::size_t flat_size() const;
  double flat_get(std::size_t i) const;
  void flat_add(std::size_t i, double delta);
  double l1_norm() const;
  bool all_finite() const;
};

struct ForwardCache {
  Eigen::MatrixXd input;
  std::vector<Eigen::MatrixXd> pre;   // pre-activation per layer
  std::vector<Eigen::MatrixXd> post;  // post-activation per layer
};

struct Grads {
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> b;
  Eigen::MatrixXd input;  // gradient w.r.t. the batch input

  void add_scaled(const Grads& other, double scale);
  void scale(double s);
};

Grads zero_grads(const NetSpec& spec, int batch = 0);

/// Batch forward pass; rows of x are samples. The cache, when supplied,
/// holds everything backward needs.
Eigen::MatrixXd forward(const NetSpec& spec, const Params& params,
                        const Eigen::MatrixXd& x,
                        ForwardCache* cache = nullptr);

/// Exact gradients of the scalar loss whose d(loss)/d(output) is `dy`.
Grads backward(const NetSpec& spec, const Params& params,
               const ForwardCache& cache, const Eigen::MatrixXd& dy);

struct OptState {
  enum class Kind { MomentumSgd, RmsProp };
  Kind kind = Kind::MomentumSgd;
  double learning_rate = 0.01;
  double momentum = 0.9;
  double rho = 0.9;
  double epsilon = 1e-8;
  std::vector<Eigen::MatrixXd> acc_w;
  std::vector<Eigen::VectorXd> acc_b;

  static OptState momentum_sgd(const NetSpec& spec, double lr,
                               double mu = 0.9);
  static OptState rmsprop(const NetSpec& spec, double lr, double rho = 0.9,
                          double eps = 1e-8);
};

/// momentum: v <- mu v - lr g, theta <- theta + v
/// rmsprop:  s <- rho s + (1-rho) g^2, theta <- theta - lr g / sqrt(s + eps)
void step(OptState& opt, Params& params, const Grads& grads);

/// He scaling for relu layers, Xavier otherwise; zero biases.
Params init_params(const NetSpec& spec, Rng& rng);

/// Loss hook for the checker: returns the loss; fills grads when asked.
using LossFn = std::function<double(const Params&, Grads*)>;

struct GradCheckReport {
  double max_rel_error = 0.0;
  int coords_checked = 0;
  std::size_t worst_coord = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;

  bool pass(double tol) const { return max_rel_error <= tol; }
};

/// Central finite differences on a random subset of coordinates.
GradCheckReport gradient_check(const NetSpec& spec, const Params& params,
                               const LossFn& loss, Rng& rng,
                               int max_coords = 200, double step = 1e-5);

}  // namespace hetinf
