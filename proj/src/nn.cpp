#include "hetinf/nn.hpp"

#include <algorithm>
#include <cmath>

namespace hetinf {

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::Relu: return "relu";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Tanh: return "tanh";
    case Activation::Linear: return "linear";
  }
  return "linear";
}

Activation activation_from_name(const std::string& name) {
  if (name == "relu") return Activation::Relu;
  if (name == "sigmoid") return Activation::Sigmoid;
  if (name == "tanh") return Activation::Tanh;
  if (name == "linear") return Activation::Linear;
  throw std::invalid_argument("unknown activation: " + name);
}

int NetSpec::layer_in(int l) const {
  if (l == 0) return input;
  return hidden[static_cast<std::size_t>(l - 1)];
}

int NetSpec::layer_out(int l) const {
  if (l == layer_count() - 1) return output;
  return hidden[static_cast<std::size_t>(l)];
}

std::size_t Params::flat_size() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < w.size(); ++l) {
    n += static_cast<std::size_t>(w[l].size()) +
         static_cast<std::size_t>(b[l].size());
  }
  return n;
}

double Params::flat_get(std::size_t i) const {
  for (std::size_t l = 0; l < w.size(); ++l) {
    const auto wn = static_cast<std::size_t>(w[l].size());
    if (i < wn) return w[l].data()[i];
    i -= wn;
    const auto bn = static_cast<std::size_t>(b[l].size());
    if (i < bn) return b[l].data()[i];
    i -= bn;
  }
  throw std::out_of_range("flat parameter index");
}

void Params::flat_add(std::size_t i, double delta) {
  for (std::size_t l = 0; l < w.size(); ++l) {
    const auto wn = static_cast<std::size_t>(w[l].size());
    if (i < wn) {
      w[l].data()[i] += delta;
      return;
    }
    i -= wn;
    const auto bn = static_cast<std::size_t>(b[l].size());
    if (i < bn) {
      b[l].data()[i] += delta;
      return;
    }
    i -= bn;
  }
  throw std::out_of_range("flat parameter index");
}

double Params::l1_norm() const {
  double total = 0.0;
  for (std::size_t l = 0; l < w.size(); ++l) {
    total += w[l].cwiseAbs().sum() + b[l].cwiseAbs().sum();
  }
  return total;
}

bool Params::all_finite() const {
  for (std::size_t l = 0; l < w.size(); ++l) {
    if (!w[l].allFinite() || !b[l].allFinite()) return false;
  }
  return true;
}

void Grads::add_scaled(const Grads& other, double scale) {
  for (std::size_t l = 0; l < w.size(); ++l) {
    w[l] += scale * other.w[l];
    b[l] += scale * other.b[l];
  }
}

void Grads::scale(double s) {
  for (std::size_t l = 0; l < w.size(); ++l) {
    w[l] *= s;
    b[l] *= s;
  }
}

Grads zero_grads(const NetSpec& spec, int batch) {
  Grads g;
  for (int l = 0; l < spec.layer_count(); ++l) {
    g.w.emplace_back(
        Eigen::MatrixXd::Zero(spec.layer_out(l), spec.layer_in(l)));
    g.b.emplace_back(Eigen::VectorXd::Zero(spec.layer_out(l)));
  }
  g.input = Eigen::MatrixXd::Zero(batch, spec.input);
  return g;
}

namespace {

void apply_activation(Activation act, Eigen::MatrixXd& m) {
  switch (act) {
    case Activation::Relu:
      m = m.cwiseMax(0.0);
      break;
    case Activation::Sigmoid:
      m = (1.0 / (1.0 + (-m.array()).exp())).matrix();
      break;
    case Activation::Tanh:
      m = m.array().tanh().matrix();
      break;
    case Activation::Linear:
      break;
  }
}

// d(post)/d(pre) expressed from pre- and post-activation values.
Eigen::MatrixXd activation_grad(Activation act, const Eigen::MatrixXd& pre,
                                const Eigen::MatrixXd& post) {
  switch (act) {
    case Activation::Relu:
      return (pre.array() > 0.0).cast<double>().matrix();
    case Activation::Sigmoid:
      return (post.array() * (1.0 - post.array())).matrix();
    case Activation::Tanh:
      return (1.0 - post.array().square()).matrix();
    case Activation::Linear:
      return Eigen::MatrixXd::Ones(pre.rows(), pre.cols());
  }
  return Eigen::MatrixXd::Ones(pre.rows(), pre.cols());
}

}  // namespace

Eigen::MatrixXd forward(const NetSpec& spec, const Params& params,
                        const Eigen::MatrixXd& x, ForwardCache* cache) {
  if (static_cast<int>(x.cols()) != spec.input) {
    throw ShapeError("forward: input width mismatch");
  }
  if (static_cast<int>(params.w.size()) != spec.layer_count()) {
    throw ShapeError("forward: params/spec layer count mismatch");
  }
  if (cache) {
    cache->input = x;
    cache->pre.clear();
    cache->post.clear();
  }
  Eigen::MatrixXd h = x;
  for (int l = 0; l < spec.layer_count(); ++l) {
    const auto ul = static_cast<std::size_t>(l);
    Eigen::MatrixXd pre = h * params.w[ul].transpose();
    pre.rowwise() += params.b[ul].transpose();
    Eigen::MatrixXd post = pre;
    apply_activation(spec.layer_act(l), post);
    if (cache) {
      cache->pre.push_back(pre);
      cache->post.push_back(post);
    }
    h = std::move(post);
  }
  if (!h.allFinite()) {
    throw DivergenceError("forward produced non-finite output");
  }
  return h;
}

Grads backward(const NetSpec& spec, const Params& params,
               const ForwardCache& cache, const Eigen::MatrixXd& dy) {
  const int layers = spec.layer_count();
  if (static_cast<int>(cache.pre.size()) != layers) {
    throw ShapeError("backward: cache does not match spec");
  }
  if (dy.rows() != cache.input.rows() ||
      static_cast<int>(dy.cols()) != spec.output) {
    throw ShapeError("backward: output gradient shape mismatch");
  }
  Grads g = zero_grads(spec, static_cast<int>(cache.input.rows()));
  Eigen::MatrixXd delta = dy;
  for (int l = layers - 1; l >= 0; --l) {
    const auto ul = static_cast<std::size_t>(l);
    delta = delta.cwiseProduct(
        activation_grad(spec.layer_act(l), cache.pre[ul], cache.post[ul]));
    const Eigen::MatrixXd& below =
        l == 0 ? cache.input : cache.post[ul - 1];
    g.w[ul] = delta.transpose() * below;
    g.b[ul] = delta.colwise().sum().transpose();
    if (l > 0) {
      delta = delta * params.w[ul];
    } else {
      g.input = delta * params.w[0];
    }
  }
  return g;
}

OptState OptState::momentum_sgd(const NetSpec& spec, double lr, double mu) {
  OptState opt;
  opt.kind = Kind::MomentumSgd;
  opt.learning_rate = lr;
  opt.momentum = mu;
  for (int l = 0; l < spec.layer_count(); ++l) {
    opt.acc_w.emplace_back(
        Eigen::MatrixXd::Zero(spec.layer_out(l), spec.layer_in(l)));
    opt.acc_b.emplace_back(Eigen::VectorXd::Zero(spec.layer_out(l)));
  }
  return opt;
}

OptState OptState::rmsprop(const NetSpec& spec, double lr, double rho,
                           double eps) {
  OptState opt = momentum_sgd(spec, lr);
  opt.kind = Kind::RmsProp;
  opt.rho = rho;
  opt.epsilon = eps;
  return opt;
}

void step(OptState& opt, Params& params, const Grads& grads) {
  for (std::size_t l = 0; l < params.w.size(); ++l) {
    if (opt.kind == OptState::Kind::MomentumSgd) {
      opt.acc_w[l] = opt.momentum * opt.acc_w[l] -
                     opt.learning_rate * grads.w[l];
      opt.acc_b[l] = opt.momentum * opt.acc_b[l] -
                     opt.learning_rate * grads.b[l];
      params.w[l] += opt.acc_w[l];
      params.b[l] += opt.acc_b[l];
    } else {
      opt.acc_w[l] = opt.rho * opt.acc_w[l] +
                     (1.0 - opt.rho) * grads.w[l].array().square().matrix();
      opt.acc_b[l] = opt.rho * opt.acc_b[l] +
                     (1.0 - opt.rho) * grads.b[l].array().square().matrix();
      params.w[l] -= (opt.learning_rate * grads.w[l].array() /
                      (opt.acc_w[l].array() + opt.epsilon).sqrt())
                         .matrix();
      params.b[l] -= (opt.learning_rate * grads.b[l].array() /
                      (opt.acc_b[l].array() + opt.epsilon).sqrt())
                         .matrix();
    }
  }
  if (!params.all_finite()) {
    throw DivergenceError("optimizer step produced non-finite parameters");
  }
}

Params init_params(const NetSpec& spec, Rng& rng) {
  Params p;
  for (int l = 0; l < spec.layer_count(); ++l) {
    const int fan_in = spec.layer_in(l);
    const int fan_out = spec.layer_out(l);
    const bool relu = spec.layer_act(l) == Activation::Relu;
    const double stddev =
        relu ? std::sqrt(2.0 / fan_in) : std::sqrt(1.0 / fan_in);
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) {
        w(r, c) = stddev * rng.normal();
      }
    }
    p.w.push_back(std::move(w));
    p.b.emplace_back(Eigen::VectorXd::Zero(fan_out));
  }
  return p;
}

GradCheckReport gradient_check(const NetSpec& spec, const Params& params,
                               const LossFn& loss, Rng& rng, int max_coords,
                               double step) {
  Grads analytic = zero_grads(spec);
  loss(params, &analytic);

  const std::size_t n = params.flat_size();
  std::vector<std::size_t> coords;
  if (static_cast<std::size_t>(max_coords) >= n) {
    for (std::size_t i = 0; i < n; ++i) coords.push_back(i);
  } else {
    for (int i = 0; i < max_coords; ++i) {
      coords.push_back(
          static_cast<std::size_t>(rng.uniform_int(static_cast<int>(n))));
    }
  }

  auto flat_grad = [&](std::size_t i) {
    std::size_t at = i;
    for (std::size_t l = 0; l < analytic.w.size(); ++l) {
      const auto wn = static_cast<std::size_t>(analytic.w[l].size());
      if (at < wn) return analytic.w[l].data()[at];
      at -= wn;
      const auto bn = static_cast<std::size_t>(analytic.b[l].size());
      if (at < bn) return analytic.b[l].data()[at];
      at -= bn;
    }
    throw std::out_of_range("flat gradient index");
  };

  GradCheckReport rep;
  Params scratch = params;
  for (std::size_t i : coords) {
    scratch.flat_add(i, step);
    const double up = loss(scratch, nullptr);
    scratch.flat_add(i, -2.0 * step);
    const double down = loss(scratch, nullptr);
    scratch.flat_add(i, step);

    const double numeric = (up - down) / (2.0 * step);
    const double a = flat_grad(i);
    const double rel =
        std::abs(a - numeric) / std::max(1e-6, std::abs(a) + std::abs(numeric));
    if (rel > rep.max_rel_error) {
      rep.max_rel_error = rel;
      rep.worst_coord = i;
      rep.worst_analytic = a;
      rep.worst_numeric = numeric;
    }
    ++rep.coords_checked;
  }
  return rep;
}

}  // namespace hetinf
