#include "hetinf/encoding.hpp"

#include <algorithm>

namespace hetinf {

OneHotLayout build_layout(const BayesianNetwork& net, bool extra_state) {
  OneHotLayout layout;
  layout.extra_state = extra_state;
  int at = 0;
  for (int j = 0; j < net.var_count(); ++j) {
    const int k = net.card(j);
    layout.offset.push_back(at);
    layout.data_width.push_back(k);
    layout.width.push_back(extra_state ? k + 1 : k);
    at += layout.width.back();
  }
  layout.total = at;
  return layout;
}

Eigen::VectorXd encode_assignment(const OneHotLayout& layout,
                                  const Assignment& assignment) {
  if (static_cast<int>(assignment.size()) != layout.var_count()) {
    throw ShapeError("assignment length does not match layout");
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(layout.total);
  for (int j = 0; j < layout.var_count(); ++j) {
    const int s = assignment[static_cast<std::size_t>(j)];
    if (s < 0 || s >= layout.data_width[static_cast<std::size_t>(j)]) {
      throw ShapeError("assignment state out of range");
    }
    x[layout.offset[static_cast<std::size_t>(j)] + s] = 1.0;
  }
  return x;
}

ObservationPair encode_observation(const OneHotLayout& layout,
                                   const Evidence& evidence) {
  ObservationPair pair;
  pair.o = Eigen::VectorXd::Zero(layout.total);
  pair.mask = Eigen::VectorXd::Zero(layout.total);
  for (int j = 0; j < layout.var_count(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const int off = layout.offset[uj];
    const auto it = evidence.find(j);
    if (it != evidence.end()) {
      if (it->second < 0 || it->second >= layout.data_width[uj]) {
        throw ShapeError("evidence state out of range");
      }
      pair.o[off + it->second] = 1.0;
    } else {
      for (int k = 0; k < layout.width[uj]; ++k) pair.mask[off + k] = 1.0;
      if (layout.extra_state) {
        pair.o[off + layout.data_width[uj]] = 1.0;
      }
    }
  }
  return pair;
}

std::vector<std::vector<double>> decode_distribution(
    const OneHotLayout& layout, const Eigen::VectorXd& y) {
  if (static_cast<int>(y.size()) != layout.total) {
    throw ShapeError("vector length does not match layout");
  }
  std::vector<std::vector<double>> blocks;
  blocks.reserve(static_cast<std::size_t>(layout.var_count()));
  for (int j = 0; j < layout.var_count(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    std::vector<double> block(
        static_cast<std::size_t>(layout.data_width[uj]));
    for (int k = 0; k < layout.data_width[uj]; ++k) {
      block[static_cast<std::size_t>(k)] = y[layout.offset[uj] + k];
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

std::vector<std::vector<double>> decode_distribution_normalized(
    const OneHotLayout& layout, const Eigen::VectorXd& y) {
  auto blocks = decode_distribution(layout, y);
  for (auto& block : blocks) {
    double sum = 0.0;
    for (double& v : block) {
      v = std::min(1.0, std::max(0.0, v));
      sum += v;
    }
    if (sum > 0.0) {
      for (double& v : block) v /= sum;
    } else {
      const double u = 1.0 / static_cast<double>(block.size());
      for (double& v : block) v = u;
    }
  }
  return blocks;
}

}  // namespace hetinf
