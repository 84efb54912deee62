#pragma once

#include <Eigen/Core>
#include <vector>

#include "hetinf/bn.hpp"

namespace hetinf {

/// Fixed-width block layout: one contiguous block per variable, network
/// order. In the default mode each block has K_j slots; with
/// extra_state enabled every block carries one additional slot that is set
/// when the variable is unobserved (ablation encoding).
struct OneHotLayout {
  std::vector<int> offset;
  std::vector<int> width;       // block width (K_j, or K_j + 1)
  std::vector<int> data_width;  // K_j, the slots carrying state mass
  int total = 0;
  bool extra_state = false;

  int var_count() const { return static_cast<int>(offset.size()); }
};

OneHotLayout build_layout(const BayesianNetwork& net,
                          bool extra_state = false);

struct ObservationPair {
  Eigen::VectorXd o;
  Eigen::VectorXd mask;  // 1 on latent (unobserved) blocks, 0 on observed
};

Eigen::VectorXd encode_assignment(const OneHotLayout& layout,
                                  const Assignment& assignment);

ObservationPair encode_observation(const OneHotLayout& layout,
                                   const Evidence& evidence);

/// Raw per-variable slices of a length-D vector (first K_j entries of each
/// block). No clamping; metrics apply their own.
std::vector<std::vector<double>> decode_distribution(
    const OneHotLayout& layout, const Eigen::VectorXd& y);

/// Clamped-to-[0,1], renormalized view; a block with zero mass falls back
/// to uniform.
std::vector<std::vector<double>> decode_distribution_normalized(
    const OneHotLayout& layout, const Eigen::VectorXd& y);

}  // namespace hetinf
