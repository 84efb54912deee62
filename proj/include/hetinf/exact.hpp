#pragma once

#include <map>
#include <vector>

#include "hetinf/bn.hpp"

namespace hetinf {

/// Dense potential over an ordered set of variables. Values are laid out
/// row-major with the last scope variable varying fastest.
struct Factor {
  std::vector<int> scope;
  std::vector<int> cards;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

Factor factor_product(const Factor& a, const Factor& b,
                      std::size_t size_cap = 0);
Factor factor_marginalize(const Factor& f, int variable);

/// CPT as a factor with evidence variables sliced out of the scope.
Factor cpt_factor(const BayesianNetwork& net, int child,
                  const Evidence& evidence);

struct PosteriorMarginals {
  Evidence evidence;
  std::map<int, std::vector<double>> marginals;  // unobserved variables only
};

struct ExactOptions {
  std::size_t factor_size_cap = 10'000'000;  // VE intermediate factor entries
  std::size_t enum_state_cap = std::size_t{1} << 24;
  bool reverse_topological_order = false;  // instead of min-fill
};

/// Exact posterior marginals by variable elimination (min-fill order).
PosteriorMarginals posterior_marginals_ve(const BayesianNetwork& net,
                                          const Evidence& evidence,
                                          const ExactOptions& opts = {});

/// Exact posterior marginals by full joint enumeration (test oracle).
PosteriorMarginals posterior_marginals_enum(const BayesianNetwork& net,
                                            const Evidence& evidence,
                                            const ExactOptions& opts = {});

/// Greedy min-fill elimination order over the moralized graph with evidence
/// variables removed. Ties break toward the smaller variable index.
std::vector<int> elimination_order_minfill(const BayesianNetwork& net,
                                           const Evidence& evidence);

/// P(evidence) by variable elimination.
double evidence_probability_ve(const BayesianNetwork& net,
                               const Evidence& evidence,
                               const ExactOptions& opts = {});

}  // namespace hetinf
