#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hetinf/util.hpp"

namespace hetinf {

/// Full joint assignment: one state index per variable, network order.
using Assignment = std::vector<int>;

/// Partial assignment: variable index -> state index. May be empty.
using Evidence = std::map<int, int>;

struct VariableSpec {
  std::string name;
  std::vector<std::string> states;
  int index = 0;

  int card() const { return static_cast<int>(states.size()); }
};

/// Conditional probability table. Rows are indexed by the parent-state
/// combination with the last parent varying fastest; each row holds one
/// probability per child state.
struct Cpt {
  int child = 0;
  std::vector<int> parents;
  std::vector<double> table;  // row-major, rows * card(child)

  int card = 0;                    // child cardinality
  std::vector<int> parent_cards;   // cached at construction

  int row_count() const {
    int n = 1;
    for (int c : parent_cards) n *= c;
    return n;
  }

  /// Row index for given parent states (last parent fastest).
  int row_index(const std::vector<int>& parent_states) const {
    int row = 0;
    for (std::size_t i = 0; i < parents.size(); ++i) {
      row = row * parent_cards[i] + parent_states[i];
    }
    return row;
  }

  int row_index_for(const Assignment& full) const {
    int row = 0;
    for (std::size_t i = 0; i < parents.size(); ++i) {
      row = row * parent_cards[i] + full[static_cast<std::size_t>(parents[i])];
    }
    return row;
  }

  double prob(int row, int child_state) const {
    return table[static_cast<std::size_t>(row * card + child_state)];
  }
};

struct BayesianNetwork {
  std::string name;
  std::vector<VariableSpec> variables;
  std::vector<Cpt> cpts;  // cpts[j].child == j

  int var_count() const { return static_cast<int>(variables.size()); }
  int card(int j) const { return variables[static_cast<std::size_t>(j)].card(); }

  int index_of(const std::string& var_name) const;
  int edge_count() const;
  std::vector<std::vector<int>> children() const;
};

struct ValidationReport {
  bool acyclic = true;
  bool indices_ok = true;
  double max_row_residual = 0.0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

struct NetworkStats {
  int node_count = 0;
  int edge_count = 0;
  long long parameter_count = 0;       // sum of (K_j - 1) * parent combos
  long long parameter_count_full = 0;  // sum of all CPT entries
  double avg_markov_blanket = 0.0;
  double avg_degree = 0.0;  // 2 * edges / nodes
  int max_in_degree = 0;
};

ValidationReport validate(const BayesianNetwork& net);

/// Parents-before-children order; ties broken by declaration index.
std::vector<int> topological_order(const BayesianNetwork& net);

/// Parents, children and co-parents of children, excluding the variable.
std::vector<int> markov_blanket(const BayesianNetwork& net, int variable);

NetworkStats network_stats(const BayesianNetwork& net);

/// Canonical JSON form (stable field order); basis for network_hash.
std::string network_to_json(const BayesianNetwork& net);
BayesianNetwork network_from_json(const std::string& json_text);

std::uint64_t network_hash(const BayesianNetwork& net);

}  // namespace hetinf
