#include "hetinf/bn.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"

namespace hetinf {

int BayesianNetwork::index_of(const std::string& var_name) const {
  for (const auto& v : variables) {
    if (v.name == var_name) return v.index;
  }
  throw std::out_of_range("no such variable: " + var_name);
}

int BayesianNetwork::edge_count() const {
  int n = 0;
  for (const auto& c : cpts) n += static_cast<int>(c.parents.size());
  return n;
}

std::vector<std::vector<int>> BayesianNetwork::children() const {
  std::vector<std::vector<int>> ch(variables.size());
  for (const auto& c : cpts) {
    for (int p : c.parents) ch[static_cast<std::size_t>(p)].push_back(c.child);
  }
  return ch;
}

ValidationReport validate(const BayesianNetwork& net) {
  ValidationReport rep;
  const int m = net.var_count();

  std::set<std::string> names;
  for (const auto& v : net.variables) {
    if (!names.insert(v.name).second) {
      rep.failures.push_back("duplicate variable name: " + v.name);
    }
    if (v.card() < 2) {
      rep.failures.push_back("variable " + v.name + " has fewer than 2 states");
    }
    std::set<std::string> st(v.states.begin(), v.states.end());
    if (static_cast<int>(st.size()) != v.card()) {
      rep.failures.push_back("variable " + v.name + " has duplicate states");
    }
  }

  if (static_cast<int>(net.cpts.size()) != m) {
    rep.indices_ok = false;
    rep.failures.push_back("expected one CPT per variable");
    return rep;
  }

  for (int j = 0; j < m; ++j) {
    const Cpt& c = net.cpts[static_cast<std::size_t>(j)];
    if (c.child != j) {
      rep.indices_ok = false;
      rep.failures.push_back("CPT order does not match variable order");
      continue;
    }
    for (int p : c.parents) {
      if (p < 0 || p >= m || p == j) {
        rep.indices_ok = false;
        rep.failures.push_back("invalid parent index in CPT of " +
                               net.variables[static_cast<std::size_t>(j)].name);
      }
    }
    if (!rep.indices_ok) continue;
    if (c.card != net.card(j) ||
        static_cast<int>(c.table.size()) != c.row_count() * c.card) {
      rep.indices_ok = false;
      rep.failures.push_back("CPT shape mismatch for " +
                             net.variables[static_cast<std::size_t>(j)].name);
      continue;
    }
    for (int r = 0; r < c.row_count(); ++r) {
      double sum = 0.0;
      for (int k = 0; k < c.card; ++k) {
        const double p = c.prob(r, k);
        if (p < 0.0 || p > 1.0) {
          rep.failures.push_back(
              "CPT entry out of [0,1] for " +
              net.variables[static_cast<std::size_t>(j)].name);
        }
        sum += p;
      }
      const double residual = std::abs(sum - 1.0);
      rep.max_row_residual = std::max(rep.max_row_residual, residual);
      if (residual > 1e-9) {
        rep.failures.push_back(
            "CPT row " + std::to_string(r) + " of " +
            net.variables[static_cast<std::size_t>(j)].name +
            " sums to " + format_double(sum));
      }
    }
  }

  try {
    topological_order(net);
  } catch (const CycleError&) {
    rep.acyclic = false;
    rep.failures.push_back("network contains a directed cycle");
  }
  return rep;
}

std::vector<int> topological_order(const BayesianNetwork& net) {
  const int m = net.var_count();
  std::vector<int> indeg(static_cast<std::size_t>(m), 0);
  auto ch = net.children();
  for (const auto& c : net.cpts) {
    indeg[static_cast<std::size_t>(c.child)] =
        static_cast<int>(c.parents.size());
  }

  // Kahn with an ordered ready set: smallest declaration index first.
  std::set<int> ready;
  for (int j = 0; j < m; ++j) {
    if (indeg[static_cast<std::size_t>(j)] == 0) ready.insert(j);
  }
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(m));
  while (!ready.empty()) {
    const int j = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(j);
    for (int c : ch[static_cast<std::size_t>(j)]) {
      if (--indeg[static_cast<std::size_t>(c)] == 0) ready.insert(c);
    }
  }
  if (static_cast<int>(order.size()) != m) {
    throw CycleError("network contains a directed cycle");
  }
  return order;
}

std::vector<int> markov_blanket(const BayesianNetwork& net, int variable) {
  std::set<int> blanket;
  const Cpt& own = net.cpts[static_cast<std::size_t>(variable)];
  blanket.insert(own.parents.begin(), own.parents.end());
  for (const auto& c : net.cpts) {
    const bool is_child =
        std::find(c.parents.begin(), c.parents.end(), variable) !=
        c.parents.end();
    if (!is_child) continue;
    blanket.insert(c.child);
    blanket.insert(c.parents.begin(), c.parents.end());
  }
  blanket.erase(variable);
  return std::vector<int>(blanket.begin(), blanket.end());
}

NetworkStats network_stats(const BayesianNetwork& net) {
  NetworkStats s;
  s.node_count = net.var_count();
  s.edge_count = net.edge_count();
  for (const auto& c : net.cpts) {
    long long combos = 1;
    for (int pc : c.parent_cards) combos *= pc;
    s.parameter_count += combos * (c.card - 1);
    s.parameter_count_full += combos * c.card;
    s.max_in_degree =
        std::max(s.max_in_degree, static_cast<int>(c.parents.size()));
  }
  double blanket_total = 0.0;
  for (int j = 0; j < s.node_count; ++j) {
    blanket_total += static_cast<double>(markov_blanket(net, j).size());
  }
  s.avg_markov_blanket = s.node_count ? blanket_total / s.node_count : 0.0;
  s.avg_degree =
      s.node_count ? 2.0 * s.edge_count / static_cast<double>(s.node_count)
                   : 0.0;
  return s;
}

std::string network_to_json(const BayesianNetwork& net) {
  nlohmann::ordered_json j;
  j["name"] = net.name;
  j["variables"] = nlohmann::ordered_json::array();
  for (const auto& v : net.variables) {
    nlohmann::ordered_json jv;
    jv["name"] = v.name;
    jv["states"] = v.states;
    j["variables"].push_back(jv);
  }
  j["cpts"] = nlohmann::ordered_json::array();
  for (const auto& c : net.cpts) {
    nlohmann::ordered_json jc;
    jc["child"] = c.child;
    jc["parents"] = c.parents;
    jc["table"] = c.table;
    j["cpts"].push_back(jc);
  }
  return j.dump(2) + "\n";
}

BayesianNetwork network_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  BayesianNetwork net;
  net.name = j.at("name").get<std::string>();
  int idx = 0;
  for (const auto& jv : j.at("variables")) {
    VariableSpec v;
    v.name = jv.at("name").get<std::string>();
    v.states = jv.at("states").get<std::vector<std::string>>();
    v.index = idx++;
    net.variables.push_back(std::move(v));
  }
  for (const auto& jc : j.at("cpts")) {
    Cpt c;
    c.child = jc.at("child").get<int>();
    c.parents = jc.at("parents").get<std::vector<int>>();
    c.table = jc.at("table").get<std::vector<double>>();
    c.card = net.card(c.child);
    for (int p : c.parents) c.parent_cards.push_back(net.card(p));
    net.cpts.push_back(std::move(c));
  }
  return net;
}

std::uint64_t network_hash(const BayesianNetwork& net) {
  return fnv1a64(network_to_json(net));
}

}  // namespace hetinf
