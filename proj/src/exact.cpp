#include "hetinf/exact.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace hetinf {
namespace {

// Strides of each scope variable in the factor's linear layout
// (last variable fastest).
std::vector<std::size_t> strides(const Factor& f) {
  std::vector<std::size_t> s(f.scope.size(), 1);
  for (int i = static_cast<int>(f.scope.size()) - 2; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] =
        s[static_cast<std::size_t>(i + 1)] *
        static_cast<std::size_t>(f.cards[static_cast<std::size_t>(i + 1)]);
  }
  return s;
}

int scope_position(const Factor& f, int variable) {
  for (std::size_t i = 0; i < f.scope.size(); ++i) {
    if (f.scope[i] == variable) return static_cast<int>(i);
  }
  return -1;
}

/// Remove observed variables from a factor's scope by selecting their rows.
Factor condition(const Factor& f, const Evidence& evidence) {
  bool any = false;
  for (int v : f.scope) {
    if (evidence.count(v)) {
      any = true;
      break;
    }
  }
  if (!any) return f;

  Factor out;
  std::vector<int> fixed_state(f.scope.size(), -1);
  for (std::size_t i = 0; i < f.scope.size(); ++i) {
    auto it = evidence.find(f.scope[i]);
    if (it != evidence.end()) {
      fixed_state[i] = it->second;
    } else {
      out.scope.push_back(f.scope[i]);
      out.cards.push_back(f.cards[i]);
    }
  }
  std::size_t n = 1;
  for (int c : out.cards) n *= static_cast<std::size_t>(c);
  out.values.assign(n, 0.0);

  const auto in_strides = strides(f);
  std::vector<int> state(out.scope.size(), 0);
  for (std::size_t lin = 0; lin < n; ++lin) {
    std::size_t src = 0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < f.scope.size(); ++i) {
      const int st = fixed_state[i] >= 0 ? fixed_state[i] : state[k++];
      src += in_strides[i] * static_cast<std::size_t>(st);
    }
    out.values[lin] = f.values[src];
    for (int i = static_cast<int>(state.size()) - 1; i >= 0; --i) {
      if (++state[static_cast<std::size_t>(i)] <
          out.cards[static_cast<std::size_t>(i)]) {
        break;
      }
      state[static_cast<std::size_t>(i)] = 0;
    }
  }
  return out;
}

}  // namespace

Factor factor_product(const Factor& a, const Factor& b, std::size_t size_cap) {
  Factor out;
  out.scope = a.scope;
  out.cards = a.cards;
  for (std::size_t i = 0; i < b.scope.size(); ++i) {
    if (scope_position(out, b.scope[i]) < 0) {
      out.scope.push_back(b.scope[i]);
      out.cards.push_back(b.cards[i]);
    }
  }
  std::size_t n = 1;
  for (int c : out.cards) {
    n *= static_cast<std::size_t>(c);
    if (size_cap && n > size_cap) {
      throw StateSpaceTooLarge("factor product exceeds size cap");
    }
  }
  out.values.assign(n, 0.0);

  // Per-output-variable strides into a and b.
  std::vector<std::size_t> sa(out.scope.size(), 0), sb(out.scope.size(), 0);
  const auto a_str = strides(a);
  const auto b_str = strides(b);
  for (std::size_t i = 0; i < out.scope.size(); ++i) {
    const int pa = scope_position(a, out.scope[i]);
    if (pa >= 0) sa[i] = a_str[static_cast<std::size_t>(pa)];
    const int pb = scope_position(b, out.scope[i]);
    if (pb >= 0) sb[i] = b_str[static_cast<std::size_t>(pb)];
  }

  std::vector<int> state(out.scope.size(), 0);
  std::size_t ia = 0, ib = 0;
  for (std::size_t lin = 0; lin < n; ++lin) {
    out.values[lin] = a.values[ia] * b.values[ib];
    for (int i = static_cast<int>(state.size()) - 1; i >= 0; --i) {
      const auto ui = static_cast<std::size_t>(i);
      ++state[ui];
      ia += sa[ui];
      ib += sb[ui];
      if (state[ui] < out.cards[ui]) break;
      ia -= sa[ui] * static_cast<std::size_t>(out.cards[ui]);
      ib -= sb[ui] * static_cast<std::size_t>(out.cards[ui]);
      state[ui] = 0;
    }
  }
  return out;
}

Factor factor_marginalize(const Factor& f, int variable) {
  const int pos = scope_position(f, variable);
  if (pos < 0) return f;
  Factor out;
  for (std::size_t i = 0; i < f.scope.size(); ++i) {
    if (static_cast<int>(i) == pos) continue;
    out.scope.push_back(f.scope[i]);
    out.cards.push_back(f.cards[i]);
  }
  std::size_t n = 1;
  for (int c : out.cards) n *= static_cast<std::size_t>(c);
  out.values.assign(n, 0.0);

  const auto in_strides = strides(f);
  const std::size_t var_stride = in_strides[static_cast<std::size_t>(pos)];
  const int var_card = f.cards[static_cast<std::size_t>(pos)];

  std::vector<int> state(out.scope.size(), 0);
  for (std::size_t lin = 0; lin < n; ++lin) {
    std::size_t base = 0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < f.scope.size(); ++i) {
      if (static_cast<int>(i) == pos) continue;
      base += in_strides[i] * static_cast<std::size_t>(state[k++]);
    }
    double sum = 0.0;
    for (int v = 0; v < var_card; ++v) {
      sum += f.values[base + var_stride * static_cast<std::size_t>(v)];
    }
    out.values[lin] = sum;
    for (int i = static_cast<int>(state.size()) - 1; i >= 0; --i) {
      if (++state[static_cast<std::size_t>(i)] <
          out.cards[static_cast<std::size_t>(i)]) {
        break;
      }
      state[static_cast<std::size_t>(i)] = 0;
    }
  }
  return out;
}

Factor cpt_factor(const BayesianNetwork& net, int child,
                  const Evidence& evidence) {
  const Cpt& c = net.cpts[static_cast<std::size_t>(child)];
  Factor f;
  f.scope = c.parents;
  f.scope.push_back(child);
  for (int p : c.parents) f.cards.push_back(net.card(p));
  f.cards.push_back(c.card);
  f.values = c.table;  // layout matches: parents slow, child fastest
  return condition(f, evidence);
}

std::vector<int> elimination_order_minfill(const BayesianNetwork& net,
                                           const Evidence& evidence) {
  const int m = net.var_count();
  std::vector<std::set<int>> adj(static_cast<std::size_t>(m));
  auto connect = [&](int a, int b) {
    if (a == b) return;
    adj[static_cast<std::size_t>(a)].insert(b);
    adj[static_cast<std::size_t>(b)].insert(a);
  };
  // Moralize: child-parent edges plus co-parent marriages.
  for (const auto& c : net.cpts) {
    for (std::size_t i = 0; i < c.parents.size(); ++i) {
      connect(c.child, c.parents[i]);
      for (std::size_t j = i + 1; j < c.parents.size(); ++j) {
        connect(c.parents[i], c.parents[j]);
      }
    }
  }
  std::vector<bool> removed(static_cast<std::size_t>(m), false);
  for (const auto& [v, s] : evidence) {
    (void)s;
    removed[static_cast<std::size_t>(v)] = true;
    for (int nb : adj[static_cast<std::size_t>(v)]) {
      adj[static_cast<std::size_t>(nb)].erase(v);
    }
    adj[static_cast<std::size_t>(v)].clear();
  }

  auto fill_count = [&](int v) {
    const auto& nbs = adj[static_cast<std::size_t>(v)];
    int fill = 0;
    for (auto it = nbs.begin(); it != nbs.end(); ++it) {
      auto jt = it;
      for (++jt; jt != nbs.end(); ++jt) {
        if (!adj[static_cast<std::size_t>(*it)].count(*jt)) ++fill;
      }
    }
    return fill;
  };

  std::vector<int> order;
  for (;;) {
    int best = -1;
    int best_fill = 0;
    for (int v = 0; v < m; ++v) {
      if (removed[static_cast<std::size_t>(v)]) continue;
      const int fill = fill_count(v);
      if (best < 0 || fill < best_fill) {
        best = v;
        best_fill = fill;
      }
    }
    if (best < 0) break;
    order.push_back(best);
    const auto nbs = adj[static_cast<std::size_t>(best)];
    for (auto it = nbs.begin(); it != nbs.end(); ++it) {
      auto jt = it;
      for (++jt; jt != nbs.end(); ++jt) connect(*it, *jt);
    }
    removed[static_cast<std::size_t>(best)] = true;
    for (int nb : nbs) adj[static_cast<std::size_t>(nb)].erase(best);
    adj[static_cast<std::size_t>(best)].clear();
  }
  return order;
}

namespace {

/// Eliminate `order` from the sliced CPT factors; returns what remains.
std::vector<Factor> run_elimination(std::vector<Factor> factors,
                                    const std::vector<int>& order,
                                    std::size_t size_cap) {
  for (int v : order) {
    std::vector<Factor> touching;
    std::vector<Factor> rest;
    for (auto& f : factors) {
      if (scope_position(f, v) >= 0) {
        touching.push_back(std::move(f));
      } else {
        rest.push_back(std::move(f));
      }
    }
    if (touching.empty()) {
      factors = std::move(rest);
      continue;
    }
    Factor prod = std::move(touching.front());
    for (std::size_t i = 1; i < touching.size(); ++i) {
      prod = factor_product(prod, touching[i], size_cap);
    }
    rest.push_back(factor_marginalize(prod, v));
    factors = std::move(rest);
  }
  return factors;
}

std::vector<double> query_single_ve(const std::vector<Factor>& base,
                                    const std::vector<int>& order, int query,
                                    int query_card, std::size_t size_cap) {
  std::vector<int> elim;
  elim.reserve(order.size());
  for (int v : order) {
    if (v != query) elim.push_back(v);
  }
  auto remaining = run_elimination(base, elim, size_cap);

  Factor result;
  result.scope = {query};
  result.cards = {query_card};
  result.values.assign(static_cast<std::size_t>(query_card), 1.0);
  for (const auto& f : remaining) {
    result = factor_product(result, f, size_cap);
  }
  if (result.scope.size() != 1) {
    throw ShapeError("elimination left a factor over more than the query");
  }
  double norm = 0.0;
  for (double v : result.values) norm += v;
  if (!(norm > 0.0)) {
    throw ZeroProbabilityEvidence("evidence has probability zero");
  }
  for (double& v : result.values) v /= norm;
  return result.values;
}

}  // namespace

PosteriorMarginals posterior_marginals_ve(const BayesianNetwork& net,
                                          const Evidence& evidence,
                                          const ExactOptions& opts) {
  for (const auto& [v, s] : evidence) {
    if (v < 0 || v >= net.var_count() || s < 0 || s >= net.card(v)) {
      throw std::out_of_range("evidence out of range");
    }
  }
  std::vector<Factor> base;
  base.reserve(net.cpts.size());
  for (int j = 0; j < net.var_count(); ++j) {
    base.push_back(cpt_factor(net, j, evidence));
  }
  std::vector<int> order;
  if (opts.reverse_topological_order) {
    const auto topo = topological_order(net);
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
      if (!evidence.count(*it)) order.push_back(*it);
    }
  } else {
    order = elimination_order_minfill(net, evidence);
  }

  PosteriorMarginals out;
  out.evidence = evidence;
  for (int j = 0; j < net.var_count(); ++j) {
    if (evidence.count(j)) continue;
    out.marginals[j] =
        query_single_ve(base, order, j, net.card(j), opts.factor_size_cap);
  }
  if (out.marginals.empty() &&
      !(evidence_probability_ve(net, evidence, opts) > 0.0)) {
    throw ZeroProbabilityEvidence("evidence has probability zero");
  }
  return out;
}

PosteriorMarginals posterior_marginals_enum(const BayesianNetwork& net,
                                            const Evidence& evidence,
                                            const ExactOptions& opts) {
  const int m = net.var_count();
  std::size_t joint = 1;
  for (int j = 0; j < m; ++j) {
    joint *= static_cast<std::size_t>(net.card(j));
    if (joint > opts.enum_state_cap) {
      throw StateSpaceTooLarge("joint state space exceeds enumeration cap");
    }
  }

  std::vector<int> free_vars;
  Assignment assignment(static_cast<std::size_t>(m), 0);
  for (int j = 0; j < m; ++j) {
    auto it = evidence.find(j);
    if (it != evidence.end()) {
      assignment[static_cast<std::size_t>(j)] = it->second;
    } else {
      free_vars.push_back(j);
    }
  }

  PosteriorMarginals out;
  out.evidence = evidence;
  std::map<int, std::vector<double>> sums;
  for (int j : free_vars) {
    sums[j].assign(static_cast<std::size_t>(net.card(j)), 0.0);
  }

  double total = 0.0;
  for (;;) {
    double p = 1.0;
    for (int j = 0; j < m; ++j) {
      const Cpt& c = net.cpts[static_cast<std::size_t>(j)];
      p *= c.prob(c.row_index_for(assignment),
                  assignment[static_cast<std::size_t>(j)]);
    }
    total += p;
    for (int j : free_vars) {
      sums[j][static_cast<std::size_t>(
          assignment[static_cast<std::size_t>(j)])] += p;
    }
    int i = static_cast<int>(free_vars.size()) - 1;
    for (; i >= 0; --i) {
      const int v = free_vars[static_cast<std::size_t>(i)];
      if (++assignment[static_cast<std::size_t>(v)] < net.card(v)) break;
      assignment[static_cast<std::size_t>(v)] = 0;
    }
    if (i < 0) break;
  }

  if (!(total > 0.0)) {
    throw ZeroProbabilityEvidence("evidence has probability zero");
  }
  for (auto& [j, vec] : sums) {
    for (double& v : vec) v /= total;
    out.marginals[j] = vec;
  }
  return out;
}

double evidence_probability_ve(const BayesianNetwork& net,
                               const Evidence& evidence,
                               const ExactOptions& opts) {
  std::vector<Factor> base;
  for (int j = 0; j < net.var_count(); ++j) {
    base.push_back(cpt_factor(net, j, evidence));
  }
  const auto order = elimination_order_minfill(net, evidence);
  auto remaining = run_elimination(std::move(base), order,
                                   opts.factor_size_cap);
  double p = 1.0;
  for (const auto& f : remaining) {
    if (!f.scope.empty()) {
      throw ShapeError("unexpected non-scalar factor after elimination");
    }
    p *= f.values.empty() ? 0.0 : f.values.front();
  }
  return p;
}

}  // namespace hetinf
