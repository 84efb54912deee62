#include "hetinf/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hetinf {

Evidence ObservationPolicy::draw(const Assignment& sample, int var_count,
                                 Rng& rng) const {
  Evidence ev;
  if (kind == Kind::UniformCount) {
    const int m = rng.uniform_int(var_count);  // 0 .. M-1 observed
    std::vector<int> idx(static_cast<std::size_t>(var_count));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < m; ++i) {
      const int j = i + rng.uniform_int(var_count - i);
      std::swap(idx[static_cast<std::size_t>(i)],
                idx[static_cast<std::size_t>(j)]);
      const int v = idx[static_cast<std::size_t>(i)];
      ev[v] = sample[static_cast<std::size_t>(v)];
    }
  } else if (kind == Kind::IndependentHalf) {
    for (int v : observables) {
      if (rng.uniform01() < 0.5) ev[v] = sample[static_cast<std::size_t>(v)];
    }
  } else {
    for (int v = 0; v < var_count; ++v) {
      ev[v] = sample[static_cast<std::size_t>(v)];
    }
  }
  return ev;
}

namespace {

Assignment ancestral_sample_ordered(const BayesianNetwork& net,
                                    const std::vector<int>& order, Rng& rng) {
  Assignment a(static_cast<std::size_t>(net.var_count()), 0);
  for (int j : order) {
    const Cpt& c = net.cpts[static_cast<std::size_t>(j)];
    const int row = c.row_index_for(a);
    const double u = rng.uniform01();
    double cum = 0.0;
    int state = c.card - 1;
    for (int k = 0; k < c.card; ++k) {
      cum += c.prob(row, k);
      if (u < cum) {
        state = k;
        break;
      }
    }
    a[static_cast<std::size_t>(j)] = state;
  }
  return a;
}

}  // namespace

Assignment ancestral_sample(const BayesianNetwork& net, Rng& rng) {
  return ancestral_sample_ordered(net, topological_order(net), rng);
}

std::vector<Assignment> gibbs_sample(const BayesianNetwork& net, Rng& rng,
                                     int n, const GibbsOptions& opts) {
  if (!opts.allow_zero_entries) {
    for (const auto& c : net.cpts) {
      for (double p : c.table) {
        if (!(p > 0.0)) {
          throw std::invalid_argument(
              "gibbs_sample: CPT entries must be positive (pass the "
              "override to sample anyway)");
        }
      }
    }
  }
  const auto order = topological_order(net);
  const auto children = net.children();
  Assignment state = ancestral_sample_ordered(net, order, rng);

  const int m = net.var_count();
  std::vector<double> weights;
  auto scan = [&]() {
    for (int j = 0; j < m; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const Cpt& own = net.cpts[uj];
      const int cards = own.card;
      weights.assign(static_cast<std::size_t>(cards), 0.0);
      const int saved = state[uj];
      for (int k = 0; k < cards; ++k) {
        state[uj] = k;
        double w = own.prob(own.row_index_for(state), k);
        for (int child : children[uj]) {
          const Cpt& cc = net.cpts[static_cast<std::size_t>(child)];
          w *= cc.prob(cc.row_index_for(state),
                       state[static_cast<std::size_t>(child)]);
        }
        weights[static_cast<std::size_t>(k)] = w;
      }
      state[uj] = saved;
      double total = 0.0;
      for (double w : weights) total += w;
      if (!(total > 0.0)) {
        throw ZeroProbabilityEvidence(
            "gibbs_sample: zero-support full conditional");
      }
      state[uj] = rng.categorical(weights);
    }
  };

  for (int t = 0; t < opts.burn_in; ++t) scan();
  std::vector<Assignment> samples;
  samples.reserve(static_cast<std::size_t>(n));
  while (static_cast<int>(samples.size()) < n) {
    for (int t = 0; t < opts.thinning; ++t) scan();
    samples.push_back(state);
  }
  return samples;
}

Dataset build_training_set(const BayesianNetwork& net, int n,
                           SamplerKind sampler, std::uint64_t seed,
                           const GibbsOptions& gibbs_opts) {
  if (n < 1) throw std::invalid_argument("training set size must be >= 1");
  Dataset ds;
  ds.network_name = net.name;
  ds.network_hash = network_hash(net);
  ds.seed = seed;
  Rng rng(seed);
  if (sampler == SamplerKind::Ancestral) {
    ds.sampler = "ancestral";
    const auto order = topological_order(net);
    ds.samples.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      ds.samples.push_back(ancestral_sample_ordered(net, order, rng));
    }
  } else {
    ds.sampler = "gibbs";
    ds.samples = gibbs_sample(net, rng, n, gibbs_opts);
  }
  return ds;
}

namespace {

std::string evidence_key(const Evidence& ev) {
  std::string key;
  for (const auto& [v, s] : ev) {
    key += std::to_string(v);
    key.push_back('=');
    key += std::to_string(s);
    key.push_back(';');
  }
  return key;
}

}  // namespace

TestSet build_test_set(const BayesianNetwork& net, int max_n,
                       std::uint64_t seed, const OracleFn& oracle,
                       const ObservationPolicy& policy) {
  if (max_n < 1) throw std::invalid_argument("test set size must be >= 1");
  TestSet ts;
  ts.network_name = net.name;
  ts.network_hash = network_hash(net);
  ts.seed = seed;

  Rng rng(seed);
  const auto order = topological_order(net);
  std::set<std::string> seen;
  const long long attempt_cap = 100LL * max_n;
  long long attempts = 0;
  while (static_cast<int>(ts.cases.size()) < max_n &&
         attempts < attempt_cap) {
    ++attempts;
    const Assignment sample = ancestral_sample_ordered(net, order, rng);
    Evidence ev = policy.draw(sample, net.var_count(), rng);
    if (!seen.insert(evidence_key(ev)).second) continue;
    TestCase tc;
    tc.truth = oracle(net, ev).marginals;
    tc.evidence = std::move(ev);
    ts.cases.push_back(std::move(tc));
  }
  return ts;
}

std::string synth_kind_name(SynthKind k) {
  switch (k) {
    case SynthKind::A: return "A";
    case SynthKind::B: return "B";
    case SynthKind::C: return "C";
  }
  return "A";
}

namespace {

VariableSpec binary_var(const std::string& name, int index) {
  VariableSpec v;
  v.name = name;
  v.states = {"s0", "s1"};
  v.index = index;
  return v;
}

Cpt random_cpt(const BayesianNetwork& net, int child,
               const std::vector<int>& parents, Rng& rng) {
  Cpt c;
  c.child = child;
  c.parents = parents;
  c.card = net.card(child);
  for (int p : parents) c.parent_cards.push_back(net.card(p));
  const int rows = c.row_count();
  c.table.reserve(static_cast<std::size_t>(rows * c.card));
  for (int r = 0; r < rows; ++r) {
    for (double v : rng.simplex(c.card)) c.table.push_back(v);
  }
  return c;
}

}  // namespace

SynthSpec synth_markov_border(SynthKind kind, std::uint64_t seed) {
  Rng rng(Rng::mix(seed ^ 0x5f3759df));
  SynthSpec spec;
  spec.kind = kind;
  BayesianNetwork& net = spec.net;
  net.name = "synth_" + synth_kind_name(kind);

  switch (kind) {
    case SynthKind::A: {
      // parent -> target; inference runs with the arrow.
      net.variables = {binary_var("parent", 0), binary_var("target", 1)};
      net.cpts.push_back(random_cpt(net, 0, {}, rng));
      net.cpts.push_back(random_cpt(net, 1, {0}, rng));
      spec.target = 1;
      spec.policy = ObservationPolicy::independent_half({0});
      break;
    }
    case SynthKind::B: {
      // target -> child <- uncle; observing only the co-parent.
      net.variables = {binary_var("target", 0), binary_var("uncle", 1),
                       binary_var("child", 2)};
      net.cpts.push_back(random_cpt(net, 0, {}, rng));
      net.cpts.push_back(random_cpt(net, 1, {}, rng));
      net.cpts.push_back(random_cpt(net, 2, {0, 1}, rng));
      spec.target = 0;
      spec.policy = ObservationPolicy::independent_half({1});
      break;
    }
    case SynthKind::C: {
      // target -> child; inference runs against the arrow.
      net.variables = {binary_var("target", 0), binary_var("child", 1)};
      net.cpts.push_back(random_cpt(net, 0, {}, rng));
      net.cpts.push_back(random_cpt(net, 1, {0}, rng));
      spec.target = 0;
      spec.policy = ObservationPolicy::independent_half({1});
      break;
    }
  }
  return spec;
}

HyperpriorReport hyperprior_variance_report(const Hyperprior& prior,
                                            long long n_draws,
                                            std::uint64_t seed) {
  if (n_draws < 1000) {
    throw std::invalid_argument("hyperprior report needs >= 1000 draws");
  }
  Rng rng(seed);
  double sum_d = 0.0, sum_d2 = 0.0, sum_a = 0.0, sum_a2 = 0.0;
  for (long long i = 0; i < n_draws; ++i) {
    const double a = prior.draw(rng);
    const double b = prior.draw(rng);
    const double c = prior.draw(rng);
    const double d = a * b + c - a * c;
    sum_d += d;
    sum_d2 += d * d;
    sum_a += a;
    sum_a2 += a * a;
  }
  const double n = static_cast<double>(n_draws);
  HyperpriorReport rep;
  rep.n_draws = n_draws;
  rep.e_delta = sum_d / n;
  rep.var_delta = std::max(0.0, sum_d2 / n - rep.e_delta * rep.e_delta);
  const double mean_a = sum_a / n;
  rep.var_alpha = std::max(0.0, sum_a2 / n - mean_a * mean_a);
  rep.var_delta_ge_var_alpha = rep.var_delta >= rep.var_alpha;
  return rep;
}

// --- persistence ---

namespace {

void check_hash(std::uint64_t file_hash, std::uint64_t net_hash,
                const std::string& what) {
  if (file_hash != net_hash) {
    throw IoError(what + ": network hash mismatch (file " + hex64(file_hash) +
                  ", network " + hex64(net_hash) + ")");
  }
}

}  // namespace

void save_dataset(const Dataset& ds, const BayesianNetwork& net,
                  const std::string& prefix) {
  std::ostringstream csv;
  for (int j = 0; j < net.var_count(); ++j) {
    if (j) csv << ',';
    csv << net.variables[static_cast<std::size_t>(j)].name;
  }
  csv << '\n';
  for (const auto& row : ds.samples) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) csv << ',';
      csv << row[j];
    }
    csv << '\n';
  }
  const std::string body = csv.str();

  nlohmann::ordered_json meta;
  meta["kind"] = "dataset";
  meta["network_name"] = ds.network_name;
  meta["network_hash"] = hex64(ds.network_hash);
  meta["sampler"] = ds.sampler;
  meta["seed"] = ds.seed;
  meta["n"] = ds.samples.size();
  meta["csv_hash"] = hex64(fnv1a64(body));
  write_text_file(prefix + ".json", meta.dump(2) + "\n");
  write_text_file(prefix + ".csv", body);
}

Dataset load_dataset(const BayesianNetwork& net, const std::string& prefix) {
  const auto meta = nlohmann::json::parse(read_text_file(prefix + ".json"));
  Dataset ds;
  ds.network_name = meta.at("network_name").get<std::string>();
  ds.sampler = meta.at("sampler").get<std::string>();
  ds.seed = meta.at("seed").get<std::uint64_t>();
  ds.network_hash =
      std::stoull(meta.at("network_hash").get<std::string>(), nullptr, 16);
  check_hash(ds.network_hash, network_hash(net), "dataset " + prefix);

  const std::string body = read_text_file(prefix + ".csv");
  std::istringstream in(body);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty dataset csv: " + prefix);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != net.var_count()) {
      throw IoError("dataset row width mismatch: " + prefix);
    }
    Assignment a;
    a.reserve(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const int s = std::stoi(cells[j]);
      if (s < 0 || s >= net.card(static_cast<int>(j))) {
        throw IoError("dataset state out of range: " + prefix);
      }
      a.push_back(s);
    }
    ds.samples.push_back(std::move(a));
  }
  if (ds.samples.size() != meta.at("n").get<std::size_t>()) {
    throw IoError("dataset row count mismatch: " + prefix);
  }
  return ds;
}

void save_test_set(const TestSet& ts, const BayesianNetwork& net,
                   const std::string& prefix) {
  std::ostringstream csv;
  for (int j = 0; j < net.var_count(); ++j) {
    if (j) csv << ',';
    csv << net.variables[static_cast<std::size_t>(j)].name;
  }
  for (int j = 0; j < net.var_count(); ++j) {
    const auto& v = net.variables[static_cast<std::size_t>(j)];
    for (int k = 0; k < v.card(); ++k) {
      csv << ",p_" << v.name << '_' << v.states[static_cast<std::size_t>(k)];
    }
  }
  csv << '\n';
  for (const auto& tc : ts.cases) {
    for (int j = 0; j < net.var_count(); ++j) {
      if (j) csv << ',';
      const auto it = tc.evidence.find(j);
      if (it != tc.evidence.end()) csv << it->second;
    }
    for (int j = 0; j < net.var_count(); ++j) {
      const auto it = tc.truth.find(j);
      for (int k = 0; k < net.card(j); ++k) {
        csv << ',';
        if (it != tc.truth.end()) {
          csv << format_double(it->second[static_cast<std::size_t>(k)]);
        }
      }
    }
    csv << '\n';
  }
  const std::string body = csv.str();

  nlohmann::ordered_json meta;
  meta["kind"] = "testset";
  meta["network_name"] = ts.network_name;
  meta["network_hash"] = hex64(ts.network_hash);
  meta["seed"] = ts.seed;
  meta["n"] = ts.cases.size();
  meta["csv_hash"] = hex64(fnv1a64(body));
  write_text_file(prefix + ".json", meta.dump(2) + "\n");
  write_text_file(prefix + ".csv", body);
}

TestSet load_test_set(const BayesianNetwork& net, const std::string& prefix) {
  const auto meta = nlohmann::json::parse(read_text_file(prefix + ".json"));
  TestSet ts;
  ts.network_name = meta.at("network_name").get<std::string>();
  ts.seed = meta.at("seed").get<std::uint64_t>();
  ts.network_hash =
      std::stoull(meta.at("network_hash").get<std::string>(), nullptr, 16);
  check_hash(ts.network_hash, network_hash(net), "test set " + prefix);

  const int m = net.var_count();
  std::istringstream in(read_text_file(prefix + ".csv"));
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty test csv: " + prefix);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    TestCase tc;
    std::size_t at = 0;
    for (int j = 0; j < m; ++j, ++at) {
      if (!cells.at(at).empty()) tc.evidence[j] = std::stoi(cells[at]);
    }
    for (int j = 0; j < m; ++j) {
      const int card = net.card(j);
      if (tc.evidence.count(j)) {
        at += static_cast<std::size_t>(card);
        continue;
      }
      std::vector<double> p;
      p.reserve(static_cast<std::size_t>(card));
      for (int k = 0; k < card; ++k, ++at) p.push_back(std::stod(cells.at(at)));
      tc.truth[j] = std::move(p);
    }
    ts.cases.push_back(std::move(tc));
  }
  if (ts.cases.size() != meta.at("n").get<std::size_t>()) {
    throw IoError("test set row count mismatch: " + prefix);
  }
  return ts;
}

}  // namespace hetinf
