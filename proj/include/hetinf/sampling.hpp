#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hetinf/bn.hpp"
#include "hetinf/exact.hpp"
#include "hetinf/rng.hpp"

namespace hetinf {

/// How test-case (and training-mask) evidence subsets are drawn from a
/// full sample. UniformCount draws m ~ U{0..M-1} and a uniform size-m
/// subset of all variables; IndependentHalf observes each listed variable
/// independently with probability 1/2 (synthesized-network policy).
struct ObservationPolicy {
  enum class Kind { UniformCount, IndependentHalf, AllObserved };
  Kind kind = Kind::UniformCount;
  std::vector<int> observables;  // IndependentHalf only

  Evidence draw(const Assignment& sample, int var_count, Rng& rng) const;

  static ObservationPolicy uniform_count() { return {}; }
  static ObservationPolicy independent_half(std::vector<int> vars) {
    ObservationPolicy p;
    p.kind = Kind::IndependentHalf;
    p.observables = std::move(vars);
    return p;
  }
  static ObservationPolicy all_observed() {
    ObservationPolicy p;
    p.kind = Kind::AllObserved;
    return p;
  }
};

struct Dataset {
  std::string network_name;
  std::uint64_t network_hash = 0;
  std::string sampler;  // "ancestral" | "gibbs"
  std::uint64_t seed = 0;
  std::vector<Assignment> samples;
};

struct TestCase {
  Evidence evidence;
  std::map<int, std::vector<double>> truth;  // unobserved variables only
};

struct TestSet {
  std::string network_name;
  std::uint64_t network_hash = 0;
  std::uint64_t seed = 0;
  std::vector<TestCase> cases;
};

/// One exact draw from the joint: each variable sampled after its parents.
Assignment ancestral_sample(const BayesianNetwork& net, Rng& rng);

struct GibbsOptions {
  int burn_in = 5000;
  int thinning = 10;
  bool allow_zero_entries = false;  // override for deterministic CPTs
};

/// Systematic-scan Gibbs; each variable is resampled from its full
/// conditional (own CPT times children's CPTs, renormalized).
std::vector<Assignment> gibbs_sample(const BayesianNetwork& net, Rng& rng,
                                     int n, const GibbsOptions& opts = {});

enum class SamplerKind { Ancestral, Gibbs };

Dataset build_training_set(const BayesianNetwork& net, int n,
                           SamplerKind sampler, std::uint64_t seed,
                           const GibbsOptions& gibbs_opts = {});

using OracleFn =
    std::function<PosteriorMarginals(const BayesianNetwork&, const Evidence&)>;

/// Evidence comes from ancestral samples (so it always has positive
/// probability); duplicates are rejected until the retry cap, after which a
/// smaller set is returned.
TestSet build_test_set(const BayesianNetwork& net, int max_n,
                       std::uint64_t seed, const OracleFn& oracle,
                       const ObservationPolicy& policy =
                           ObservationPolicy::uniform_count());

enum class SynthKind { A, B, C };

std::string synth_kind_name(SynthKind k);

/// Synthesized two/three-variable binary networks for the Markov-border
/// study. CPT rows are uniform on the simplex, seeded.
///   A: P -> T, observables {P}, target T  (parent to child)
///   B: T -> C <- U, observables {U}, target T  (co-parent to parent)
///   C: T -> C, observables {C}, target T  (child to parent)
struct SynthSpec {
  SynthKind kind = SynthKind::A;
  BayesianNetwork net;
  int target = 0;
  ObservationPolicy policy;
};

SynthSpec synth_markov_border(SynthKind kind, std::uint64_t seed);

struct Hyperprior {
  enum class Kind { PointMass, Uniform01 };
  Kind kind = Kind::Uniform01;
  double value = 0.5;  // PointMass only

  double draw(Rng& rng) const {
    return kind == Kind::PointMass ? value : rng.uniform01();
  }
};

/// Monte Carlo moments of delta = a*b + c - a*c with a,b,c iid from the
/// hyperprior; reports whether Var[delta] >= Var[a] held in the draw.
struct HyperpriorReport {
  double e_delta = 0.0;
  double var_delta = 0.0;
  double var_alpha = 0.0;
  bool var_delta_ge_var_alpha = false;
  long long n_draws = 0;
};

HyperpriorReport hyperprior_variance_report(const Hyperprior& prior,
                                            long long n_draws,
                                            std::uint64_t seed);

// --- persistence (JSON metadata + CSV body) ---

void save_dataset(const Dataset& ds, const BayesianNetwork& net,
                  const std::string& prefix);
Dataset load_dataset(const BayesianNetwork& net, const std::string& prefix);

void save_test_set(const TestSet& ts, const BayesianNetwork& net,
                   const std::string& prefix);
TestSet load_test_set(const BayesianNetwork& net, const std::string& prefix);

}  // namespace hetinf
