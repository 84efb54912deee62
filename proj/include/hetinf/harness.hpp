#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hetinf/bn.hpp"
#include "hetinf/metrics.hpp"
#include "hetinf/models.hpp"
#include "hetinf/sampling.hpp"

namespace hetinf {

/// One experiment directory: network bundle, data files, checkpoints,
/// metric records and report tables all live under `out_dir`.
struct ExperimentConfig {
  std::string network;  // path to a BIF file, or "synth:A" | "synth:B" | ...
  std::string out_dir;
  std::uint64_t seed_data = 1;
  std::uint64_t seed_model = 1;
  std::uint64_t seed_predict = 1;
  int train_n = 10000;
  int test_n = 1000;
  std::string sampler = "ancestral";  // or "gibbs"
  GibbsOptions gibbs;
  std::vector<double> thresholds = {0.0, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
  bool score_all_variables = false;    // literal all-M metric formula
  bool extra_state_encoding = false;   // ablation encoding for models
  std::optional<int> epochs;           // override model default
  std::optional<std::vector<int>> hidden;  // override tower sizes

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
};

/// What the experiment directory was generated from.
struct SourceInfo {
  bool is_synth = false;
  std::string name;
  std::optional<SynthKind> synth_kind;
  int target = -1;                 // synth target variable
  std::vector<int> observables;    // synth observation policy
  BayesianNetwork net;

  ObservationPolicy policy() const;
  ScoringOptions scoring(const ExperimentConfig& cfg) const;
};

SourceInfo resolve_network(const ExperimentConfig& cfg);

/// Deterministic validation/evaluation split of a test set: a seeded
/// shuffle, first 20% validation, rest evaluation. Sets with fewer than
/// five cases are used whole on both sides.
std::pair<TestSet, TestSet> split_test_set(const TestSet& ts,
                                           std::uint64_t seed);

struct GenDataResult {
  std::string network_json;
  std::string train_prefix;
  std::string test_prefix;
  std::uint64_t network_hash = 0;
};

GenDataResult cmd_gen_data(const ExperimentConfig& cfg);

struct TrainResult {
  std::string checkpoint_path;
  int epochs_ran = 0;
  double best_val_ad = 0.0;
};

TrainResult cmd_train(const ExperimentConfig& cfg, ModelKind kind);

struct EvalResult {
  MetricsReport report;
  std::string record_path;
  std::string csv_path;
};

EvalResult cmd_eval(const ExperimentConfig& cfg,
                    const std::string& checkpoint_path,
                    std::optional<double> threshold = std::nullopt);

std::string cmd_sweep_threshold(const ExperimentConfig& cfg,
                                const std::string& checkpoint_path,
                                const std::vector<double>& grid);

/// Kinds A/B/C x configured models; target-variable scoring. Returns the
/// CSV path; the hyperprior variance report lands next to it.
std::string cmd_markov_border(const std::string& out_dir,
                              const std::vector<ModelKind>& kinds,
                              std::uint64_t seed_data,
                              std::uint64_t seed_model,
                              std::uint64_t seed_predict, int train_n,
                              std::optional<int> epochs = std::nullopt);

/// EAR vs NC on the three synthesized kinds, shared data seeds.
std::string cmd_compare_nc(const std::string& out_dir,
                           std::uint64_t seed_data, std::uint64_t seed_model,
                           std::uint64_t seed_predict, int train_n,
                           std::optional<int> epochs = std::nullopt);

struct ReportResult {
  std::string report_json;
  std::string matrix_csv;
  std::vector<std::string> series_csv;
};

/// Consolidates the eval records under `record_dirs` into one report:
/// dataset x model metric matrix plus per-model threshold series.
ReportResult emit_report(const std::vector<std::string>& record_dirs,
                         const std::string& out_dir);

}  // namespace hetinf
