#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hetinf/encoding.hpp"
#include "hetinf/sampling.hpp"

namespace hetinf {

/// One raw model output per test case, aligned 1:1 with the TestSet.
struct PredictionSet {
  std::vector<Eigen::VectorXd> outputs;
};

struct ScoringOptions {
  bool score_all_variables = false;        // literal formula over all M
  std::optional<int> only_variable;        // Markov-border target scoring
  double threshold = 0.0;                  // keep units with max truth >= t
};

struct PerCaseScore {
  double ad = 0.0;
  double kl = 0.0;
  double acc = 0.0;
  int units = 0;
};

struct MetricsReport {
  double ad = 0.0;
  double kl = 0.0;
  double acc = 0.0;
  long long units = 0;  // scored (case, variable) pairs
  long long cases = 0;
  std::optional<double> threshold;
  bool empty = false;  // no unit survived the threshold filter
  std::vector<PerCaseScore> per_case;

  std::string to_json() const;
};

double absolute_deviation(const PredictionSet& preds, const TestSet& testset,
                          const OneHotLayout& layout,
                          const ScoringOptions& opts = {});
double kl_divergence(const PredictionSet& preds, const TestSet& testset,
                     const OneHotLayout& layout,
                     const ScoringOptions& opts = {});
double classification_accuracy(const PredictionSet& preds,
                               const TestSet& testset,
                               const OneHotLayout& layout,
                               const ScoringOptions& opts = {});

/// All three metrics over the scored units, with optional threshold filter.
MetricsReport evaluate_predictions(const PredictionSet& preds,
                                   const TestSet& testset,
                                   const OneHotLayout& layout,
                                   const ScoringOptions& opts = {});

using PredictFn = std::function<Eigen::VectorXd(const Evidence&)>;

/// Runs the predictor over every case, then scores.
MetricsReport evaluate_model(const PredictFn& predict, const TestSet& testset,
                             const OneHotLayout& layout,
                             const ScoringOptions& opts = {});

}  // namespace hetinf
