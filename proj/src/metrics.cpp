#include "hetinf/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace hetinf {
namespace {

constexpr double kKlFloor = 0.0024787521766663585;  // e^-6

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

int argmax_lowest_tie(const std::vector<double>& v) {
  int best = 0;
  for (int k = 1; k < static_cast<int>(v.size()); ++k) {
    if (v[static_cast<std::size_t>(k)] > v[static_cast<std::size_t>(best)]) {
      best = k;
    }
  }
  return best;
}

/// Per-unit scores for one case; truth one-hot is used for observed
/// variables when score_all_variables is set.
struct UnitVisitor {
  const OneHotLayout& layout;
  const TestSet& testset;
  const PredictionSet& preds;
  const ScoringOptions& opts;

  template <typename Fn>
  void visit(Fn&& fn) const {
    if (preds.outputs.size() != testset.cases.size()) {
      throw ShapeError("predictions are not aligned with the test set");
    }
    for (std::size_t i = 0; i < testset.cases.size(); ++i) {
      const TestCase& tc = testset.cases[i];
      const auto blocks = decode_distribution(layout, preds.outputs[i]);
      for (int j = 0; j < layout.var_count(); ++j) {
        const auto it_obs = tc.evidence.find(j);
        const bool observed = it_obs != tc.evidence.end();
        if (opts.only_variable && j != *opts.only_variable) continue;
        if (observed && !opts.score_all_variables) continue;

        std::vector<double> truth;
        if (observed) {
          truth.assign(
              static_cast<std::size_t>(
                  layout.data_width[static_cast<std::size_t>(j)]),
              0.0);
          truth[static_cast<std::size_t>(it_obs->second)] = 1.0;
        } else {
          truth = tc.truth.at(j);
        }
        const double max_truth =
            *std::max_element(truth.begin(), truth.end());
        if (max_truth < opts.threshold) continue;
        fn(static_cast<int>(i), j, blocks[static_cast<std::size_t>(j)],
           truth);
      }
    }
  }
};

struct Accumulated {
  std::vector<PerCaseScore> per_case;
  long long units = 0;

  // mean over cases of mean over that case's scored variables
  double mean_of(double PerCaseScore::*field) const {
    double total = 0.0;
    long long counted = 0;
    for (const auto& c : per_case) {
      if (c.units == 0) continue;
      total += (c.*field) / c.units;
      ++counted;
    }
    return counted ? total / static_cast<double>(counted) : 0.0;
  }
};

Accumulated accumulate(const PredictionSet& preds, const TestSet& testset,
                       const OneHotLayout& layout,
                       const ScoringOptions& opts) {
  Accumulated acc;
  acc.per_case.assign(testset.cases.size(), PerCaseScore{});
  UnitVisitor visitor{layout, testset, preds, opts};
  visitor.visit([&](int case_idx, int /*var*/,
                    const std::vector<double>& pred,
                    const std::vector<double>& truth) {
    const int card = static_cast<int>(truth.size());
    double ad = 0.0;
    double kl = 0.0;
    for (int k = 0; k < card; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      ad += std::abs(clamp01(pred[uk]) - truth[uk]);
      if (truth[uk] > 0.0) {
        const double clamped = std::max(std::min(pred[uk], 1.0), kKlFloor);
        kl -= truth[uk] * std::log(clamped / truth[uk]);
      }
    }
    ad /= static_cast<double>(card);
    const int pred_arg = argmax_lowest_tie(pred);
    const int truth_arg = argmax_lowest_tie(truth);

    auto& c = acc.per_case[static_cast<std::size_t>(case_idx)];
    c.ad += ad;
    c.kl += kl;
    c.acc += pred_arg == truth_arg ? 1.0 : 0.0;
    c.units += 1;
    ++acc.units;
  });
  return acc;
}

}  // namespace

double absolute_deviation(const PredictionSet& preds, const TestSet& testset,
                          const OneHotLayout& layout,
                          const ScoringOptions& opts) {
  return accumulate(preds, testset, layout, opts).mean_of(&PerCaseScore::ad);
}

double kl_divergence(const PredictionSet& preds, const TestSet& testset,
                     const OneHotLayout& layout, const ScoringOptions& opts) {
  return accumulate(preds, testset, layout, opts).mean_of(&PerCaseScore::kl);
}

double classification_accuracy(const PredictionSet& preds,
                               const TestSet& testset,
                               const OneHotLayout& layout,
                               const ScoringOptions& opts) {
  return accumulate(preds, testset, layout, opts).mean_of(&PerCaseScore::acc);
}

MetricsReport evaluate_predictions(const PredictionSet& preds,
                                   const TestSet& testset,
                                   const OneHotLayout& layout,
                                   const ScoringOptions& opts) {
  const Accumulated acc = accumulate(preds, testset, layout, opts);
  MetricsReport rep;
  rep.units = acc.units;
  rep.cases = static_cast<long long>(testset.cases.size());
  if (opts.threshold > 0.0) rep.threshold = opts.threshold;
  rep.per_case = acc.per_case;
  if (acc.units == 0) {
    rep.empty = true;
    rep.ad = rep.kl = std::numeric_limits<double>::quiet_NaN();
    rep.acc = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  rep.ad = acc.mean_of(&PerCaseScore::ad);
  rep.kl = acc.mean_of(&PerCaseScore::kl);
  rep.acc = acc.mean_of(&PerCaseScore::acc);
  return rep;
}

MetricsReport evaluate_model(const PredictFn& predict, const TestSet& testset,
                             const OneHotLayout& layout,
                             const ScoringOptions& opts) {
  PredictionSet preds;
  preds.outputs.reserve(testset.cases.size());
  for (const auto& tc : testset.cases) {
    preds.outputs.push_back(predict(tc.evidence));
  }
  return evaluate_predictions(preds, testset, layout, opts);
}

std::string MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  if (empty) {
    j["ad"] = nullptr;
    j["kl"] = nullptr;
    j["acc"] = nullptr;
  } else {
    j["ad"] = ad;
    j["kl"] = kl;
    j["acc"] = acc;
  }
  j["units"] = units;
  j["cases"] = cases;
  if (threshold) {
    j["threshold"] = *threshold;
  } else {
    j["threshold"] = nullptr;
  }
  return j.dump(2) + "\n";
}

}  // namespace hetinf
