#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qanogan/anogan/anogan.hpp"
#include "qanogan/data/dataset.hpp"

namespace qanogan::eval {

struct ConfusionCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long tn = 0;

  long total() const { return tp + fp + fn + tn; }
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Precision, recall, and F1 = 2tp / (2tp + fp + fn). Empty denominators
// yield zero rather than dividing.
Metrics precision_recall_f1(const ConfusionCounts& counts);

ConfusionCounts confusion_at_threshold(std::span<const double> scores,
                                       std::span<const bool> labels, double threshold);

struct BootstrapCi {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};

// Percentile bootstrap interval for the mean: n_resamples resamples with
// replacement, quantiles by linear interpolation. Deterministic in the seed.
BootstrapCi bootstrap_ci(std::span<const double> values, int n_resamples, double level,
                         std::uint64_t seed);

struct ScoredRow {
  long index = 0;  // row position in the evaluated split
  double residual = 0.0;
  double discrimination = 0.0;
  double score = 0.0;
  bool predicted = false;
  bool label = false;
  std::vector<double> z;
};

struct RunEvaluation {
  ConfusionCounts counts;
  Metrics metrics;
  std::vector<ScoredRow> rows;
};

// Scores every row of the split by latent optimization and classifies it
// against the threshold. Row i uses its own derived random stream, so the
// result does not depend on evaluation order.
RunEvaluation evaluate_run(const gan::GanModel& model, const data::Dataset& split,
                           double threshold, const ano::AnomalyConfig& config,
                           std::uint64_t seed);

}  // namespace qanogan::eval
