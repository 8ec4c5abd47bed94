#include "qanogan/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qanogan/rng.hpp"

namespace qanogan::eval {

Metrics precision_recall_f1(const ConfusionCounts& counts) {
  if (counts.tp < 0 || counts.fp < 0 || counts.fn < 0 || counts.tn < 0) {
    throw std::invalid_argument("precision_recall_f1: negative counts");
  }
  Metrics m;
  if (counts.tp + counts.fp > 0) {
    m.precision = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fp);
  }
  if (counts.tp + counts.fn > 0) {
    m.recall = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);
  }
  const long denom = 2 * counts.tp + counts.fp + counts.fn;
  if (denom > 0) {
    m.f1 = 2.0 * static_cast<double>(counts.tp) / static_cast<double>(denom);
  }
  return m;
}

ConfusionCounts confusion_at_threshold(std::span<const double> scores,
                                       std::span<const bool> labels, double threshold) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("confusion_at_threshold: scores and labels differ in length");
  }
  ConfusionCounts counts;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = ano::classify(scores[i], threshold);
    if (predicted && labels[i]) ++counts.tp;
    else if (predicted && !labels[i]) ++counts.fp;
    else if (!predicted && labels[i]) ++counts.fn;
    else ++counts.tn;
  }
  return counts;
}

namespace {

// Quantile with linear interpolation between order statistics.
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

BootstrapCi bootstrap_ci(std::span<const double> values, int n_resamples, double level,
                         std::uint64_t seed) {
  if (values.empty()) throw std::invalid_argument("bootstrap_ci: no values");
  if (n_resamples < 1) throw std::invalid_argument("bootstrap_ci: need at least one resample");
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("bootstrap_ci: level must lie in (0, 1)");
  }

  BootstrapCi ci;
  for (double v : values) ci.mean += v;
  ci.mean /= static_cast<double>(values.size());

  RngStream rng = derive_stream(seed, "bootstrap");
  std::vector<double> means(static_cast<std::size_t>(n_resamples));
  for (double& mean : means) {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      acc += values[rng.uniform_int(values.size())];
    }
    mean = acc / static_cast<double>(values.size());
  }
  std::sort(means.begin(), means.end());
  const double tail = (1.0 - level) / 2.0;
  ci.low = quantile_sorted(means, tail);
  ci.high = quantile_sorted(means, 1.0 - tail);
  return ci;
}

RunEvaluation evaluate_run(const gan::GanModel& model, const data::Dataset& split,
                           double threshold, const ano::AnomalyConfig& config,
                           std::uint64_t seed) {
  if (split.rows.empty()) throw std::invalid_argument("evaluate_run: empty split");
  if (split.feature_count() != model.config.data_dim) {
    throw std::invalid_argument("evaluate_run: feature count does not match data_dim");
  }

  RunEvaluation run;
  run.rows.reserve(split.rows.size());
  for (std::size_t i = 0; i < split.rows.size(); ++i) {
    RngStream rng = derive_stream(seed, "latent-opt", static_cast<std::uint64_t>(i));
    const ano::LatentOptResult opt =
        ano::optimize_latent(model, split.rows[i].features, config, rng);

    ScoredRow row;
    row.index = static_cast<long>(i);
    row.residual = opt.residual;
    row.discrimination = opt.discrimination;
    row.score = opt.score;
    row.predicted = ano::classify(opt.score, threshold);
    row.label = split.rows[i].label;
    row.z = opt.z;

    if (row.predicted && row.label) ++run.counts.tp;
    else if (row.predicted && !row.label) ++run.counts.fp;
    else if (!row.predicted && row.label) ++run.counts.fn;
    else ++run.counts.tn;

    run.rows.push_back(std::move(row));
  }
  run.metrics = precision_recall_f1(run.counts);
  return run;
}

}  // namespace qanogan::eval
