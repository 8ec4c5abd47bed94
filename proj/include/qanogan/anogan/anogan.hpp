#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qanogan/gan/model.hpp"

namespace qanogan::ano {

struct AnomalyConfig {
  double alpha = 1.0;        // balance between residual and discrimination terms
  int latent_iters = 500;    // optimizer steps per restart
  int restarts = 1;
  nn::AdamConfig adam;       // defaults match the training optimizer
  gan::GradientMode gradient_mode = gan::GradientMode::ForwardDiff;
  std::optional<int> shots;
  double fd_step = 1e-4;
};

// L1 distance between a sample and its reconstruction.
double residual_loss(std::span<const double> x, std::span<const double> x_gen);

// |D(x) - D(x_gen)| under the trained critic.
double discrimination_loss(const nn::DenseNetwork& critic, std::span<const double> x,
                           std::span<const double> x_gen);

// (1/alpha) * residual + alpha * discrimination. alpha must be positive.
double anomaly_score(double residual, double discrimination, double alpha);

struct LatentOptResult {
  std::vector<double> z;        // best latent found
  double residual = 0.0;
  double discrimination = 0.0;
  double score = 0.0;
  std::vector<double> trace;    // score after every evaluation, restarts concatenated
};

// Searches latent space for the point whose generator output is closest to x
// under the anomaly score. Each restart starts from a fresh latent draw; the
// best evaluation across all restarts wins, including the initial points.
LatentOptResult optimize_latent(const gan::GanModel& model, std::span<const double> x,
                                const AnomalyConfig& config, RngStream& rng);

struct CalibrationResult {
  double threshold = 0.0;
  double f1 = 0.0;
};

// Sweeps thresholds over the candidate set {lowest score, midpoints between
// consecutive distinct scores} and keeps the one with the best F1 on the
// labeled scores. Ties resolve to the lowest such threshold. A sample is
// called anomalous when score >= threshold.
CalibrationResult calibrate_threshold(const std::vector<std::pair<double, bool>>& scored);

inline bool classify(double score, double threshold) { return score >= threshold; }

}  // namespace qanogan::ano
