#pragma once

#include <span>
#include <vector>

namespace qanogan::nn {

struct AdamConfig {
  double learning_rate = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-7;
};

// Moment estimates for one parameter group. Groups never share state.
struct AdamState {
  AdamConfig config;
  std::vector<double> m;
  std::vector<double> v;
  long t = 0;
};

AdamState make_adam(std::size_t n_params, const AdamConfig& config = {});

// One bias-corrected update: p -= lr * m_hat / (sqrt(v_hat) + eps).
void adam_step(AdamState& state, std::vector<double>& params, std::span<const double> grads);

}  // namespace qanogan::nn
