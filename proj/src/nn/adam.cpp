#include "qanogan/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace qanogan::nn {

AdamState make_adam(std::size_t n_params, const AdamConfig& config) {
  if (!(config.learning_rate > 0.0)) {
    throw std::invalid_argument("make_adam: learning rate must be positive");
  }
  if (!(config.beta1 >= 0.0 && config.beta1 < 1.0) ||
      !(config.beta2 >= 0.0 && config.beta2 < 1.0)) {
    throw std::invalid_argument("make_adam: betas must lie in [0, 1)");
  }
  if (!(config.epsilon > 0.0)) {
    throw std::invalid_argument("make_adam: epsilon must be positive");
  }
  AdamState state;
  state.config = config;
  state.m.assign(n_params, 0.0);
  state.v.assign(n_params, 0.0);
  return state;
}

void adam_step(AdamState& state, std::vector<double>& params, std::span<const double> grads) {
  if (params.size() != state.m.size() || grads.size() != state.m.size()) {
    throw std::invalid_argument("adam_step: parameter or gradient size mismatch");
  }
  const AdamConfig& c = state.config;
  state.t += 1;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * grads[i];
    state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * grads[i] * grads[i];
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    params[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
  }
}

}  // namespace qanogan::nn
