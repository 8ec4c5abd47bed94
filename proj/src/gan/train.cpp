#include "qanogan/gan/train.hpp"

#include <chrono>
#include <stdexcept>

namespace qanogan::gan {

namespace {

nn::AdamConfig adam_config(const TrainConfig& config) {
  nn::AdamConfig adam;
  adam.learning_rate = config.learning_rate;
  adam.beta1 = config.beta1;
  adam.beta2 = config.beta2;
  adam.epsilon = config.epsilon;
  return adam;
}

void check_train_config(const TrainConfig& config) {
  if (config.batch_size < 1) throw std::invalid_argument("train: batch_size must be positive");
  if (config.n_critic < 1) throw std::invalid_argument("train: n_critic must be positive");
  if (config.generator_iters < 0) {
    throw std::invalid_argument("train: generator_iters must be non-negative");
  }
  if (config.shots && *config.shots < 1) {
    throw std::invalid_argument("train: shots must be positive when set");
  }
  if (!(config.fd_step > 0.0)) throw std::invalid_argument("train: fd_step must be positive");
}

Batch sample_rows(const data::Dataset& dataset, int count, RngStream& rng) {
  Batch batch(static_cast<std::size_t>(count));
  for (std::vector<double>& row : batch) {
    row = dataset.rows[rng.uniform_int(dataset.rows.size())].features;
  }
  return batch;
}

}  // namespace

double train_critic_step(GanModel& model, const Batch& real_batch, const TrainConfig& config,
                         RngStream& latent_rng, RngStream& eps_rng, RngStream* shot_rng) {
  const int m = static_cast<int>(real_batch.size());
  const Batch latent =
      sample_latent(model.config.variant, model.config.latent_dim, m, latent_rng);
  std::vector<double> eps(static_cast<std::size_t>(m));
  for (double& e : eps) e = eps_rng.uniform();

  const EvalContext ctx{config.shots, shot_rng};
  const CriticGrads grads =
      critic_gradients(model, real_batch, latent, eps, config.penalty_weight, ctx);

  std::vector<double> params = model.critic.parameters();
  nn::adam_step(model.adam_critic, params, grads.critic);
  model.critic.set_parameters(params);
  model.critic_steps += 1;
  return grads.loss;
}

double train_generator_step(GanModel& model, const TrainConfig& config, RngStream& latent_rng,
                            RngStream* shot_rng) {
  const Batch latent = sample_latent(model.config.variant, model.config.latent_dim,
                                     config.batch_size, latent_rng);
  const EvalContext ctx{config.shots, shot_rng};
  const GeneratorGrads grads =
      generator_gradients(model, latent, config.gradient_mode, config.fd_step, ctx);

  if (model.config.variant == GeneratorVariant::Quantum) {
    nn::adam_step(model.adam_theta, model.theta, grads.theta);
  } else {
    std::vector<double> params = model.body.parameters();
    nn::adam_step(model.adam_body, params, grads.body);
    model.body.set_parameters(params);
  }
  if (model.config.use_upscaling) {
    std::vector<double> params = model.upscale.parameters();
    nn::adam_step(model.adam_upscale, params, grads.upscale);
    model.upscale.set_parameters(params);
  }
  model.generator_steps += 1;
  return grads.loss;
}

LossHistory train(GanModel& model, const data::Dataset& train_split, const TrainConfig& config,
                  const TrainCallbacks& callbacks) {
  check_train_config(config);
  if (train_split.rows.empty()) throw std::invalid_argument("train: empty training split");
  if (train_split.feature_count() != model.config.data_dim) {
    throw std::invalid_argument("train: feature count does not match data_dim");
  }
  if (train_split.anomaly_count() != 0) {
    throw std::invalid_argument("train: training split must contain only normal rows");
  }

  // Rebuild optimizer state so a training run is a function of the model
  // parameters and the config alone.
  const nn::AdamConfig adam = adam_config(config);
  model.adam_theta = nn::make_adam(model.theta.size(), adam);
  model.adam_body = nn::make_adam(model.body.param_count(), adam);
  model.adam_upscale = nn::make_adam(model.upscale.param_count(), adam);
  model.adam_critic = nn::make_adam(model.critic.param_count(), adam);

  RngStream latent_rng = derive_stream(config.seed, "latent");
  RngStream minibatch_rng = derive_stream(config.seed, "minibatch");
  RngStream eps_rng = derive_stream(config.seed, "gp-eps");
  RngStream shot_rng = derive_stream(config.seed, "shots");
  RngStream* shots = config.shots ? &shot_rng : nullptr;

  LossHistory history;
  const auto start = std::chrono::steady_clock::now();
  for (int it = 1; it <= config.generator_iters; ++it) {
    double last_critic_loss = 0.0;
    for (int k = 0; k < config.n_critic; ++k) {
      const Batch real = sample_rows(train_split, config.batch_size, minibatch_rng);
      last_critic_loss = train_critic_step(model, real, config, latent_rng, eps_rng, shots);
    }
    const double gen_loss = train_generator_step(model, config, latent_rng, shots);

    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    history.iteration.push_back(it);
    history.critic_loss.push_back(last_critic_loss);
    history.generator_loss.push_back(gen_loss);
    history.wall_time_s.push_back(elapsed.count());
    if (callbacks.on_iteration) callbacks.on_iteration(it, last_critic_loss, gen_loss);
  }
  return history;
}

}  // namespace qanogan::gan
