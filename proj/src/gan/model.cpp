#include "qanogan/gan/model.hpp"

#include <cmath>
#include <stdexcept>

namespace qanogan::gan {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Below this, the direction of the input gradient is numerically undefined
// and the penalty gradient is treated as zero.
constexpr double kNormFloor = 1e-12;

void check_generator_config(const GeneratorConfig& config) {
  if (config.latent_dim < 1) throw std::invalid_argument("build_model: latent_dim must be positive");
  if (config.data_dim < 1) throw std::invalid_argument("build_model: data_dim must be positive");
  if (!config.use_upscaling && config.latent_dim != config.data_dim) {
    throw std::invalid_argument(
        "build_model: without upscaling the generator readout must match data_dim");
  }
  if (config.variant == GeneratorVariant::Quantum) {
    if (config.depth < 1) throw std::invalid_argument("build_model: depth must be positive");
  } else {
    if (config.body_layers < 0) {
      throw std::invalid_argument("build_model: body_layers must be non-negative");
    }
    // Zero body layers leaves only the upscaling map as the generator.
    if (config.body_layers == 0 && !config.use_upscaling) {
      throw std::invalid_argument(
          "build_model: a classical generator needs body layers or upscaling");
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

std::vector<double> interpolate(std::span<const double> x_real, std::span<const double> x_gen,
                                double eps) {
  if (x_real.size() != x_gen.size()) {
    throw std::invalid_argument("gradient penalty: real and generated widths differ");
  }
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::invalid_argument("gradient penalty: eps must lie in [0, 1]");
  }
  std::vector<double> xhat(x_real.size());
  for (std::size_t i = 0; i < xhat.size(); ++i) {
    xhat[i] = x_real[i] + eps * (x_gen[i] - x_real[i]);
  }
  return xhat;
}

// dP/d(critic params) for P = (||grad_x D(xhat)|| - 1)^2, exact for
// piecewise-linear critics: the tangent pass of u meets the backprop deltas
// in per-layer outer products. Bias gradients are identically zero because
// grad_x D does not depend on the biases.
void accumulate_penalty_grads(const nn::DenseNetwork& critic, const nn::ForwardCache& cache,
                              const nn::BackwardResult& unit_back, double scale,
                              std::vector<double>& out) {
  const std::vector<double>& v = unit_back.input_grad;
  const double norm = std::sqrt(dot(v, v));
  if (norm < kNormFloor) return;
  const double coeff = 2.0 * (norm - 1.0) / norm;
  std::vector<double> u(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) u[i] = coeff * v[i];

  const std::vector<std::vector<double>> chain = tangent_forward(critic, cache, u);

  std::size_t off = 0;
  for (std::size_t li = 0; li < critic.layers().size(); ++li) {
    const nn::DenseLayer& layer = critic.layers()[li];
    const std::vector<double>& delta = unit_back.deltas[li];
    const std::vector<double>& c = chain[li];
    double* wgrad = out.data() + off;
    for (int r = 0; r < layer.out_dim; ++r) {
      const double d = scale * delta[r];
      double* row = wgrad + static_cast<std::size_t>(r) * layer.in_dim;
      for (int col = 0; col < layer.in_dim; ++col) row[col] += d * c[col];
    }
    off += layer.weights.size() + layer.bias.size();
  }
}

void check_batches(const GanModel& model, const Batch& real_batch, const Batch& latent_batch,
                   std::span<const double> eps) {
  if (real_batch.empty() || real_batch.size() != latent_batch.size() ||
      eps.size() != real_batch.size()) {
    throw std::invalid_argument("critic loss: batch sizes disagree");
  }
  for (const std::vector<double>& x : real_batch) {
    if (static_cast<int>(x.size()) != model.config.data_dim) {
      throw std::invalid_argument("critic loss: real row width does not match data_dim");
    }
  }
}

}  // namespace

std::vector<int> default_critic_widths(const GeneratorConfig& config) {
  return {config.data_dim, 16, 8, 1};
}

GanModel build_model(const GeneratorConfig& config, const std::vector<int>& critic_widths,
                     const nn::AdamConfig& adam, std::uint64_t seed) {
  check_generator_config(config);
  if (critic_widths.empty() || critic_widths.back() != 1) {
    throw std::invalid_argument("build_model: critic must end in one output");
  }
  for (int w : critic_widths) {
    if (w < 1) throw std::invalid_argument("build_model: critic widths must be positive");
  }

  GanModel model;
  model.config = config;

  if (config.variant == GeneratorVariant::Quantum) {
    auto [layout, bases] = qsim::build_ansatz(config.circuit, config.latent_dim, config.depth, seed);
    if (config.init == InitStrategy::IdentityBlock) {
      qsim::IdentityBlockInit init = qsim::identity_block_init(layout, bases, seed);
      model.layout = std::move(init.layout);
      model.bases = std::move(init.bases);
      model.theta = std::move(init.theta);
    } else {
      model.theta = qsim::random_init(layout, seed);
      model.layout = std::move(layout);
      model.bases = std::move(bases);
    }
  } else if (config.body_layers > 0) {
    RngStream body_rng = derive_stream(seed, "body-init");
    const std::vector<int> widths(static_cast<std::size_t>(config.body_layers),
                                  config.latent_dim);
    const std::vector<nn::Activation> acts(widths.size(), nn::Activation::LeakyRelu);
    model.body = nn::make_dense_network(config.latent_dim, widths, acts, body_rng);
  }

  if (config.use_upscaling) {
    RngStream up_rng = derive_stream(seed, "upscale-init");
    model.upscale = nn::make_dense_network(config.latent_dim, {config.data_dim},
                                           {nn::Activation::Sigmoid}, up_rng);
  }

  RngStream critic_rng = derive_stream(seed, "critic-init");
  const std::vector<nn::Activation> critic_acts(critic_widths.size(), nn::Activation::Identity);
  model.critic = nn::make_dense_network(config.data_dim, critic_widths, critic_acts, critic_rng);

  model.adam_theta = nn::make_adam(model.theta.size(), adam);
  model.adam_body = nn::make_adam(model.body.param_count(), adam);
  model.adam_upscale = nn::make_adam(model.upscale.param_count(), adam);
  model.adam_critic = nn::make_adam(model.critic.param_count(), adam);
  return model;
}

std::vector<std::vector<double>> sample_latent(GeneratorVariant variant, int latent_dim,
                                               int count, RngStream& rng) {
  if (latent_dim < 1 || count < 1) {
    throw std::invalid_argument("sample_latent: dimensions must be positive");
  }
  std::vector<std::vector<double>> batch(static_cast<std::size_t>(count));
  for (std::vector<double>& z : batch) {
    z.resize(static_cast<std::size_t>(latent_dim));
    for (double& v : z) {
      v = variant == GeneratorVariant::Quantum ? kPi - 2.0 * kPi * rng.uniform() : rng.uniform();
    }
  }
  return batch;
}

std::vector<double> generator_expectations(const GanModel& model, std::span<const double> z,
                                           const EvalContext& ctx) {
  if (model.config.variant == GeneratorVariant::Quantum) {
    if (ctx.shots) {
      if (ctx.shot_rng == nullptr) {
        throw std::invalid_argument("generator_expectations: sampled mode needs an rng");
      }
      return qsim::circuit_expectations_sampled(model.layout, model.bases, model.theta, z,
                                                *ctx.shots, *ctx.shot_rng);
    }
    return qsim::circuit_expectations(model.layout, model.bases, model.theta, z);
  }
  if (model.body.empty()) return {z.begin(), z.end()};  // zero body layers
  return nn::forward(model.body, z);
}

std::vector<double> generator_forward(const GanModel& model, std::span<const double> z,
                                      const EvalContext& ctx) {
  std::vector<double> g = generator_expectations(model, z, ctx);
  if (!model.config.use_upscaling) return g;
  return nn::forward(model.upscale, g);
}

double gradient_penalty(const nn::DenseNetwork& critic, std::span<const double> x_real,
                        std::span<const double> x_gen, double eps) {
  const std::vector<double> xhat = interpolate(x_real, x_gen, eps);
  nn::ForwardCache cache;
  nn::forward(critic, xhat, &cache);
  const nn::BackwardResult back = nn::backward(critic, cache, std::vector<double>{1.0});
  const double norm = std::sqrt(dot(back.input_grad, back.input_grad));
  return (norm - 1.0) * (norm - 1.0);
}

double critic_loss(const GanModel& model, const Batch& real_batch, const Batch& latent_batch,
                   std::span<const double> eps, double penalty_weight, const EvalContext& ctx) {
  check_batches(model, real_batch, latent_batch, eps);
  double acc = 0.0;
  for (std::size_t i = 0; i < real_batch.size(); ++i) {
    const std::vector<double> x_gen = generator_forward(model, latent_batch[i], ctx);
    const double d_gen = nn::forward(model.critic, x_gen)[0];
    const double d_real = nn::forward(model.critic, real_batch[i])[0];
    acc += d_gen - d_real +
           penalty_weight * gradient_penalty(model.critic, real_batch[i], x_gen, eps[i]);
  }
  return acc / static_cast<double>(real_batch.size());
}

double generator_loss(const GanModel& model, const Batch& latent_batch, const EvalContext& ctx) {
  if (latent_batch.empty()) throw std::invalid_argument("generator_loss: empty batch");
  double acc = 0.0;
  for (const std::vector<double>& z : latent_batch) {
    const std::vector<double> x_gen = generator_forward(model, z, ctx);
    acc -= nn::forward(model.critic, x_gen)[0];
  }
  return acc / static_cast<double>(latent_batch.size());
}

CriticGrads critic_gradients(const GanModel& model, const Batch& real_batch,
                             const Batch& latent_batch, std::span<const double> eps,
                             double penalty_weight, const EvalContext& ctx) {
  check_batches(model, real_batch, latent_batch, eps);
  if (model.critic.has_curved_activation()) {
    throw std::logic_error("critic_gradients: critic must be piecewise-linear");
  }
  const double inv_m = 1.0 / static_cast<double>(real_batch.size());

  CriticGrads grads;
  grads.critic.assign(model.critic.param_count(), 0.0);

  for (std::size_t i = 0; i < real_batch.size(); ++i) {
    const std::vector<double> x_gen = generator_forward(model, latent_batch[i], ctx);

    nn::ForwardCache cache;
    const double d_gen = nn::forward(model.critic, x_gen, &cache)[0];
    nn::BackwardResult back = nn::backward(model.critic, cache, std::vector<double>{inv_m});
    for (std::size_t p = 0; p < grads.critic.size(); ++p) grads.critic[p] += back.param_grads[p];

    const double d_real = nn::forward(model.critic, real_batch[i], &cache)[0];
    back = nn::backward(model.critic, cache, std::vector<double>{-inv_m});
    for (std::size_t p = 0; p < grads.critic.size(); ++p) grads.critic[p] += back.param_grads[p];

    const std::vector<double> xhat = interpolate(real_batch[i], x_gen, eps[i]);
    nn::forward(model.critic, xhat, &cache);
    const nn::BackwardResult unit = nn::backward(model.critic, cache, std::vector<double>{1.0});
    const double norm = std::sqrt(dot(unit.input_grad, unit.input_grad));
    accumulate_penalty_grads(model.critic, cache, unit, penalty_weight * inv_m, grads.critic);

    grads.loss += inv_m * (d_gen - d_real + penalty_weight * (norm - 1.0) * (norm - 1.0));
  }
  return grads;
}

GeneratorGrads generator_gradients(const GanModel& model, const Batch& latent_batch,
                                   GradientMode mode, double fd_step, const EvalContext& ctx) {
  if (latent_batch.empty()) throw std::invalid_argument("generator_gradients: empty batch");
  const double inv_m = 1.0 / static_cast<double>(latent_batch.size());
  const bool quantum = model.config.variant == GeneratorVariant::Quantum;

  GeneratorGrads grads;
  grads.theta.assign(model.theta.size(), 0.0);
  grads.body.assign(model.body.param_count(), 0.0);
  grads.upscale.assign(model.upscale.param_count(), 0.0);

  for (const std::vector<double>& z : latent_batch) {
    nn::ForwardCache body_cache;
    std::vector<double> g;
    if (quantum) {
      g = generator_expectations(model, z, ctx);
    } else if (model.body.empty()) {
      g.assign(z.begin(), z.end());
    } else {
      g = nn::forward(model.body, z, &body_cache);
    }

    nn::ForwardCache up_cache;
    std::vector<double> x_gen =
        model.config.use_upscaling ? nn::forward(model.upscale, g, &up_cache) : g;

    nn::ForwardCache critic_cache;
    const double d = nn::forward(model.critic, x_gen, &critic_cache)[0];
    grads.loss -= inv_m * d;

    // dL/dx_gen for L = -(1/m) sum D(x_gen).
    const nn::BackwardResult critic_back =
        nn::backward(model.critic, critic_cache, std::vector<double>{-inv_m});

    std::vector<double> beta;  // dL/dg
    if (model.config.use_upscaling) {
      nn::BackwardResult up_back = nn::backward(model.upscale, up_cache, critic_back.input_grad);
      for (std::size_t p = 0; p < grads.upscale.size(); ++p) {
        grads.upscale[p] += up_back.param_grads[p];
      }
      beta = std::move(up_back.input_grad);
    } else {
      beta = critic_back.input_grad;
    }

    if (quantum) {
      // Chain rule through the circuit Jacobian. Forward differences always
      // difference the exact expectations; the shift rule follows the
      // evaluation context.
      const qsim::Jacobian jac =
          mode == GradientMode::ForwardDiff
              ? qsim::grad_theta_forward_diff(model.layout, model.bases, model.theta, z, fd_step)
              : qsim::grad_theta_param_shift(model.layout, model.bases, model.theta, z, ctx.shots,
                                             ctx.shot_rng);
      for (int m = 0; m < jac.cols; ++m) {
        double acc = 0.0;
        for (int r = 0; r < jac.rows; ++r) acc += beta[r] * jac(r, m);
        grads.theta[m] += acc;
      }
    } else if (!model.body.empty()) {
      const nn::BackwardResult body_back = nn::backward(model.body, body_cache, beta);
      for (std::size_t p = 0; p < grads.body.size(); ++p) {
        grads.body[p] += body_back.param_grads[p];
      }
    }
  }
  return grads;
}

}  // namespace qanogan::gan
