#include "qanogan/anogan/anogan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qanogan::ano {

namespace {

double sign_of(double v) { return v > 0.0 ? 1.0 : v < 0.0 ? -1.0 : 0.0; }

struct Evaluation {
  std::vector<double> x_gen;
  double d_gen = 0.0;
  double residual = 0.0;
  double discrimination = 0.0;
  double score = 0.0;
};

Evaluation evaluate(const gan::GanModel& model, std::span<const double> x,
                    std::span<const double> z, double alpha, const gan::EvalContext& ctx) {
  Evaluation e;
  e.x_gen = gan::generator_forward(model, z, ctx);
  e.d_gen = nn::forward(model.critic, e.x_gen)[0];
  e.residual = residual_loss(x, e.x_gen);
  const double d_real = nn::forward(model.critic, x)[0];
  e.discrimination = std::abs(d_real - e.d_gen);
  e.score = anomaly_score(e.residual, e.discrimination, alpha);
  return e;
}

// dS/dz assembled by chaining dS/dG through the upscaling map (if any) and
// the latent Jacobian of the generator body.
std::vector<double> score_gradient(const gan::GanModel& model, std::span<const double> x,
                                   std::span<const double> z, const AnomalyConfig& config,
                                   const gan::EvalContext& ctx) {
  const bool quantum = model.config.variant == gan::GeneratorVariant::Quantum;

  nn::ForwardCache body_cache;
  std::vector<double> g;
  if (quantum) {
    g = gan::generator_expectations(model, z, ctx);
  } else if (model.body.empty()) {
    g.assign(z.begin(), z.end());
  } else {
    g = nn::forward(model.body, z, &body_cache);
  }
  nn::ForwardCache up_cache;
  const std::vector<double> x_gen =
      model.config.use_upscaling ? nn::forward(model.upscale, g, &up_cache) : g;

  nn::ForwardCache critic_cache;
  const double d_gen = nn::forward(model.critic, x_gen, &critic_cache)[0];
  const double d_real = nn::forward(model.critic, x)[0];

  // dS/dG = -(1/alpha) sign(x - G) - alpha sign(D(x) - D(G)) dD/dG.
  const nn::BackwardResult critic_back =
      nn::backward(model.critic, critic_cache, std::vector<double>{1.0});
  const double disc_sign = sign_of(d_real - d_gen);
  std::vector<double> upstream(x_gen.size());
  for (std::size_t i = 0; i < upstream.size(); ++i) {
    upstream[i] = -(1.0 / config.alpha) * sign_of(x[i] - x_gen[i]) -
                  config.alpha * disc_sign * critic_back.input_grad[i];
  }

  std::vector<double> d_g;  // dS/dg
  if (model.config.use_upscaling) {
    d_g = nn::backward(model.upscale, up_cache, upstream).input_grad;
  } else {
    d_g = std::move(upstream);
  }

  if (!quantum) {
    if (model.body.empty()) return d_g;  // g = z, identity Jacobian
    return nn::backward(model.body, body_cache, d_g).input_grad;
  }

  const qsim::Jacobian jac =
      config.gradient_mode == gan::GradientMode::ForwardDiff
          ? qsim::grad_latent_forward_diff(model.layout, model.bases, model.theta, z,
                                           config.fd_step)
          : qsim::grad_latent_param_shift(model.layout, model.bases, model.theta, z, ctx.shots,
                                          ctx.shot_rng);
  std::vector<double> grad(z.size(), 0.0);
  for (int m = 0; m < jac.cols; ++m) {
    double acc = 0.0;
    for (int r = 0; r < jac.rows; ++r) acc += d_g[r] * jac(r, m);
    grad[m] = acc;
  }
  return grad;
}

}  // namespace

double residual_loss(std::span<const double> x, std::span<const double> x_gen) {
  if (x.size() != x_gen.size()) {
    throw std::invalid_argument("residual_loss: widths differ");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::abs(x[i] - x_gen[i]);
  return acc;
}

double discrimination_loss(const nn::DenseNetwork& critic, std::span<const double> x,
                           std::span<const double> x_gen) {
  return std::abs(nn::forward(critic, x)[0] - nn::forward(critic, x_gen)[0]);
}

double anomaly_score(double residual, double discrimination, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("anomaly_score: alpha must be positive");
  return residual / alpha + alpha * discrimination;
}

LatentOptResult optimize_latent(const gan::GanModel& model, std::span<const double> x,
                                const AnomalyConfig& config, RngStream& rng) {
  if (static_cast<int>(x.size()) != model.config.data_dim) {
    throw std::invalid_argument("optimize_latent: sample width does not match data_dim");
  }
  if (!(config.alpha > 0.0)) {
    throw std::invalid_argument("optimize_latent: alpha must be positive");
  }
  if (config.latent_iters < 0 || config.restarts < 1) {
    throw std::invalid_argument("optimize_latent: bad iteration or restart count");
  }
  if (config.shots && *config.shots < 1) {
    throw std::invalid_argument("optimize_latent: shots must be positive when set");
  }

  const gan::EvalContext ctx{config.shots, config.shots ? &rng : nullptr};

  LatentOptResult best;
  bool have_best = false;

  for (int restart = 0; restart < config.restarts; ++restart) {
    std::vector<double> z =
        gan::sample_latent(model.config.variant, model.config.latent_dim, 1, rng)[0];
    nn::AdamState adam = nn::make_adam(z.size(), config.adam);

    Evaluation e = evaluate(model, x, z, config.alpha, ctx);
    best.trace.push_back(e.score);
    if (!have_best || e.score < best.score) {
      best.z = z;
      best.residual = e.residual;
      best.discrimination = e.discrimination;
      best.score = e.score;
      have_best = true;
    }

    for (int step = 0; step < config.latent_iters; ++step) {
      const std::vector<double> grad = score_gradient(model, x, z, config, ctx);
      nn::adam_step(adam, z, grad);
      e = evaluate(model, x, z, config.alpha, ctx);
      best.trace.push_back(e.score);
      if (e.score < best.score) {
        best.z = z;
        best.residual = e.residual;
        best.discrimination = e.discrimination;
        best.score = e.score;
      }
    }
  }
  return best;
}

CalibrationResult calibrate_threshold(const std::vector<std::pair<double, bool>>& scored) {
  if (scored.empty()) throw std::invalid_argument("calibrate_threshold: no scores");

  std::vector<double> sorted;
  sorted.reserve(scored.size());
  long positives = 0;
  for (const auto& [score, label] : scored) {
    sorted.push_back(score);
    positives += label;
  }
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> candidates{sorted.front()};
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] > sorted[i - 1]) {
      candidates.push_back(0.5 * (sorted[i - 1] + sorted[i]));
    }
  }

  CalibrationResult result;
  result.threshold = candidates.front();
  result.f1 = -1.0;
  for (double threshold : candidates) {
    long tp = 0, fp = 0, fn = 0;
    for (const auto& [score, label] : scored) {
      const bool predicted = classify(score, threshold);
      tp += (predicted && label);
      fp += (predicted && !label);
      fn += (!predicted && label);
    }
    const long denom = 2 * tp + fp + fn;
    const double f1 = denom > 0 ? 2.0 * static_cast<double>(tp) / static_cast<double>(denom) : 0.0;
    if (f1 > result.f1) {
      result.f1 = f1;
      result.threshold = threshold;
    }
  }
  if (result.f1 < 0.0) result.f1 = 0.0;
  return result;
}

}  // namespace qanogan::ano
