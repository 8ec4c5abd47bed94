#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qanogan/gan/config.hpp"
#include "qanogan/nn/adam.hpp"
#include "qanogan/nn/network.hpp"
#include "qanogan/qsim/gradients.hpp"

namespace qanogan::gan {

// How quantum expectations are evaluated: exactly from the amplitudes when
// shots is empty, otherwise from a fresh sample per evaluation.
struct EvalContext {
  std::optional<int> shots;
  RngStream* shot_rng = nullptr;
};

struct GanModel {
  GeneratorConfig config;

  // Quantum generator.
  qsim::AnsatzLayout layout;
  qsim::BasisAssignment bases;
  std::vector<double> theta;

  // Classical generator body (unused for the quantum variant).
  nn::DenseNetwork body;

  // Sigmoid upscaling map from the generator readout to data space.
  nn::DenseNetwork upscale;

  nn::DenseNetwork critic;

  // One optimizer state per parameter group.
  nn::AdamState adam_theta;
  nn::AdamState adam_body;
  nn::AdamState adam_upscale;
  nn::AdamState adam_critic;

  long critic_steps = 0;
  long generator_steps = 0;
};

// Critic output widths used when none are configured: two shrinking hidden
// layers onto a scalar, all linear.
std::vector<int> default_critic_widths(const GeneratorConfig& config);

GanModel build_model(const GeneratorConfig& config, const std::vector<int>& critic_widths,
                     const nn::AdamConfig& adam, std::uint64_t seed);

// Latent draws: uniform over (-pi, pi]^N for the quantum generator, over
// [0, 1)^N for the classical one.
std::vector<std::vector<double>> sample_latent(GeneratorVariant variant, int latent_dim,
                                               int count, RngStream& rng);

// Readout of the generator body before upscaling: g_q(z) or g_c(z).
std::vector<double> generator_expectations(const GanModel& model, std::span<const double> z,
                                           const EvalContext& ctx = {});

// Full generator output in data space.
std::vector<double> generator_forward(const GanModel& model, std::span<const double> z,
                                      const EvalContext& ctx = {});

// (||grad_x D(xhat)|| - 1)^2 at xhat = x + eps (x_g - x).
double gradient_penalty(const nn::DenseNetwork& critic, std::span<const double> x_real,
                        std::span<const double> x_gen, double eps);

using Batch = std::vector<std::vector<double>>;

// Mean critic objective over a batch: D(G(z)) - D(x) plus the weighted
// penalty at per-pair interpolation points.
double critic_loss(const GanModel& model, const Batch& real_batch, const Batch& latent_batch,
                   std::span<const double> eps, double penalty_weight,
                   const EvalContext& ctx = {});

// Mean generator objective: -D(G(z)).
double generator_loss(const GanModel& model, const Batch& latent_batch,
                      const EvalContext& ctx = {});

struct CriticGrads {
  double loss = 0.0;
  std::vector<double> critic;  // flat, critic.parameters() layout
};

// Exact critic gradients, including the penalty term. Requires a critic with
// piecewise-linear activations.
CriticGrads critic_gradients(const GanModel& model, const Batch& real_batch,
                             const Batch& latent_batch, std::span<const double> eps,
                             double penalty_weight, const EvalContext& ctx = {});

struct GeneratorGrads {
  double loss = 0.0;
  std::vector<double> theta;    // quantum parameters
  std::vector<double> body;     // classical body parameters
  std::vector<double> upscale;  // upscaling parameters
};

// Generator gradients. The quantum parameter block is assembled by chaining
// critic and upscaling backprop into a circuit Jacobian computed with the
// configured rule; forward differences always use exact expectations, the
// shift rule samples when shots are configured.
GeneratorGrads generator_gradients(const GanModel& model, const Batch& latent_batch,
                                   GradientMode mode, double fd_step,
                                   const EvalContext& ctx = {});

}  // namespace qanogan::gan
