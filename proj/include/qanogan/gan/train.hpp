#pragma once

#include <functional>

#include "qanogan/data/dataset.hpp"
#include "qanogan/gan/model.hpp"

namespace qanogan::gan {

struct TrainCallbacks {
  // Called once per generator iteration with the latest batch losses.
  std::function<void(int iteration, double critic_loss, double generator_loss)> on_iteration;
};

struct LossHistory {
  std::vector<int> iteration;
  std::vector<double> critic_loss;
  std::vector<double> generator_loss;
  std::vector<double> wall_time_s;
};

// One critic update on the given real batch. Latents and interpolation
// points are drawn from the caller's streams so trajectories replay exactly.
double train_critic_step(GanModel& model, const Batch& real_batch, const TrainConfig& config,
                         RngStream& latent_rng, RngStream& eps_rng,
                         RngStream* shot_rng = nullptr);

// One generator update: quantum parameters and upscaling weights (or the
// classical body) move together from the same forward pass.
double train_generator_step(GanModel& model, const TrainConfig& config, RngStream& latent_rng,
                            RngStream* shot_rng = nullptr);

// Full adversarial loop: n_critic critic updates, then one generator update,
// for generator_iters iterations. The training split must be all-normal.
LossHistory train(GanModel& model, const data::Dataset& train_split, const TrainConfig& config,
                  const TrainCallbacks& callbacks = {});

}  // namespace qanogan::gan
