#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qanogan/qsim/ansatz.hpp"

namespace qanogan::gan {

enum class GeneratorVariant : std::uint8_t { Classical = 0, Quantum = 1 };
enum class InitStrategy : std::uint8_t { Random = 0, IdentityBlock = 1 };
enum class GradientMode : std::uint8_t { ForwardDiff = 0, ParamShift = 1 };

struct GeneratorConfig {
  GeneratorVariant variant = GeneratorVariant::Quantum;
  int latent_dim = 6;   // N: qubits, or input width of the classical body
  int data_dim = 6;     // M: feature count of the modeled data
  bool use_upscaling = true;

  // Quantum generator.
  qsim::CircuitKind circuit = qsim::CircuitKind::C1;
  int depth = 1;
  InitStrategy init = InitStrategy::Random;

  // Classical generator body: number of width-N hidden layers.
  int body_layers = 2;
};

struct TrainConfig {
  double learning_rate = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-7;
  double penalty_weight = 10.0;  // gradient-penalty coefficient
  int batch_size = 64;
  int n_critic = 5;              // critic updates per generator update
  int generator_iters = 2700;

  GradientMode gradient_mode = GradientMode::ForwardDiff;
  std::optional<int> shots;      // empty: exact expectations
  double fd_step = 1e-4;

  std::uint64_t seed = 0;
};

}  // namespace qanogan::gan
