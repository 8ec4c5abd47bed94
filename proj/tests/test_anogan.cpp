#include "qanogan/anogan/anogan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace qanogan;
using namespace qanogan::ano;

namespace {

nn::DenseNetwork difference_critic() {
  nn::DenseLayer layer;
  layer.in_dim = 2;
  layer.out_dim = 1;
  layer.weights = {1.0, -1.0};
  layer.bias = {0.0};
  layer.activation = nn::Activation::Identity;
  return nn::DenseNetwork({layer});
}

gan::GanModel small_quantum_model(int n, int data_dim, bool upscale, std::uint64_t seed) {
  gan::GeneratorConfig config;
  config.variant = gan::GeneratorVariant::Quantum;
  config.latent_dim = n;
  config.data_dim = data_dim;
  config.use_upscaling = upscale;
  config.circuit = qsim::CircuitKind::C1;
  config.depth = 1;
  return gan::build_model(config, {data_dim, 3, 1}, {}, seed);
}

}  // namespace

TEST_CASE("loss pieces evaluate to their definitions") {
  const std::vector<double> x{0.2, 0.7};
  const std::vector<double> x_gen{0.5, 0.5};
  CHECK(residual_loss(x, x_gen) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(residual_loss(x, std::vector<double>{0.1}), std::invalid_argument);

  const nn::DenseNetwork critic = difference_critic();
  // D(x) = 0.2 - 0.7 = -0.5; D(x_gen) = 0.
  CHECK(discrimination_loss(critic, x, x_gen) == doctest::Approx(0.5).epsilon(1e-15));

  CHECK(anomaly_score(0.5, 0.8, 1.0) == doctest::Approx(1.3).epsilon(1e-15));
  CHECK(anomaly_score(0.5, 0.8, 2.0) == doctest::Approx(0.25 + 1.6).epsilon(1e-15));
  CHECK_THROWS_AS(anomaly_score(0.5, 0.8, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(anomaly_score(0.5, 0.8, -1.0), std::invalid_argument);
}

TEST_CASE("classification is a threshold on the score") {
  CHECK(classify(1.0, 0.5));
  CHECK(classify(0.5, 0.5));  // boundary counts as anomalous
  CHECK_FALSE(classify(0.49, 0.5));
}

TEST_CASE("latent search recovers a generated sample") {
  // Target drawn from the generator itself, so a perfect inversion exists.
  const gan::GanModel model = small_quantum_model(2, 2, false, 61);
  const std::vector<double> z_star{0.9, -0.7};
  const std::vector<double> x = gan::generator_forward(model, z_star);

  AnomalyConfig config;
  config.latent_iters = 300;
  config.restarts = 2;
  config.adam.learning_rate = 0.05;

  RngStream rng = derive_stream(61, "latent-opt");
  const LatentOptResult result = optimize_latent(model, x, config, rng);

  CHECK(result.trace.size() == 2 * 301);
  CHECK(result.score == *std::min_element(result.trace.begin(), result.trace.end()));
  CHECK(result.residual < 1e-2);
  CHECK(result.score < 2e-2);

  const std::vector<double> x_rec = gan::generator_forward(model, result.z);
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(x_rec[i] - x[i]) < 1e-2);
  }
}

TEST_CASE("latent search works through the upscaling map") {
  const gan::GanModel model = small_quantum_model(2, 3, true, 67);
  const std::vector<double> z_star{-1.2, 0.4};
  const std::vector<double> x = gan::generator_forward(model, z_star);

  AnomalyConfig config;
  config.latent_iters = 400;
  config.restarts = 2;
  config.adam.learning_rate = 0.05;

  RngStream rng = derive_stream(67, "latent-opt");
  const LatentOptResult result = optimize_latent(model, x, config, rng);
  CHECK(result.residual < 2e-2);
}

TEST_CASE("latent search handles a generator that is only an upscaling map") {
  gan::GeneratorConfig config;
  config.variant = gan::GeneratorVariant::Classical;
  config.latent_dim = 3;
  config.data_dim = 3;
  config.body_layers = 0;
  config.use_upscaling = true;
  const gan::GanModel model = gan::build_model(config, {3, 3, 1}, {}, 91);

  const std::vector<double> z_star{0.2, 0.8, 0.5};
  const std::vector<double> x = gan::generator_forward(model, z_star);

  AnomalyConfig search;
  search.latent_iters = 400;
  search.restarts = 2;
  search.adam.learning_rate = 0.05;

  RngStream rng = derive_stream(91, "latent-opt");
  const LatentOptResult result = optimize_latent(model, x, search, rng);
  CHECK(result.residual < 2e-2);
}

TEST_CASE("latent search is deterministic and improves with restarts") {
  const gan::GanModel model = small_quantum_model(2, 2, false, 71);
  const std::vector<double> x{0.3, -0.4};

  AnomalyConfig config;
  config.latent_iters = 50;
  config.adam.learning_rate = 0.05;

  RngStream r1 = derive_stream(5, "latent-opt");
  RngStream r2 = derive_stream(5, "latent-opt");
  const LatentOptResult a = optimize_latent(model, x, config, r1);
  const LatentOptResult b = optimize_latent(model, x, config, r2);
  CHECK(a.z == b.z);
  CHECK(a.score == b.score);
  CHECK(a.trace == b.trace);

  // The first restart of a three-restart run replays the single-restart run,
  // so the best score cannot get worse.
  AnomalyConfig more = config;
  more.restarts = 3;
  RngStream r3 = derive_stream(5, "latent-opt");
  const LatentOptResult c = optimize_latent(model, x, more, r3);
  CHECK(c.score <= a.score);
  CHECK(c.trace.size() == 3 * 51);
}

TEST_CASE("shift-rule latent search matches the default on a smooth target") {
  const gan::GanModel model = small_quantum_model(2, 2, false, 73);
  const std::vector<double> x = gan::generator_forward(model, std::vector<double>{0.5, 0.1});

  AnomalyConfig fd;
  fd.latent_iters = 150;
  fd.adam.learning_rate = 0.05;
  AnomalyConfig shift = fd;
  shift.gradient_mode = gan::GradientMode::ParamShift;

  RngStream r1 = derive_stream(9, "latent-opt");
  RngStream r2 = derive_stream(9, "latent-opt");
  const LatentOptResult a = optimize_latent(model, x, fd, r1);
  const LatentOptResult b = optimize_latent(model, x, shift, r2);
  CHECK(a.residual < 5e-2);
  CHECK(b.residual < 5e-2);
}

TEST_CASE("optimize_latent validates its inputs") {
  const gan::GanModel model = small_quantum_model(2, 2, false, 79);
  RngStream rng = derive_stream(1, "latent-opt");
  AnomalyConfig config;
  CHECK_THROWS_AS(optimize_latent(model, std::vector<double>{0.1}, config, rng),
                  std::invalid_argument);
  AnomalyConfig bad_alpha = config;
  bad_alpha.alpha = 0.0;
  CHECK_THROWS_AS(optimize_latent(model, std::vector<double>{0.1, 0.2}, bad_alpha, rng),
                  std::invalid_argument);
  AnomalyConfig bad_restarts = config;
  bad_restarts.restarts = 0;
  CHECK_THROWS_AS(optimize_latent(model, std::vector<double>{0.1, 0.2}, bad_restarts, rng),
                  std::invalid_argument);
}

TEST_CASE("threshold calibration maximizes F1 over score midpoints") {
  SUBCASE("separable scores split at the gap") {
    const std::vector<std::pair<double, bool>> scored{
        {0.1, false}, {0.2, false}, {0.3, false}, {0.8, true}, {0.9, true}};
    const CalibrationResult result = calibrate_threshold(scored);
    CHECK(result.threshold == doctest::Approx(0.55).epsilon(1e-15));
    CHECK(result.f1 == 1.0);
  }

  SUBCASE("inseparable scores fall back to calling everything anomalous") {
    // The anomaly scores lowest, so no cut beats predicting all positive.
    const std::vector<std::pair<double, bool>> scored{
        {1.0, true}, {2.0, false}, {3.0, false}, {4.0, false}};
    const CalibrationResult result = calibrate_threshold(scored);
    CHECK(result.threshold == 1.0);
    CHECK(result.f1 == 0.4);  // 2tp / (2tp + fp + fn) = 2 / 5
  }

  SUBCASE("ties resolve to the lowest threshold") {
    const std::vector<std::pair<double, bool>> scored{{1.0, true}, {2.0, true}};
    const CalibrationResult result = calibrate_threshold(scored);
    CHECK(result.threshold == 1.0);
    CHECK(result.f1 == 1.0);
  }

  SUBCASE("degenerate inputs") {
    CHECK_THROWS_AS(calibrate_threshold({}), std::invalid_argument);
    const CalibrationResult all_normal =
        calibrate_threshold({{0.4, false}, {0.6, false}});
    CHECK(all_normal.f1 == 0.0);
  }
}
