#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qanogan/anogan/anogan.hpp"
#include "qanogan/gan/config.hpp"

namespace qanogan::cli {

struct DataConfig {
  std::string source = "synth";      // "synth" or "csv"
  std::string csv_path;
  std::vector<int> feature_indices;  // csv only; empty keeps every column
  int synth_normal = 2000;
  int synth_anomalous = 200;
  double train_fraction = 0.7;        // of the non-anomalous rows
  double calibration_fraction = 0.5;  // of the anomalous rows
  double test_fraud_fraction = 0.25;  // anomaly share of the test split
};

// Everything one run needs. The top-level seed drives the data split, the
// model initialization, training, and scoring; the per-section seeds inside
// gan::TrainConfig are overwritten with it when a command executes.
struct RunConfig {
  std::uint64_t seed = 1;
  std::string out_dir;
  DataConfig data;
  gan::GeneratorConfig generator;
  std::vector<int> critic_widths;  // empty: data_dim, 16, 8, 1
  gan::TrainConfig train;
  ano::AnomalyConfig anomaly;
};

// Strict JSON parse. Unknown keys, wrong types, and out-of-range values are
// all collected and reported together, each with its dotted path.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

// Inverse of parse_run_config: emits every field explicitly.
std::string format_run_config(const RunConfig& config);
void save_run_config(const RunConfig& config, const std::string& path);

// Enum spellings shared by the config file and command-line flags.
gan::GeneratorVariant parse_variant(const std::string& text);
gan::InitStrategy parse_init(const std::string& text);
gan::GradientMode parse_gradient_mode(const std::string& text);
qsim::CircuitKind parse_circuit(int number);
std::string to_string(gan::GeneratorVariant variant);
std::string to_string(gan::InitStrategy init);
std::string to_string(gan::GradientMode mode);
int circuit_number(qsim::CircuitKind kind);

}  // namespace qanogan::cli
