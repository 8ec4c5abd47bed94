#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qanogan/cli/commands.hpp"
#include "qanogan/cli/run_config.hpp"

namespace {

// --out beats the config file, which beats QANOGAN_OUTDIR.
std::string resolve_out_dir(const std::string& flag_value, const std::string& config_value) {
  if (!flag_value.empty()) return flag_value;
  if (!config_value.empty()) return config_value;
  if (const char* env = std::getenv("QANOGAN_OUTDIR")) return env;
  return {};
}

std::vector<double> parse_row(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string cell = text.substr(start, comma - start);
    char* end = nullptr;
    const double value = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0') {
      throw std::invalid_argument("--row: cannot parse \"" + cell + "\" as a number");
    }
    values.push_back(value);
    start = comma + 1;
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarially trained generator with latent-space anomaly scoring"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int repeat = 1;
  std::uint64_t seed = 0;
  std::string variant, init, mode;
  int circuit = 0, depth = 0, iters = -1, shots = 0;
  std::string csv_path;

  CLI::App* train = app.add_subcommand("train", "Train a generator and critic per config");
  train->add_option("--config", config_path, "Run config JSON file");
  train->add_option("--out", out_dir, "Output directory (default: config, then QANOGAN_OUTDIR)");
  train->add_option("--repeat", repeat, "Train k runs with seeds seed, seed+1, ...")
      ->check(CLI::PositiveNumber);
  CLI::Option* opt_seed = train->add_option("--seed", seed, "Run seed override");
  CLI::Option* opt_variant =
      train->add_option("--variant", variant, "Generator variant: quantum or classical");
  CLI::Option* opt_circuit =
      train->add_option("--circuit", circuit, "Ansatz family 1-4")->check(CLI::Range(1, 4));
  CLI::Option* opt_depth =
      train->add_option("--depth", depth, "Ansatz layers")->check(CLI::PositiveNumber);
  CLI::Option* opt_init =
      train->add_option("--init", init, "Parameter init: random or identity-block");
  CLI::Option* opt_iters =
      train->add_option("--iters", iters, "Generator iterations")->check(CLI::NonNegativeNumber);
  CLI::Option* opt_shots =
      train->add_option("--shots", shots, "Measurement shots per expectation (sampled mode)")
          ->check(CLI::PositiveNumber);
  CLI::Option* opt_mode =
      train->add_option("--mode", mode, "Gradient mode: forward-diff or param-shift");
  CLI::Option* opt_csv = train->add_option("--csv", csv_path, "Train on this transaction CSV");

  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Pick the F1-maximizing threshold on the calibration split");
  calibrate->add_option("--out", out_dir, "Run directory (default: QANOGAN_OUTDIR)");
  calibrate->add_option("--repeat", repeat, "Calibrate run_01..run_k under --out")
      ->check(CLI::PositiveNumber);

  CLI::App* evaluate = app.add_subcommand("evaluate", "Score the test split and report metrics");
  evaluate->add_option("--out", out_dir, "Run directory (default: QANOGAN_OUTDIR)");
  evaluate->add_option("--repeat", repeat, "Evaluate run_01..run_k and aggregate")
      ->check(CLI::PositiveNumber);

  std::string row_text;
  CLI::App* score = app.add_subcommand("score", "Score one row against a trained run");
  score->add_option("--out", out_dir, "Run directory (default: QANOGAN_OUTDIR)");
  score->add_option("--row", row_text, "Comma-separated feature values (original units)")
      ->required();

  int synth_normal = 2000, synth_anomalous = 200, synth_dim = 6;
  std::uint64_t synth_seed = 1;
  std::string synth_out;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic transaction CSV");
  synth->add_option("--out", synth_out, "Output CSV path")->required();
  synth->add_option("--normal", synth_normal, "Non-anomalous row count")
      ->check(CLI::PositiveNumber);
  synth->add_option("--anomalous", synth_anomalous, "Anomalous row count")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--dim", synth_dim, "Feature count")->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_seed, "Generation seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      qanogan::cli::RunConfig config;
      if (!config_path.empty()) config = qanogan::cli::load_run_config(config_path);
      if (*opt_seed) config.seed = seed;
      if (*opt_variant) config.generator.variant = qanogan::cli::parse_variant(variant);
      if (*opt_circuit) config.generator.circuit = qanogan::cli::parse_circuit(circuit);
      if (*opt_depth) config.generator.depth = depth;
      if (*opt_init) config.generator.init = qanogan::cli::parse_init(init);
      if (*opt_iters) config.train.generator_iters = iters;
      if (*opt_shots) config.train.shots = shots;
      if (*opt_mode) config.train.gradient_mode = qanogan::cli::parse_gradient_mode(mode);
      if (*opt_csv) {
        config.data.source = "csv";
        config.data.csv_path = csv_path;
      }
      config.out_dir = resolve_out_dir(out_dir, config.out_dir);
      qanogan::cli::cmd_train(config, repeat, std::cout);
    } else if (calibrate->parsed()) {
      qanogan::cli::cmd_calibrate(resolve_out_dir(out_dir, ""), repeat, std::cout);
    } else if (evaluate->parsed()) {
      qanogan::cli::cmd_evaluate(resolve_out_dir(out_dir, ""), repeat, std::cout);
    } else if (score->parsed()) {
      qanogan::cli::cmd_score(resolve_out_dir(out_dir, ""), parse_row(row_text), std::cout);
    } else if (synth->parsed()) {
      qanogan::cli::cmd_synth(synth_normal, synth_anomalous, synth_dim, synth_seed, synth_out,
                              std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
