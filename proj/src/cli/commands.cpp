#include "qanogan/cli/commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qanogan/anogan/anogan.hpp"
#include "qanogan/data/dataset.hpp"
#include "qanogan/eval/metrics.hpp"
#include "qanogan/gan/checkpoint.hpp"
#include "qanogan/gan/train.hpp"
#include "qanogan/rng.hpp"

namespace fs = std::filesystem;

namespace qanogan::cli {

namespace {

// Full round-trip precision; infinities print as "inf"/"-inf", which the
// reader below accepts.
std::string g17(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

// Sub-seed for a command so training, calibration, and evaluation never
// share random streams even though they hang off the same run seed.
std::uint64_t command_seed(std::uint64_t run_seed, std::string_view purpose) {
  return detail::splitmix64(run_seed ^ detail::fnv1a(purpose));
}

struct PreparedData {
  data::Splits splits;  // already scaled by the training-split bounds
  data::FeatureBounds bounds;
  std::vector<std::string> feature_names;
};

// Rebuilds the exact data pipeline of a run from its config: load or
// synthesize, select features, split by the run seed, scale by the training
// bounds. Deterministic, so every command sees identical splits.
PreparedData prepare_data(const RunConfig& config) {
  data::Dataset raw;
  if (config.data.source == "synth") {
    raw = data::synth_dataset(config.data.synth_normal, config.data.synth_anomalous,
                              config.generator.data_dim, config.seed);
  } else {
    if (config.data.csv_path.empty()) {
      throw std::invalid_argument("data.source is \"csv\" but data.csv_path is empty");
    }
    raw = data::load_csv(config.data.csv_path);
    if (!config.data.feature_indices.empty()) {
      raw = data::select_features(raw, config.data.feature_indices);
    }
  }
  if (raw.feature_count() != config.generator.data_dim) {
    throw std::invalid_argument("data has " + std::to_string(raw.feature_count()) +
                                " features but generator.data_dim is " +
                                std::to_string(config.generator.data_dim));
  }

  data::SplitSpec spec;
  spec.train_fraction = config.data.train_fraction;
  spec.calibration_fraction = config.data.calibration_fraction;
  spec.test_fraud_fraction = config.data.test_fraud_fraction;
  spec.seed = config.seed;

  PreparedData prepared;
  prepared.splits = data::make_splits(raw, spec);
  prepared.bounds = data::compute_bounds(prepared.splits.train);
  prepared.splits.train = data::apply_bounds(prepared.splits.train, prepared.bounds);
  prepared.splits.calibration = data::apply_bounds(prepared.splits.calibration, prepared.bounds);
  prepared.splits.test = data::apply_bounds(prepared.splits.test, prepared.bounds);
  prepared.feature_names = raw.feature_names;
  return prepared;
}

void write_transform(const PreparedData& prepared, const std::vector<int>& feature_indices,
                     const std::string& path) {
  nlohmann::json j;
  j["feature_names"] = prepared.feature_names;
  j["feature_indices"] = feature_indices;
  j["lo"] = prepared.bounds.lo;
  j["hi"] = prepared.bounds.hi;
  open_out(path) << j.dump(2) << "\n";
}

data::FeatureBounds read_transform_bounds(const std::string& path) {
  nlohmann::json j;
  open_in(path) >> j;
  data::FeatureBounds bounds;
  bounds.lo = j.at("lo").get<std::vector<double>>();
  bounds.hi = j.at("hi").get<std::vector<double>>();
  return bounds;
}

void write_loss_history(const gan::LossHistory& history, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "iteration,critic_loss,generator_loss,wall_time_s\n";
  for (std::size_t i = 0; i < history.iteration.size(); ++i) {
    out << history.iteration[i] << "," << g17(history.critic_loss[i]) << ","
        << g17(history.generator_loss[i]) << "," << g17(history.wall_time_s[i]) << "\n";
  }
}

void write_threshold(double threshold, double calibration_f1, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "threshold=" << g17(threshold) << "\n";
  out << "calibration_f1=" << g17(calibration_f1) << "\n";
}

double read_threshold(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  while (std::getline(in, line)) {
    const std::string key = "threshold=";
    if (line.rfind(key, 0) != 0) continue;
    const std::string value = line.substr(key.size());
    char* end = nullptr;
    const double threshold = std::strtod(value.c_str(), &end);
    if (end == value.c_str()) {
      throw std::runtime_error(path + ": unparseable threshold \"" + value + "\"");
    }
    return threshold;
  }
  throw std::runtime_error(path + ": no threshold= line");
}

void write_scores(const eval::RunEvaluation& run, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "index,residual,discrimination,score,predicted,label\n";
  for (const eval::ScoredRow& row : run.rows) {
    out << row.index << "," << g17(row.residual) << "," << g17(row.discrimination) << ","
        << g17(row.score) << "," << (row.predicted ? 1 : 0) << "," << (row.label ? 1 : 0)
        << "\n";
  }
}

void write_metrics(const eval::RunEvaluation& run, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "tp,fp,fn,tn,precision,recall,f1\n";
  out << run.counts.tp << "," << run.counts.fp << "," << run.counts.fn << "," << run.counts.tn
      << "," << g17(run.metrics.precision) << "," << g17(run.metrics.recall) << ","
      << g17(run.metrics.f1) << "\n";
}

gan::GanModel load_run_model(const std::string& run_dir) {
  return gan::load_model_file(run_dir + "/model.bin");
}

RunConfig load_run_dir_config(const std::string& run_dir) {
  return load_run_config(run_dir + "/config.json");
}

}  // namespace

std::vector<std::string> run_directories(const std::string& out_dir, int repeat) {
  if (out_dir.empty()) throw std::invalid_argument("no output directory set");
  if (repeat < 1) throw std::invalid_argument("repeat must be at least 1");
  if (repeat == 1) return {out_dir};
  std::vector<std::string> dirs;
  for (int i = 1; i <= repeat; ++i) {
    char name[16];
    std::snprintf(name, sizeof(name), "run_%02d", i);
    dirs.push_back(out_dir + "/" + name);
  }
  return dirs;
}

void cmd_train(const RunConfig& base, int repeat, std::ostream& log) {
  const std::vector<std::string> dirs = run_directories(base.out_dir, repeat);
  for (int i = 0; i < repeat; ++i) {
    RunConfig config = base;
    config.seed = base.seed + static_cast<std::uint64_t>(i);
    config.out_dir = dirs[i];
    fs::create_directories(config.out_dir);
    save_run_config(config, config.out_dir + "/config.json");

    PreparedData prepared = prepare_data(config);
    write_transform(prepared, config.data.feature_indices, config.out_dir + "/transform.json");

    std::vector<int> widths = config.critic_widths;
    if (widths.empty()) widths = gan::default_critic_widths(config.generator);
    nn::AdamConfig adam{config.train.learning_rate, config.train.beta1, config.train.beta2,
                        config.train.epsilon};
    gan::GanModel model = gan::build_model(config.generator, widths, adam, config.seed);

    gan::TrainConfig train_config = config.train;
    train_config.seed = config.seed;

    const int total = train_config.generator_iters;
    gan::TrainCallbacks callbacks;
    callbacks.on_iteration = [&](int iteration, double critic_loss, double generator_loss) {
      if (iteration == 1 || iteration == total || iteration % 50 == 0) {
        log << config.out_dir << ": iter " << iteration << "/" << total
            << " critic=" << critic_loss << " generator=" << generator_loss << "\n";
      }
    };

    const gan::LossHistory history =
        gan::train(model, prepared.splits.train, train_config, callbacks);
    gan::save_model_file(model, config.out_dir + "/model.bin");
    write_loss_history(history, config.out_dir + "/loss_history.csv");
    log << config.out_dir << ": trained " << total << " generator iterations (seed "
        << config.seed << ")\n";
  }
}

void cmd_calibrate(const std::string& out_dir, int repeat, std::ostream& log) {
  for (const std::string& dir : run_directories(out_dir, repeat)) {
    const RunConfig config = load_run_dir_config(dir);
    const gan::GanModel model = load_run_model(dir);
    const PreparedData prepared = prepare_data(config);

    const data::Dataset& calibration = prepared.splits.calibration;
    const long anomalies = calibration.anomaly_count();
    if (anomalies == 0 || anomalies == calibration.size()) {
      throw std::invalid_argument(dir + ": calibration split needs both classes");
    }

    const eval::RunEvaluation scored =
        eval::evaluate_run(model, calibration, std::numeric_limits<double>::infinity(),
                           config.anomaly, command_seed(config.seed, "calibrate"));
    std::vector<std::pair<double, bool>> pairs;
    pairs.reserve(scored.rows.size());
    for (const eval::ScoredRow& row : scored.rows) {
      pairs.emplace_back(row.score, row.label);
    }
    const ano::CalibrationResult result = ano::calibrate_threshold(pairs);
    write_threshold(result.threshold, result.f1, dir + "/threshold.txt");
    log << dir << ": threshold " << g17(result.threshold) << " (calibration F1 " << result.f1
        << ")\n";
  }
}

void cmd_evaluate(const std::string& out_dir, int repeat, std::ostream& log) {
  const std::vector<std::string> dirs = run_directories(out_dir, repeat);
  std::vector<double> f1s;
  std::uint64_t first_seed = 0;

  for (const std::string& dir : dirs) {
    const RunConfig config = load_run_dir_config(dir);
    if (f1s.empty()) first_seed = config.seed;
    const gan::GanModel model = load_run_model(dir);
    const PreparedData prepared = prepare_data(config);
    const double threshold = read_threshold(dir + "/threshold.txt");

    const eval::RunEvaluation run =
        eval::evaluate_run(model, prepared.splits.test, threshold, config.anomaly,
                           command_seed(config.seed, "evaluate"));
    write_scores(run, dir + "/scores.csv");
    write_metrics(run, dir + "/metrics.csv");
    f1s.push_back(run.metrics.f1);
    log << dir << ": precision " << run.metrics.precision << " recall " << run.metrics.recall
        << " F1 " << run.metrics.f1 << "\n";
  }

  if (dirs.size() > 1) {
    std::ofstream summary = open_out(out_dir + "/summary.csv");
    summary << "run,f1\n";
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      summary << fs::path(dirs[i]).filename().string() << "," << g17(f1s[i]) << "\n";
    }

    const eval::BootstrapCi ci = eval::bootstrap_ci(f1s, 2000, 0.95, first_seed);
    std::ofstream out = open_out(out_dir + "/ci.txt");
    out << "runs=" << dirs.size() << "\n";
    out << "f1_mean=" << g17(ci.mean) << "\n";
    out << "f1_low=" << g17(ci.low) << "\n";
    out << "f1_high=" << g17(ci.high) << "\n";
    out << "level=0.95\n";
    log << out_dir << ": mean F1 " << ci.mean << " [" << ci.low << ", " << ci.high << "] over "
        << dirs.size() << " runs\n";
  }
}

void cmd_score(const std::string& run_dir, const std::vector<double>& row, std::ostream& log) {
  const RunConfig config = load_run_dir_config(run_dir);
  const gan::GanModel model = load_run_model(run_dir);
  if (static_cast<int>(row.size()) != config.generator.data_dim) {
    throw std::invalid_argument("row has " + std::to_string(row.size()) +
                                " values but the model expects " +
                                std::to_string(config.generator.data_dim));
  }
  const double threshold = read_threshold(run_dir + "/threshold.txt");
  const data::FeatureBounds bounds = read_transform_bounds(run_dir + "/transform.json");

  data::Dataset one;
  one.feature_names.resize(row.size(), "");
  one.rows.push_back({row, false});
  const std::vector<double> scaled = data::apply_bounds(one, bounds).rows[0].features;

  RngStream rng = derive_stream(command_seed(config.seed, "score"), "latent-opt");
  const ano::LatentOptResult result = ano::optimize_latent(model, scaled, config.anomaly, rng);
  const bool anomalous = ano::classify(result.score, threshold);

  log << "residual=" << g17(result.residual) << "\n";
  log << "discrimination=" << g17(result.discrimination) << "\n";
  log << "score=" << g17(result.score) << "\n";
  log << "threshold=" << g17(threshold) << "\n";
  log << "verdict=" << (anomalous ? "anomalous" : "normal") << "\n";
}

void cmd_synth(int n_normal, int n_anomalous, int dim, std::uint64_t seed,
               const std::string& csv_path, std::ostream& log) {
  if (csv_path.empty()) throw std::invalid_argument("no output file set");
  const data::Dataset dataset = data::synth_dataset(n_normal, n_anomalous, dim, seed);
  if (const fs::path parent = fs::path(csv_path).parent_path(); !parent.empty()) {
    fs::create_directories(parent);
  }
  data::write_csv(dataset, csv_path);
  log << csv_path << ": " << dataset.size() << " rows (" << dataset.anomaly_count()
      << " anomalous), " << dim << " features\n";
}

}  // namespace qanogan::cli
