#include "qanogan/cli/run_config.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qanogan::cli {

namespace {

using nlohmann::json;

// Parse problems are collected rather than thrown one at a time so a bad
// config reports every offending key at once.
struct Problems {
  std::vector<std::string> messages;

  void add(const std::string& path, const std::string& what) {
    messages.push_back(path + ": " + what);
  }

  void raise_if_any() const {
    if (messages.empty()) return;
    std::string joined = "invalid run config:";
    for (const std::string& m : messages) {
      joined += "\n  " + m;
    }
    throw std::invalid_argument(joined);
  }
};

class Section {
 public:
  Section(const json* node, std::string path, Problems& problems)
      : node_(node), path_(std::move(path)), problems_(problems) {
    if (node_ != nullptr && !node_->is_object()) {
      problems_.add(path_, "expected an object");
      node_ = nullptr;
    }
  }

  // Reads one key if present, routing type errors to the problem list.
  void key(const char* name, const std::function<void(const json&)>& read) {
    known_.push_back(name);
    if (node_ == nullptr) return;
    const auto it = node_->find(name);
    if (it == node_->end()) return;
    try {
      read(*it);
    } catch (const std::exception& e) {
      problems_.add(path_ + "." + name, e.what());
    }
  }

  Section child(const char* name) {
    known_.push_back(name);
    const json* sub = nullptr;
    if (node_ != nullptr) {
      const auto it = node_->find(name);
      if (it != node_->end()) sub = &*it;
    }
    return Section(sub, path_ + "." + name, problems_);
  }

  // Call after every key() so leftovers surface as unknown keys.
  void finish() {
    if (node_ == nullptr) return;
    for (const auto& item : node_->items()) {
      bool matched = false;
      for (const char* k : known_) {
        if (item.key() == k) {
          matched = true;
          break;
        }
      }
      if (!matched) problems_.add(path_ + "." + item.key(), "unknown key");
    }
  }

 private:
  const json* node_;
  std::string path_;
  Problems& problems_;
  std::vector<const char*> known_;
};

std::optional<int> read_shots(const json& j) {
  if (j.is_null()) return std::nullopt;
  const int shots = j.get<int>();
  if (shots < 1) throw std::invalid_argument("shots must be positive or null");
  return shots;
}

std::vector<int> read_int_list(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of integers");
  std::vector<int> values;
  for (const json& item : j) {
    values.push_back(item.get<int>());
  }
  return values;
}

}  // namespace

gan::GeneratorVariant parse_variant(const std::string& text) {
  if (text == "quantum") return gan::GeneratorVariant::Quantum;
  if (text == "classical") return gan::GeneratorVariant::Classical;
  throw std::invalid_argument("variant must be \"quantum\" or \"classical\", got \"" + text +
                              "\"");
}

gan::InitStrategy parse_init(const std::string& text) {
  if (text == "random") return gan::InitStrategy::Random;
  if (text == "identity-block") return gan::InitStrategy::IdentityBlock;
  throw std::invalid_argument("init must be \"random\" or \"identity-block\", got \"" + text +
                              "\"");
}

gan::GradientMode parse_gradient_mode(const std::string& text) {
  if (text == "forward-diff") return gan::GradientMode::ForwardDiff;
  if (text == "param-shift") return gan::GradientMode::ParamShift;
  throw std::invalid_argument("gradient mode must be \"forward-diff\" or \"param-shift\", got \"" +
                              text + "\"");
}

qsim::CircuitKind parse_circuit(int number) {
  switch (number) {
    case 1: return qsim::CircuitKind::C1;
    case 2: return qsim::CircuitKind::C2;
    case 3: return qsim::CircuitKind::C3;
    case 4: return qsim::CircuitKind::C4;
  }
  throw std::invalid_argument("circuit must be 1, 2, 3, or 4, got " + std::to_string(number));
}

std::string to_string(gan::GeneratorVariant variant) {
  return variant == gan::GeneratorVariant::Quantum ? "quantum" : "classical";
}

std::string to_string(gan::InitStrategy init) {
  return init == gan::InitStrategy::Random ? "random" : "identity-block";
}

std::string to_string(gan::GradientMode mode) {
  return mode == gan::GradientMode::ForwardDiff ? "forward-diff" : "param-shift";
}

int circuit_number(qsim::CircuitKind kind) {
  switch (kind) {
    case qsim::CircuitKind::C1: return 1;
    case qsim::CircuitKind::C2: return 2;
    case qsim::CircuitKind::C3: return 3;
    case qsim::CircuitKind::C4: return 4;
  }
  throw std::logic_error("circuit_number: bad kind");
}

RunConfig parse_run_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid run config: ") + e.what());
  }

  RunConfig config;
  Problems problems;
  Section top(&root, "config", problems);

  top.key("seed", [&](const json& j) { config.seed = j.get<std::uint64_t>(); });
  top.key("out_dir", [&](const json& j) { config.out_dir = j.get<std::string>(); });

  Section data = top.child("data");
  data.key("source", [&](const json& j) {
    const std::string source = j.get<std::string>();
    if (source != "synth" && source != "csv") {
      throw std::invalid_argument("source must be \"synth\" or \"csv\", got \"" + source + "\"");
    }
    config.data.source = source;
  });
  data.key("csv_path", [&](const json& j) { config.data.csv_path = j.get<std::string>(); });
  data.key("feature_indices",
           [&](const json& j) { config.data.feature_indices = read_int_list(j); });
  data.key("synth_normal", [&](const json& j) { config.data.synth_normal = j.get<int>(); });
  data.key("synth_anomalous",
           [&](const json& j) { config.data.synth_anomalous = j.get<int>(); });
  data.key("train_fraction",
           [&](const json& j) { config.data.train_fraction = j.get<double>(); });
  data.key("calibration_fraction",
           [&](const json& j) { config.data.calibration_fraction = j.get<double>(); });
  data.key("test_fraud_fraction",
           [&](const json& j) { config.data.test_fraud_fraction = j.get<double>(); });
  data.finish();

  Section generator = top.child("generator");
  generator.key("variant",
                [&](const json& j) { config.generator.variant = parse_variant(j.get<std::string>()); });
  generator.key("latent_dim", [&](const json& j) { config.generator.latent_dim = j.get<int>(); });
  generator.key("data_dim", [&](const json& j) { config.generator.data_dim = j.get<int>(); });
  generator.key("use_upscaling",
                [&](const json& j) { config.generator.use_upscaling = j.get<bool>(); });
  generator.key("circuit",
                [&](const json& j) { config.generator.circuit = parse_circuit(j.get<int>()); });
  generator.key("depth", [&](const json& j) { config.generator.depth = j.get<int>(); });
  generator.key("init",
                [&](const json& j) { config.generator.init = parse_init(j.get<std::string>()); });
  generator.key("body_layers",
                [&](const json& j) { config.generator.body_layers = j.get<int>(); });
  generator.finish();

  Section critic = top.child("critic");
  critic.key("widths", [&](const json& j) { config.critic_widths = read_int_list(j); });
  critic.finish();

  Section train = top.child("train");
  train.key("learning_rate",
            [&](const json& j) { config.train.learning_rate = j.get<double>(); });
  train.key("beta1", [&](const json& j) { config.train.beta1 = j.get<double>(); });
  train.key("beta2", [&](const json& j) { config.train.beta2 = j.get<double>(); });
  train.key("epsilon", [&](const json& j) { config.train.epsilon = j.get<double>(); });
  train.key("penalty_weight",
            [&](const json& j) { config.train.penalty_weight = j.get<double>(); });
  train.key("batch_size", [&](const json& j) { config.train.batch_size = j.get<int>(); });
  train.key("n_critic", [&](const json& j) { config.train.n_critic = j.get<int>(); });
  train.key("generator_iters",
            [&](const json& j) { config.train.generator_iters = j.get<int>(); });
  train.key("gradient_mode", [&](const json& j) {
    config.train.gradient_mode = parse_gradient_mode(j.get<std::string>());
  });
  train.key("shots", [&](const json& j) { config.train.shots = read_shots(j); });
  train.key("fd_step", [&](const json& j) { config.train.fd_step = j.get<double>(); });
  train.finish();

  Section anomaly = top.child("anomaly");
  anomaly.key("alpha", [&](const json& j) { config.anomaly.alpha = j.get<double>(); });
  anomaly.key("latent_iters",
              [&](const json& j) { config.anomaly.latent_iters = j.get<int>(); });
  anomaly.key("restarts", [&](const json& j) { config.anomaly.restarts = j.get<int>(); });
  anomaly.key("learning_rate",
              [&](const json& j) { config.anomaly.adam.learning_rate = j.get<double>(); });
  anomaly.key("beta1", [&](const json& j) { config.anomaly.adam.beta1 = j.get<double>(); });
  anomaly.key("beta2", [&](const json& j) { config.anomaly.adam.beta2 = j.get<double>(); });
  anomaly.key("epsilon", [&](const json& j) { config.anomaly.adam.epsilon = j.get<double>(); });
  anomaly.key("gradient_mode", [&](const json& j) {
    config.anomaly.gradient_mode = parse_gradient_mode(j.get<std::string>());
  });
  anomaly.key("shots", [&](const json& j) { config.anomaly.shots = read_shots(j); });
  anomaly.key("fd_step", [&](const json& j) { config.anomaly.fd_step = j.get<double>(); });
  anomaly.finish();

  top.finish();
  problems.raise_if_any();
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

std::string format_run_config(const RunConfig& config) {
  json root;
  root["seed"] = config.seed;
  root["out_dir"] = config.out_dir;

  json& data = root["data"];
  data["source"] = config.data.source;
  data["csv_path"] = config.data.csv_path;
  data["feature_indices"] = config.data.feature_indices;
  data["synth_normal"] = config.data.synth_normal;
  data["synth_anomalous"] = config.data.synth_anomalous;
  data["train_fraction"] = config.data.train_fraction;
  data["calibration_fraction"] = config.data.calibration_fraction;
  data["test_fraud_fraction"] = config.data.test_fraud_fraction;

  json& generator = root["generator"];
  generator["variant"] = to_string(config.generator.variant);
  generator["latent_dim"] = config.generator.latent_dim;
  generator["data_dim"] = config.generator.data_dim;
  generator["use_upscaling"] = config.generator.use_upscaling;
  generator["circuit"] = circuit_number(config.generator.circuit);
  generator["depth"] = config.generator.depth;
  generator["init"] = to_string(config.generator.init);
  generator["body_layers"] = config.generator.body_layers;

  root["critic"]["widths"] = config.critic_widths;

  json& train = root["train"];
  train["learning_rate"] = config.train.learning_rate;
  train["beta1"] = config.train.beta1;
  train["beta2"] = config.train.beta2;
  train["epsilon"] = config.train.epsilon;
  train["penalty_weight"] = config.train.penalty_weight;
  train["batch_size"] = config.train.batch_size;
  train["n_critic"] = config.train.n_critic;
  train["generator_iters"] = config.train.generator_iters;
  train["gradient_mode"] = to_string(config.train.gradient_mode);
  train["shots"] = config.train.shots ? json(*config.train.shots) : json(nullptr);
  train["fd_step"] = config.train.fd_step;

  json& anomaly = root["anomaly"];
  anomaly["alpha"] = config.anomaly.alpha;
  anomaly["latent_iters"] = config.anomaly.latent_iters;
  anomaly["restarts"] = config.anomaly.restarts;
  anomaly["learning_rate"] = config.anomaly.adam.learning_rate;
  anomaly["beta1"] = config.anomaly.adam.beta1;
  anomaly["beta2"] = config.anomaly.adam.beta2;
  anomaly["epsilon"] = config.anomaly.adam.epsilon;
  anomaly["gradient_mode"] = to_string(config.anomaly.gradient_mode);
  anomaly["shots"] = config.anomaly.shots ? json(*config.anomaly.shots) : json(nullptr);
  anomaly["fd_step"] = config.anomaly.fd_step;

  return root.dump(2) + "\n";
}

void save_run_config(const RunConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  out << format_run_config(config);
}

}  // namespace qanogan::cli
