#include "qanogan/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qanogan/rng.hpp"

namespace qanogan::data {

namespace {

std::string trim_cell(const std::string& raw) {
  std::size_t b = raw.find_first_not_of(" \t\r");
  std::size_t e = raw.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::string s = raw.substr(b, e - b + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim_cell(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

[[noreturn]] void cell_error(const std::string& path, long line_no, const std::string& column,
                             const std::string& what) {
  std::ostringstream msg;
  msg << path << ": line " << line_no << ", column " << column << ": " << what;
  throw std::runtime_error(msg.str());
}

double parse_number(const std::string& cell, const std::string& path, long line_no,
                    const std::string& column) {
  if (cell.empty()) cell_error(path, line_no, column, "empty cell");
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + cell.size()) cell_error(path, line_no, column, "not a number: '" + cell + "'");
  return v;
}

}  // namespace

long Dataset::anomaly_count() const {
  long n = 0;
  for (const DataRow& row : rows) n += row.label;
  return n;
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_csv: " + path + " is empty");
  const std::vector<std::string> header = split_line(line);
  if (header.size() < 2) {
    throw std::runtime_error("load_csv: " + path + ": header needs at least one feature and Class");
  }
  if (header.back() != "Class") {
    throw std::runtime_error("load_csv: " + path + ": last column must be Class, got '" +
                             header.back() + "'");
  }

  // Header shape: [Time] V1..Vk [Amount] Class.
  std::size_t idx = 0;
  bool has_time = false;
  if (header[idx] == "Time") {
    has_time = true;
    ++idx;
  }
  std::vector<std::string> feature_names;
  int next_v = 1;
  while (idx + 1 < header.size() && header[idx] == "V" + std::to_string(next_v)) {
    feature_names.push_back(header[idx]);
    ++idx;
    ++next_v;
  }
  if (idx + 1 < header.size() && header[idx] == "Amount") {
    feature_names.push_back(header[idx]);
    ++idx;
  }
  if (idx + 1 != header.size()) {
    throw std::runtime_error("load_csv: " + path + ": unexpected header column '" + header[idx] +
                             "'");
  }
  if (feature_names.empty()) {
    throw std::runtime_error("load_csv: " + path + ": no feature columns");
  }

  Dataset dataset;
  dataset.feature_names = feature_names;

  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size()) {
      std::ostringstream msg;
      msg << "load_csv: " << path << ": line " << line_no << ": expected " << header.size()
          << " cells, got " << cells.size();
      throw std::runtime_error(msg.str());
    }
    DataRow row;
    row.features.reserve(feature_names.size());
    std::size_t cell_idx = 0;
    if (has_time) {
      parse_number(cells[cell_idx], path, line_no, "Time");  // validated, then dropped
      ++cell_idx;
    }
    for (const std::string& name : feature_names) {
      row.features.push_back(parse_number(cells[cell_idx], path, line_no, name));
      ++cell_idx;
    }
    const std::string& cls = cells[cell_idx];
    if (cls == "0") {
      row.label = false;
    } else if (cls == "1") {
      row.label = true;
    } else {
      cell_error(path, line_no, "Class", "label must be 0 or 1, got '" + cls + "'");
    }
    dataset.rows.push_back(std::move(row));
  }
  return dataset;
}

void write_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  for (const std::string& name : dataset.feature_names) out << name << ',';
  out << "Class\n";
  char buf[40];
  for (const DataRow& row : dataset.rows) {
    if (row.features.size() != dataset.feature_names.size()) {
      throw std::invalid_argument("write_csv: row width does not match the feature names");
    }
    for (double v : row.features) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << buf << ',';
    }
    out << (row.label ? '1' : '0') << '\n';
  }
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

FeatureBounds compute_bounds(const Dataset& dataset) {
  if (dataset.rows.empty()) throw std::invalid_argument("compute_bounds: empty dataset");
  const std::size_t n = dataset.feature_names.size();
  FeatureBounds bounds;
  bounds.lo.assign(n, std::numeric_limits<double>::infinity());
  bounds.hi.assign(n, -std::numeric_limits<double>::infinity());
  for (const DataRow& row : dataset.rows) {
    for (std::size_t i = 0; i < n; ++i) {
      bounds.lo[i] = std::min(bounds.lo[i], row.features[i]);
      bounds.hi[i] = std::max(bounds.hi[i], row.features[i]);
    }
  }
  return bounds;
}

Dataset apply_bounds(const Dataset& dataset, const FeatureBounds& bounds) {
  if (bounds.lo.size() != dataset.feature_names.size() || bounds.hi.size() != bounds.lo.size()) {
    throw std::invalid_argument("apply_bounds: bounds do not match the feature count");
  }
  Dataset out;
  out.feature_names = dataset.feature_names;
  out.rows.reserve(dataset.rows.size());
  for (const DataRow& row : dataset.rows) {
    DataRow scaled;
    scaled.label = row.label;
    scaled.features.resize(row.features.size());
    for (std::size_t i = 0; i < row.features.size(); ++i) {
      const double span = bounds.hi[i] - bounds.lo[i];
      scaled.features[i] = span > 0.0 ? (row.features[i] - bounds.lo[i]) / span : 0.0;
    }
    out.rows.push_back(std::move(scaled));
  }
  return out;
}

std::pair<Dataset, FeatureBounds> normalize(const Dataset& dataset) {
  FeatureBounds bounds = compute_bounds(dataset);
  return {apply_bounds(dataset, bounds), std::move(bounds)};
}

Splits make_splits(const Dataset& dataset, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw std::invalid_argument("make_splits: train_fraction must lie in (0, 1)");
  }
  if (!(spec.calibration_fraction >= 0.0 && spec.calibration_fraction <= 1.0)) {
    throw std::invalid_argument("make_splits: calibration_fraction must lie in [0, 1]");
  }
  if (!(spec.test_fraud_fraction > 0.0 && spec.test_fraud_fraction < 1.0)) {
    throw std::invalid_argument("make_splits: test_fraud_fraction must lie in (0, 1)");
  }

  std::vector<std::size_t> normal, anomalous;
  for (std::size_t i = 0; i < dataset.rows.size(); ++i) {
    (dataset.rows[i].label ? anomalous : normal).push_back(i);
  }
  if (normal.empty() || anomalous.empty()) {
    throw std::invalid_argument("make_splits: need both normal and anomalous rows");
  }

  RngStream rng = derive_stream(spec.seed, "split");
  shuffle(normal, rng);
  shuffle(anomalous, rng);

  const std::size_t n_train =
      static_cast<std::size_t>(std::llround(spec.train_fraction * normal.size()));
  const std::size_t n_calib_fraud =
      static_cast<std::size_t>(std::llround(spec.calibration_fraction * anomalous.size()));
  const std::size_t n_test_fraud = anomalous.size() - n_calib_fraud;
  const double p = spec.test_fraud_fraction;
  const std::size_t n_test_normal =
      static_cast<std::size_t>(std::llround(n_test_fraud * (1.0 - p) / p));

  if (n_train == 0) throw std::invalid_argument("make_splits: empty training split");
  if (n_train + n_calib_fraud + n_test_normal > normal.size()) {
    throw std::invalid_argument("make_splits: not enough normal rows for the requested splits");
  }

  Splits splits;
  splits.train.feature_names = dataset.feature_names;
  splits.calibration.feature_names = dataset.feature_names;
  splits.test.feature_names = dataset.feature_names;

  std::size_t pos = 0;
  for (std::size_t i = 0; i < n_train; ++i) splits.train.rows.push_back(dataset.rows[normal[pos++]]);
  for (std::size_t i = 0; i < n_calib_fraud; ++i) {
    splits.calibration.rows.push_back(dataset.rows[normal[pos++]]);
  }
  for (std::size_t i = 0; i < n_test_normal; ++i) splits.test.rows.push_back(dataset.rows[normal[pos++]]);

  for (std::size_t i = 0; i < n_calib_fraud; ++i) {
    splits.calibration.rows.push_back(dataset.rows[anomalous[i]]);
  }
  for (std::size_t i = n_calib_fraud; i < anomalous.size(); ++i) {
    splits.test.rows.push_back(dataset.rows[anomalous[i]]);
  }
  return splits;
}

Dataset select_features(const Dataset& dataset, const std::vector<int>& indices) {
  if (indices.empty()) throw std::invalid_argument("select_features: no indices given");
  std::set<int> seen;
  for (int idx : indices) {
    if (idx < 0 || idx >= dataset.feature_count()) {
      throw std::invalid_argument("select_features: index " + std::to_string(idx) +
                                  " out of range");
    }
    if (!seen.insert(idx).second) {
      throw std::invalid_argument("select_features: duplicate index " + std::to_string(idx));
    }
  }
  Dataset out;
  for (int idx : indices) out.feature_names.push_back(dataset.feature_names[idx]);
  out.rows.reserve(dataset.rows.size());
  for (const DataRow& row : dataset.rows) {
    DataRow slim;
    slim.label = row.label;
    for (int idx : indices) slim.features.push_back(row.features[idx]);
    out.rows.push_back(std::move(slim));
  }
  return out;
}

Dataset synth_dataset(int n_normal, int n_anomalous, int dim, std::uint64_t seed) {
  if (n_normal < 1 || n_anomalous < 0 || dim < 1) {
    throw std::invalid_argument("synth_dataset: bad shape");
  }
  RngStream rng = derive_stream(seed, "synth");

  Dataset dataset;
  for (int i = 1; i <= dim; ++i) dataset.feature_names.push_back("V" + std::to_string(i));

  // Normal rows: an AR(1) latent chain, rescaled to unit variance per
  // coordinate and squashed through a gentle sigmoid. The high chain
  // coefficient and mild squash concentrate normals near a short low
  // dimensional ridge in the middle of the cube, with every marginal still
  // symmetric around 0.5; uniform anomalies sit well off that ridge.
  const double a = 0.95, b = 0.18, squash = 0.6;
  std::vector<double> variance(dim);
  variance[0] = 1.0;
  for (int i = 1; i < dim; ++i) variance[i] = a * a * variance[i - 1] + b * b;

  for (int r = 0; r < n_normal; ++r) {
    DataRow row;
    row.label = false;
    row.features.resize(dim);
    double t = rng.normal();
    row.features[0] = 1.0 / (1.0 + std::exp(-squash * t));
    for (int i = 1; i < dim; ++i) {
      t = a * t + b * rng.normal();
      row.features[i] = 1.0 / (1.0 + std::exp(-squash * t / std::sqrt(variance[i])));
    }
    dataset.rows.push_back(std::move(row));
  }

  for (int r = 0; r < n_anomalous; ++r) {
    DataRow row;
    row.label = true;
    row.features.resize(dim);
    for (int i = 0; i < dim; ++i) row.features[i] = rng.uniform();
    dataset.rows.push_back(std::move(row));
  }
  return dataset;
}

}  // namespace qanogan::data
