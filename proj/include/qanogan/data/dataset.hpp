#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qanogan::data {

struct DataRow {
  std::vector<double> features;
  bool label = false;  // true marks an anomalous row
};

struct Dataset {
  std::vector<DataRow> rows;
  std::vector<std::string> feature_names;

  int feature_count() const { return static_cast<int>(feature_names.size()); }
  long size() const { return static_cast<long>(rows.size()); }
  long anomaly_count() const;
};

// Reads a transaction table. The header must list, in order: an optional
// Time column, V1..Vk, an optional Amount column, and a final Class column
// holding 0/1 labels. Time is dropped; everything else but Class becomes a
// feature. Malformed cells are reported with their line and column.
Dataset load_csv(const std::string& path);

// Writes feature columns plus Class. Values are printed with enough digits
// to round-trip exactly through load_csv.
void write_csv(const Dataset& dataset, const std::string& path);

struct FeatureBounds {
  std::vector<double> lo;
  std::vector<double> hi;
};

// Per-feature min and max. Call on the training split only, then apply the
// same bounds everywhere else.
FeatureBounds compute_bounds(const Dataset& dataset);

// (x - lo) / (hi - lo) per feature; a constant feature maps to zero. Values
// outside the bounds are not clamped.
Dataset apply_bounds(const Dataset& dataset, const FeatureBounds& bounds);

std::pair<Dataset, FeatureBounds> normalize(const Dataset& dataset);

struct SplitSpec {
  double train_fraction = 0.7;        // of the non-anomalous rows
  double calibration_fraction = 0.5;  // of the anomalous rows
  double test_fraud_fraction = 0.25;  // anomaly share of the test split
  std::uint64_t seed = 0;
};

struct Splits {
  Dataset train;        // non-anomalous rows only
  Dataset calibration;  // anomalies plus an equal number of normals
  Dataset test;         // remaining anomalies, resampled to the target share
};

Splits make_splits(const Dataset& dataset, const SplitSpec& spec);

Dataset select_features(const Dataset& dataset, const std::vector<int>& indices);

// Correlated, sigmoid-squashed Gaussian rows labeled normal, plus uniform
// noise rows labeled anomalous.
Dataset synth_dataset(int n_normal, int n_anomalous, int dim, std::uint64_t seed);

}  // namespace qanogan::data
