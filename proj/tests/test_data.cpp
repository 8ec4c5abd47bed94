#include "qanogan/data/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

#include "doctest.h"

using namespace qanogan::data;

namespace {

std::string temp_path(const std::string& name) {
  return std::string("/tmp/qanogan_test_") + name;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

Dataset indexed_dataset(int n_normal, int n_anomalous) {
  // Every row carries its own index so split membership can be tracked.
  Dataset dataset;
  dataset.feature_names = {"V1", "V2"};
  int index = 0;
  for (int i = 0; i < n_normal; ++i) {
    dataset.rows.push_back({{static_cast<double>(index++), 0.5}, false});
  }
  for (int i = 0; i < n_anomalous; ++i) {
    dataset.rows.push_back({{static_cast<double>(index++), 0.5}, true});
  }
  return dataset;
}

}  // namespace

TEST_CASE("load_csv reads the transaction schema") {
  const std::string path = temp_path("load.csv");
  write_file(path,
             "\"Time\",\"V1\",\"V2\",\"Amount\",\"Class\"\n"
             "0,-1.5,0.25,149.62,\"0\"\n"
             "406,2.0,-0.5,0.0,\"1\"\n"
             "\n"
             "812,0.125,3.5,12.5,0\n");
  const Dataset dataset = load_csv(path);
  REQUIRE(dataset.feature_count() == 3);
  CHECK(dataset.feature_names == std::vector<std::string>{"V1", "V2", "Amount"});
  REQUIRE(dataset.size() == 3);
  CHECK(dataset.rows[0].features == std::vector<double>{-1.5, 0.25, 149.62});
  CHECK(dataset.rows[0].label == false);
  CHECK(dataset.rows[1].label == true);
  CHECK(dataset.rows[2].features == std::vector<double>{0.125, 3.5, 12.5});
  CHECK(dataset.anomaly_count() == 1);
  std::remove(path.c_str());
}

TEST_CASE("load_csv accepts files without Time or Amount") {
  const std::string path = temp_path("plain.csv");
  write_file(path, "V1,V2,V3,Class\n0.1,0.2,0.3,0\n0.4,0.5,0.6,1\n");
  const Dataset dataset = load_csv(path);
  CHECK(dataset.feature_names == std::vector<std::string>{"V1", "V2", "V3"});
  CHECK(dataset.size() == 2);
  std::remove(path.c_str());
}

TEST_CASE("load_csv rejects malformed input with location info") {
  const std::string path = temp_path("bad.csv");

  SUBCASE("unknown header column") {
    write_file(path, "V1,Weird,Class\n1,2,0\n");
    CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains("Weird"), std::runtime_error);
  }
  SUBCASE("missing Class") {
    write_file(path, "V1,V2\n1,2\n");
    CHECK_THROWS_AS(load_csv(path), std::runtime_error);
  }
  SUBCASE("non-contiguous feature numbering") {
    write_file(path, "V1,V3,Class\n1,2,0\n");
    CHECK_THROWS_AS(load_csv(path), std::runtime_error);
  }
  SUBCASE("non-numeric cell names its line and column") {
    write_file(path, "V1,V2,Class\n1,2,0\n1,oops,0\n");
    try {
      load_csv(path);
      FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
      const std::string msg = e.what();
      CHECK(msg.find("line 3") != std::string::npos);
      CHECK(msg.find("V2") != std::string::npos);
    }
  }
  SUBCASE("wrong cell count names its line") {
    write_file(path, "V1,V2,Class\n1,2,0\n1,0\n");
    CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains("line 3"), std::runtime_error);
  }
  SUBCASE("label outside 0/1") {
    write_file(path, "V1,Class\n1,2\n");
    CHECK_THROWS_AS(load_csv(path), std::runtime_error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_csv(temp_path("does_not_exist.csv")), std::runtime_error);
  }
  std::remove(path.c_str());
}

TEST_CASE("write_csv round-trips exactly") {
  Dataset dataset;
  dataset.feature_names = {"V1", "V2"};
  dataset.rows.push_back({{0.1234567890123456789, -3.0e-17}, false});
  dataset.rows.push_back({{1.0 / 3.0, 2.5}, true});

  const std::string path = temp_path("roundtrip.csv");
  write_csv(dataset, path);
  const Dataset back = load_csv(path);
  REQUIRE(back.size() == 2);
  CHECK(back.feature_names == dataset.feature_names);
  for (int r = 0; r < 2; ++r) {
    CHECK(back.rows[r].features == dataset.rows[r].features);  // bit-exact
    CHECK(back.rows[r].label == dataset.rows[r].label);
  }
  std::remove(path.c_str());
}

TEST_CASE("min-max scaling uses the training bounds") {
  Dataset train;
  train.feature_names = {"V1", "V2", "V3"};
  train.rows.push_back({{0.0, 10.0, 7.0}, false});
  train.rows.push_back({{4.0, 30.0, 7.0}, false});
  train.rows.push_back({{2.0, 20.0, 7.0}, false});

  const auto [scaled, bounds] = normalize(train);
  CHECK(bounds.lo == std::vector<double>{0.0, 10.0, 7.0});
  CHECK(bounds.hi == std::vector<double>{4.0, 30.0, 7.0});
  CHECK(scaled.rows[0].features == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(scaled.rows[1].features == std::vector<double>{1.0, 1.0, 0.0});  // constant -> 0
  CHECK(scaled.rows[2].features == std::vector<double>{0.5, 0.5, 0.0});

  // Rows outside the training range keep going past [0, 1].
  Dataset test;
  test.feature_names = train.feature_names;
  test.rows.push_back({{8.0, 0.0, 7.0}, true});
  const Dataset scaled_test = apply_bounds(test, bounds);
  CHECK(scaled_test.rows[0].features[0] == doctest::Approx(2.0));
  CHECK(scaled_test.rows[0].features[1] == doctest::Approx(-0.5));

  FeatureBounds wrong;
  wrong.lo = {0.0};
  wrong.hi = {1.0};
  CHECK_THROWS_AS(apply_bounds(test, wrong), std::invalid_argument);
  CHECK_THROWS_AS(compute_bounds(Dataset{}), std::invalid_argument);
}

TEST_CASE("splits separate train, calibration, and test") {
  const Dataset dataset = indexed_dataset(150, 20);
  SplitSpec spec;
  spec.train_fraction = 0.7;
  spec.calibration_fraction = 0.5;
  spec.test_fraud_fraction = 0.25;
  spec.seed = 99;

  const Splits splits = make_splits(dataset, spec);

  CHECK(splits.train.size() == 105);
  CHECK(splits.train.anomaly_count() == 0);

  CHECK(splits.calibration.size() == 20);  // 10 anomalies + 10 normals
  CHECK(splits.calibration.anomaly_count() == 10);

  CHECK(splits.test.anomaly_count() == 10);
  CHECK(splits.test.size() == 40);  // 10 anomalies + 30 normals for a 1/4 share

  // No row may appear in two splits.
  std::set<double> seen;
  long total = 0;
  for (const Dataset* split : {&splits.train, &splits.calibration, &splits.test}) {
    for (const DataRow& row : split->rows) {
      CHECK(seen.insert(row.features[0]).second);
      ++total;
    }
  }
  CHECK(total == 165);  // 5 leftover normals stay unused

  const Splits again = make_splits(dataset, spec);
  CHECK(again.train.rows[0].features == splits.train.rows[0].features);
  CHECK(again.test.rows.back().features == splits.test.rows.back().features);

  SplitSpec other = spec;
  other.seed = 100;
  const Splits different = make_splits(dataset, other);
  bool any_difference = false;
  for (long i = 0; i < splits.train.size() && !any_difference; ++i) {
    any_difference = different.train.rows[i].features != splits.train.rows[i].features;
  }
  CHECK(any_difference);
}

TEST_CASE("splits fail loudly when rows run out") {
  const Dataset tiny = indexed_dataset(10, 8);
  SplitSpec spec;
  spec.train_fraction = 0.9;  // 9 of 10 normals, none left for calibration
  CHECK_THROWS_AS(make_splits(tiny, spec), std::invalid_argument);

  SplitSpec bad = spec;
  bad.train_fraction = 1.5;
  CHECK_THROWS_AS(make_splits(tiny, bad), std::invalid_argument);

  Dataset no_anomalies = indexed_dataset(10, 0);
  CHECK_THROWS_AS(make_splits(no_anomalies, SplitSpec{}), std::invalid_argument);
}

TEST_CASE("feature selection keeps order and validates indices") {
  Dataset dataset;
  dataset.feature_names = {"V1", "V2", "V3"};
  dataset.rows.push_back({{1.0, 2.0, 3.0}, false});
  dataset.rows.push_back({{4.0, 5.0, 6.0}, true});

  const Dataset picked = select_features(dataset, {2, 0});
  CHECK(picked.feature_names == std::vector<std::string>{"V3", "V1"});
  CHECK(picked.rows[0].features == std::vector<double>{3.0, 1.0});
  CHECK(picked.rows[1].features == std::vector<double>{6.0, 4.0});
  CHECK(picked.rows[1].label == true);

  CHECK_THROWS_AS(select_features(dataset, {}), std::invalid_argument);
  CHECK_THROWS_AS(select_features(dataset, {3}), std::invalid_argument);
  CHECK_THROWS_AS(select_features(dataset, {0, 0}), std::invalid_argument);
}

TEST_CASE("synthetic data is bounded, labeled, and correlated") {
  const int n_normal = 4000, n_anomalous = 1000, dim = 4;
  const Dataset dataset = synth_dataset(n_normal, n_anomalous, dim, 7);
  REQUIRE(dataset.size() == 5000);
  CHECK(dataset.feature_count() == dim);
  CHECK(dataset.anomaly_count() == n_anomalous);

  double normal_mean = 0.0;
  for (long i = 0; i < dataset.size(); ++i) {
    const DataRow& row = dataset.rows[i];
    CHECK(row.label == (i >= n_normal));
    for (double v : row.features) {
      CHECK(v > 0.0);
      CHECK(v < 1.0);
    }
    if (!row.label) normal_mean += row.features[0];
  }
  normal_mean /= n_normal;
  CHECK(std::abs(normal_mean - 0.5) < 0.02);

  // Neighboring features of normal rows correlate; anomalies do not.
  auto correlation = [&](bool label) {
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    long n = 0;
    for (const DataRow& row : dataset.rows) {
      if (row.label != label) continue;
      const double x = row.features[0], y = row.features[1];
      sx += x;
      sy += y;
      sxx += x * x;
      syy += y * y;
      sxy += x * y;
      ++n;
    }
    const double cov = sxy / n - (sx / n) * (sy / n);
    const double vx = sxx / n - (sx / n) * (sx / n);
    const double vy = syy / n - (sy / n) * (sy / n);
    return cov / std::sqrt(vx * vy);
  };
  CHECK(correlation(false) > 0.5);
  CHECK(std::abs(correlation(true)) < 0.1);

  const Dataset again = synth_dataset(n_normal, n_anomalous, dim, 7);
  CHECK(again.rows[0].features == dataset.rows[0].features);
  CHECK_THROWS_AS(synth_dataset(0, 1, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(synth_dataset(10, 1, 0, 1), std::invalid_argument);
}
