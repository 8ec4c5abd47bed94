#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qanogan/cli/run_config.hpp"

namespace qanogan::cli {

// Directory layout shared by train, calibrate, and evaluate: a single run
// lives directly in out_dir; --repeat k > 1 creates out_dir/run_01 .. run_k
// with seeds base, base+1, ... Each run directory is self-contained.
std::vector<std::string> run_directories(const std::string& out_dir, int repeat);

// Trains per config. Writes config.json, transform.json, model.bin, and
// loss_history.csv into every run directory.
void cmd_train(const RunConfig& config, int repeat, std::ostream& log);

// Scores the calibration split of each run and writes threshold.txt with the
// F1-maximizing cut.
void cmd_calibrate(const std::string& out_dir, int repeat, std::ostream& log);

// Scores the test split of each run against its stored threshold; writes
// scores.csv and metrics.csv per run, plus summary.csv and ci.txt with a
// bootstrap interval over the per-run F1 when repeat > 1.
void cmd_evaluate(const std::string& out_dir, int repeat, std::ostream& log);

// Scores one feature row (original units) against a trained run directory
// and prints residual, discrimination, score, threshold, and verdict.
void cmd_score(const std::string& run_dir, const std::vector<double>& row, std::ostream& log);

// Writes a synthetic transaction table in the same schema load_csv reads.
void cmd_synth(int n_normal, int n_anomalous, int dim, std::uint64_t seed,
               const std::string& csv_path, std::ostream& log);

}  // namespace qanogan::cli
