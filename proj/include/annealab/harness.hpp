#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace annealab {

// Uniform inclusive grid; points == 1 collapses to {lo}.
struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;

  std::vector<double> values() const;
};

// One parsed experiment description. Every runner reads only the fields it
// documents; validate_config checks per-experiment requirements up front so
// `validate` can reject a config without running anything.
struct ExperimentConfig {
  std::string experiment;

  // problem block
  std::string kind;             // gbp | qkp | ising | uniform
  int n = 0;
  int c_target = 0;             // gbp imbalance
  std::int64_t capacity = 1;    // qkp W

  int instance_count = 10;
  std::uint64_t master_seed = 1;
  int grid_points = 1001;
  std::vector<std::string> tau_modes = {"static"};  // "static" or a decimal tau

  // lambda policy: either a fixed value or calibrated so that mu*(lambda)
  // equals mu_target, taking the root selected by lambda_root.
  bool lambda_calibrated = true;
  double lambda_value = 0.0;
  double mu_target = 1.0;
  std::string lambda_root = "nearest_zero";  // nearest_zero | lowest | highest
  double lambda_lo = -2.0, lambda_hi = 2.0;  // calibration search window

  // mu sweep, as multiples of the calibrated mu*
  GridSpec mu_factor_grid{0.5, 1.5, 101};
  std::vector<double> mu_factors = {0.9, 1.0, 1.1};  // mu_slices

  // absolute grids for the lambda-mu map
  GridSpec lambda_grid{0.0, 1.4, 15};
  GridSpec mu_grid{0.0, 2.0, 21};

  double bin_width = 0.01;

  // constraint_sweep families
  std::vector<int> c_values = {0, 1, 2, 3, 4};
  std::vector<std::int64_t> w_values = {1, 2, 3, 4};

  // Ising scans and the collective size scan
  std::vector<int> sizes = {4, 8, 16, 32, 64, 128, 256, 512, 1024};
  double j_fm = 1.0;
  double j_af = -1.0;
  double h_field = 2.5;

  std::string out_dir;  // empty -> out/<experiment>
  int threads = 1;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
void validate_config(const ExperimentConfig& cfg);

// In-memory experiment output. Rows are fully ordered before emission, so
// writing is deterministic regardless of how the work was scheduled.
struct ExperimentResult {
  std::string records_header;
  std::vector<std::string> records;
  std::string bins_header;
  std::vector<std::string> bins;
  std::vector<std::string> log;
  std::string meta_json;
  // extra per-experiment files (boundary curve, trajectory slices, ...)
  std::vector<std::pair<std::string, std::string>> extra_files;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Emits records.csv, bins.csv (when non-empty), meta.json, log.txt, and any
// extra files into dir, creating it if needed.
void write_result(const std::string& dir, const ExperimentResult& res);

// Runs fn(0..count-1) on up to `threads` workers. Callers own output slots
// per index; no ordering guarantees during execution.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

// Self-contained spot checks exposed by the CLI; names listed by
// oracle_names(). Each returns pass/fail plus printable detail lines.
struct OracleOutcome {
  bool pass = false;
  std::vector<std::string> lines;
};
OracleOutcome run_oracle(const std::string& name);
std::vector<std::string> oracle_names();

}  // namespace annealab
