#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dio/intmath.hpp"

namespace dio {

enum class Mode { freq, doa };

// Parsed from a "key = value" file; see load_config for the key set.
struct ExperimentConfig {
  Mode mode = Mode::freq;
  i64 sources = 5;  // model order D
  std::vector<double> snr_db = {-10, -5, 0, 5, 10};
  i64 lags = 64;       // K
  i64 snapshots = 64;  // L
  i64 trials = 100;
  std::uint64_t seed = 1;

  // freq mode
  i64 gamma = 0;
  double min_sep = 0.5;  // radians between drawn frequencies
  std::size_t grid_points = 4096;
  bool baseline = true;  // also run the second-order co-prime pipeline

  // doa mode
  i64 p1 = 4, p2 = 3, q = 5;
  double min_sep_deg = 1.0;
  double grid_step_deg = 0.05;

  // both
  double amp_lo = 1.0, amp_hi = 1.0;
};

// Reads one option per line as "key = value"; '#' starts a comment.  Keys:
//   mode sources snr_db lags snapshots trials seed gamma min_sep
//   grid_points baseline p1 p2 q min_sep_deg grid_step_deg amp_lo amp_hi
// snr_db takes a comma-separated list.  Unknown keys and malformed values
// are rejected.
ExperimentConfig load_config(const std::string& path);

// Rejects configurations that could not run: bad ranges, a lag budget too
// small for the model order, or array parameters that do not compose.
void validate_config(const ExperimentConfig& cfg);

struct FreqTrial {
  std::vector<double> truth;     // drawn frequencies, sorted
  std::vector<double> estimate;  // recovered frequencies, sorted
  double rmse = 0;
  bool baseline_ok = false;  // baseline ran (enabled and feasible)
  std::vector<double> baseline_estimate;
  double baseline_rmse = 0;
  int redraws = 0;
  double runtime_ms = 0;  // estimation path only, simulation excluded
  double baseline_runtime_ms = 0;
};

struct DoaTrial {
  std::vector<double> truth;  // bearings in degrees, sorted
  std::vector<double> estimate;
  double rmse = 0;
  int redraws = 0;
  double runtime_ms = 0;
};

// One Monte-Carlo trial at a given linear SNR (sigma2 = total source power
// divided by snr_linear; pass +infinity for a noise-free trial).  trial_key
// seeds every random draw of the trial; degenerate draws and collapsed
// spectra are redrawn with the attempt counter mixed into the key.
FreqTrial run_freq_trial(const ExperimentConfig& cfg, double snr_linear, std::uint64_t trial_key);
DoaTrial run_doa_trial(const ExperimentConfig& cfg, double snr_linear, std::uint64_t trial_key);

struct SweepRow {
  double snr_db = 0;
  std::string method;  // "diophantine3" or "coprime2"
  double rmse = 0;     // mean per-trial rmse
  i64 trials = 0;
  i64 redraws = 0;
  double mean_runtime_ms = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

// Full sweep over cfg.snr_db, cfg.trials Monte-Carlo trials per point.
// Trials run under OpenMP; aggregation order is fixed, so results are
// independent of the thread count.
SweepResult run_freq_experiment(const ExperimentConfig& cfg);
SweepResult run_doa_experiment(const ExperimentConfig& cfg);

// CSV with header snr_db,method,rmse,trials,redraws[,mean_runtime_ms].
// Doubles are written round-trip exact; dropping the runtime column makes
// repeated runs byte-identical.
std::string to_csv(const SweepResult& result, bool runtime_column);
void emit_csv(const SweepResult& result, const std::string& path, bool runtime_column = true);

}  // namespace dio
