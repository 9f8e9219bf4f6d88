#ifndef PERMSOLVE_EXPERIMENTS_HPP
#define PERMSOLVE_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "permsolve/common.hpp"
#include "permsolve/json_io.hpp"

namespace permsolve {

/// One point of the parameter grid.
struct Cell {
  Index length = 31;
  Index k = 1;
  Index channels = 2;
  Index sources = 2;
  double p = 1.9;
};

struct TrialOptions {
  std::uint64_t master_seed = 0;
  double success_threshold_db = 100.0;
  int max_sweeps = 100;
  /// Diagnostic: skip the random permutations so A_tilde = A.
  bool identity_permutations = false;
};

struct ExperimentConfig {
  std::vector<Index> lengths;
  /// Absolute sparsity levels; when empty, k = max(1, round(r L)) for r in relative_sparsities.
  std::vector<Index> sparsities;
  std::vector<double> relative_sparsities;
  std::vector<Index> channels;
  std::vector<Index> sources;
  std::vector<double> norms;
  int trials = 200;
  TrialOptions options;
  /// 0 picks PERMSOLVE_THREADS, then the hardware concurrency.
  unsigned workers = 0;

  /// Throws ConfigError on an empty grid or invalid scalar settings.
  void validate() const;
  /// Cartesian grid in (L, k, M, N, p) order, L varying slowest.
  std::vector<Cell> cells() const;
};

ExperimentConfig experiment_config_from_json(const Json& j);
Json to_json(const ExperimentConfig& cfg);

struct TrialRecord {
  Cell cell;
  int trial = 0;
  double snr_db = 0.0;
  bool success = false;
  bool exact_match = false;
  int sweeps = 0;
  double wall_time_seconds = 0.0;  // solver time only
  /// Non-empty when the trial could not run (bad cell, guard violation, ...).
  std::string error;
};

/// Seed of one trial: a hash of the master seed, every cell coordinate and the trial index.
std::uint64_t trial_seed(std::uint64_t master_seed, const Cell& cell, int trial);

/// Draws A (uniform-support k-sparse Gaussian), applies L i.i.d. uniform
/// permutations, runs greedy_solve under `cell.p` and scores the SNR.
TrialRecord run_cell(const Cell& cell, int trial, const TrialOptions& options);

struct CellSummary {
  Cell cell;
  int trials = 0;
  double success_rate = 0.0;
  double mean_sweeps = 0.0;
  double mean_time_seconds = 0.0;
};

struct ExperimentResult {
  /// Ordered by (cell index, trial) regardless of scheduling.
  std::vector<TrialRecord> records;
  std::vector<CellSummary> cells;
};

unsigned resolve_worker_count(unsigned requested);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records);

/// CSV header: L,k,M,N,p,trial,snr_db,success,exact_match,sweeps,wall_time_s.
void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);
/// CSV header: L,k,M,N,p,trials,success_rate,mean_sweeps,mean_time_s.
void write_cells_csv(std::ostream& out, const std::vector<CellSummary>& cells);
std::vector<TrialRecord> read_trials_csv(std::istream& in);

struct RuntimeSample {
  Index length = 0;
  double seconds_per_sweep = 0.0;
};

/// Least-squares line log(t) = slope * log(L^2 log2 L) + log(coefficient).
struct RuntimeFit {
  double slope = 0.0;
  double coefficient = 0.0;
  /// Geometric mean of t / (L^2 log2 L), i.e. the coefficient with slope pinned to 1.
  double unit_slope_coefficient = 0.0;
  std::size_t samples = 0;
};

/// Needs samples at four or more distinct L >= 2.
RuntimeFit runtime_model_fit(const std::vector<RuntimeSample>& samples);
/// Uses wall_time_s / sweeps of every error-free record.
RuntimeFit runtime_model_fit(const std::vector<TrialRecord>& records);

}  // namespace permsolve

#endif  // PERMSOLVE_EXPERIMENTS_HPP
