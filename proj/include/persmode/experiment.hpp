#pragma once

#include "persmode/mode_estimation.hpp"
#include "persmode/reference_densities.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace persmode {

/// One (density, n, trial) run of the estimator scored against the oracle.
struct ExperimentResult {
  std::string density;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  int trial = 0;
  double h = 0.0;
  int cells_per_axis = 0;
  double mu = 0.0;
  double alpha = 0.0;
  double threshold = 0.0;
  std::size_t k_hat = 0;
  /// Bottleneck distance between the estimated and the oracle diagram.
  double d_b = 0.0;
  /// Matching distance between estimated and true mode locations.
  double d_M = 0.0;
  /// Largest |M_hat - M| over pairs of the d_M matching with both sides real.
  double max_value_error = 0.0;
  double wall_seconds = 0.0;
};

struct SweepConfig {
  std::vector<std::int64_t> n_list;
  int trials = 1;
  std::uint64_t seed = 0;
  EstimatorConfig estimator;
  int fine_m = 0;  // 0 selects default_oracle_cells(dim)
  int threads = 1;
};

/// Ground truth shared by every trial of a sweep.
struct Oracle {
  PersistenceDiagram diagram;
  OracleModes modes;
};

Oracle make_oracle(const DensitySpec& spec, int fine_m);

/// Seed of the sample used by trial `trial` at size n.
std::uint64_t trial_seed(std::uint64_t seed, std::int64_t n, int trial);

ExperimentResult run_trial(const DensitySpec& spec, const Oracle& oracle, std::int64_t n, std::uint64_t seed,
                           int trial, const EstimatorConfig& estimator);

/// All (n, trial) runs, ordered by n then trial. Work is spread over
/// config.threads workers; the output does not depend on the schedule.
std::vector<ExperimentResult> run_sweep(const DensitySpec& spec, const SweepConfig& config);

struct RatePoint {
  std::int64_t n = 0;
  double median_d_b = 0.0;
};

/// Least-squares fit of log(median d_b) against log(log n / n).
struct RateSummary {
  std::vector<RatePoint> medians;
  double slope = 0.0;
  double intercept = 0.0;
  bool non_increasing = true;
};

RateSummary rate_summary(const std::vector<ExperimentResult>& results);

}  // namespace persmode
