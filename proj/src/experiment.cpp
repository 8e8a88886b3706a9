#include "persmode/experiment.hpp"

#include "persmode/random.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace persmode {

Oracle make_oracle(const DensitySpec& spec, int fine_m) {
  const int m = fine_m > 0 ? fine_m : default_oracle_cells(spec.dim());
  return {oracle_diagram(spec, m).diagram, oracle_modes(spec)};
}

std::uint64_t trial_seed(std::uint64_t seed, std::int64_t n, int trial) {
  return derive_seed(seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial)});
}

ExperimentResult run_trial(const DensitySpec& spec, const Oracle& oracle, std::int64_t n, std::uint64_t seed,
                           int trial, const EstimatorConfig& estimator) {
  const auto start = std::chrono::steady_clock::now();
  const PointSet samples = sample(spec, n, trial_seed(seed, n, trial));
  const ModeEstimate est = estimate_modes(samples, estimator);

  ExperimentResult r;
  r.density = spec.name();
  r.n = n;
  r.seed = seed;
  r.trial = trial;
  r.h = est.calibration.h;
  r.cells_per_axis = est.calibration.cells_per_axis;
  r.mu = estimator.mu;
  r.alpha = estimator.alpha;
  r.threshold = est.threshold_used;
  r.k_hat = est.k_hat;
  r.d_b = bottleneck(est.diagram, oracle.diagram);

  const ModeMatching matching = match_modes(est.locations(), oracle.modes.locations);
  r.d_M = matching.distance;
  for (const auto& [i, j] : matching.pairs) {
    if (i < 0 || j < 0) continue;
    r.max_value_error = std::max(
        r.max_value_error, std::abs(est.modes[static_cast<std::size_t>(i)].value - oracle.modes.values[static_cast<std::size_t>(j)]));
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<ExperimentResult> run_sweep(const DensitySpec& spec, const SweepConfig& config) {
  if (config.n_list.empty()) throw std::invalid_argument("sweep: empty n list");
  if (config.trials < 1) throw std::invalid_argument("sweep: need at least one trial");
  for (const auto n : config.n_list) {
    if (n < 2) throw std::invalid_argument("sweep: every n must be at least 2");
  }
  const Oracle oracle = make_oracle(spec, config.fine_m);

  const std::size_t total = config.n_list.size() * static_cast<std::size_t>(config.trials);
  std::vector<ExperimentResult> results(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t task = next++; task < total; task = next++) {
      const std::int64_t n = config.n_list[task / config.trials];
      const int trial = static_cast<int>(task % config.trials);
      try {
        results[task] = run_trial(spec, oracle, n, config.seed, trial, config.estimator);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, config.threads);
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

RateSummary rate_summary(const std::vector<ExperimentResult>& results) {
  std::map<std::int64_t, std::vector<double>> by_n;
  for (const auto& r : results) by_n[r.n].push_back(r.d_b);

  RateSummary out;
  for (auto& [n, errors] : by_n) {
    std::sort(errors.begin(), errors.end());
    const std::size_t k = errors.size();
    const double median = k % 2 ? errors[k / 2] : 0.5 * (errors[k / 2 - 1] + errors[k / 2]);
    out.medians.push_back({n, median});
  }
  for (std::size_t i = 1; i < out.medians.size(); ++i) {
    if (out.medians[i].median_d_b > out.medians[i - 1].median_d_b) out.non_increasing = false;
  }

  if (out.medians.size() >= 2) {
    Eigen::MatrixXd design(static_cast<Eigen::Index>(out.medians.size()), 2);
    Eigen::VectorXd target(design.rows());
    for (Eigen::Index i = 0; i < design.rows(); ++i) {
      const double n = static_cast<double>(out.medians[static_cast<std::size_t>(i)].n);
      design(i, 0) = std::log(std::log(n) / n);
      design(i, 1) = 1.0;
      target[i] = std::log(out.medians[static_cast<std::size_t>(i)].median_d_b);
    }
    const Eigen::Vector2d fit = design.colPivHouseholderQr().solve(target);
    out.slope = fit[0];
    out.intercept = fit[1];
  }
  return out;
}

}  // namespace persmode
