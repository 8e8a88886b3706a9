#include "persmode/mode_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace persmode {

void EstimatorConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("mu must lie in (0, 1]");
  if (!(h_const > 0.0)) throw std::invalid_argument("h_const must be positive");
  if (h_override && !(*h_override > 0.0 && *h_override <= 0.5)) {
    throw std::invalid_argument("h must lie in (0, 1/2]");
  }
  if (l_known && !(*l_known > 0.0)) throw std::invalid_argument("l must be positive");
  if (dilation_override && *dilation_override < 0) {
    throw std::invalid_argument("dilation radius must be non-negative");
  }
}

Calibration calibration_from_h(double h, long long n, int dim) {
  Calibration out;
  out.target = h;
  out.cells_per_axis = std::max(2, static_cast<int>(std::lround(1.0 / h)));
  out.h = 1.0 / out.cells_per_axis;
  const double cell_volume = std::pow(out.h, dim);
  out.condition_holds =
      out.h > std::sqrt(std::log(1.0 / cell_volume) / (static_cast<double>(n) * cell_volume));
  return out;
}

Calibration calibrate_h(long long n, int dim, double alpha, double c) {
  if (n < 2) throw std::invalid_argument("calibrate_h: need at least 2 samples");
  if (dim < 1) throw std::invalid_argument("calibrate_h: dimension must be positive");
  if (!(alpha > 0.0) || !(c > 0.0)) throw std::invalid_argument("calibrate_h: alpha, c must be positive");
  const double nd = static_cast<double>(n);
  const double target = c * std::pow(std::log(nd) / nd, 1.0 / (dim + 2.0 * alpha));
  Calibration out = calibration_from_h(target, n, dim);
  out.target = target;
  return out;
}

ModeSet ModeEstimate::locations() const {
  const int d = diagram.grid ? diagram.grid->dim() : (modes.empty() ? 1 : static_cast<int>(modes.front().location.size()));
  PointSet p(static_cast<Eigen::Index>(modes.size()), d);
  for (std::size_t i = 0; i < modes.size(); ++i) p.row(static_cast<Eigen::Index>(i)) = modes[i].location.transpose();
  return ModeSet(d, std::move(p));
}

std::vector<double> ModeEstimate::values() const {
  std::vector<double> out;
  for (const auto& m : modes) out.push_back(m.value);
  return out;
}

namespace {

template <typename Keep>
ModeEstimate collect_modes(const PersistenceDiagram& diagram, Keep keep) {
  if (!diagram.grid) throw std::invalid_argument("mode extraction needs a diagram with grid provenance");
  ModeEstimate out;
  out.diagram = diagram;
  const PersistenceDiagram sorted = diagram.canonical();
  for (const auto& p : sorted.points) {
    if (!p.essential && !keep(p.lifetime())) continue;
    out.modes.push_back({diagram.grid->cell_center(p.birth_cell), p.birth, p.lifetime(), p.birth_cell,
                         p.birth_cell, p.essential});
  }
  out.k_hat = out.modes.size();
  return out;
}

}  // namespace

ModeEstimate modes_known_l(const PersistenceDiagram& diagram, double l) {
  if (!(l > 0.0)) throw std::invalid_argument("known threshold l must be positive");
  ModeEstimate out = collect_modes(diagram, [l](double life) { return life > l / 2.0; });
  out.threshold_used = l;
  out.rule = ThresholdRule::KnownL;
  return out;
}

ModeEstimate modes_at_threshold(const PersistenceDiagram& diagram, double l_hat) {
  ModeEstimate out = collect_modes(diagram, [l_hat](double life) { return life >= l_hat; });
  out.threshold_used = l_hat;
  out.rule = ThresholdRule::Adaptive;
  return out;
}

double risk_R(const PersistenceDiagram& diagram, double l, double h, double alpha) {
  if (!(l > 0.0)) throw std::invalid_argument("risk_R: l must be positive");
  return bottleneck(diagram, truncate(diagram, l)) + std::pow(h, alpha) / l;
}

double risk_R_left(const PersistenceDiagram& diagram, double l, double h, double alpha) {
  if (!(l > 0.0)) throw std::invalid_argument("risk_R: l must be positive");
  return bottleneck(diagram, truncate_inclusive(diagram, l)) + std::pow(h, alpha) / l;
}

std::vector<double> threshold_candidates(const PersistenceDiagram& diagram) {
  std::vector<double> out{1.0};
  for (const auto& p : diagram.points) {
    const double life = p.lifetime();
    if (!p.essential && life > 0.0 && life <= 1.0) out.push_back(life);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double select_l(const PersistenceDiagram& diagram, double h, double alpha) {
  if (diagram.points.empty()) throw std::invalid_argument("select_l: empty diagram");
  const std::vector<double> candidates = threshold_candidates(diagram);
  double best_l = candidates.back();
  double best_risk = risk_R_left(diagram, best_l, h, alpha);
  for (auto it = candidates.rbegin() + 1; it != candidates.rend(); ++it) {
    const double r = risk_R_left(diagram, *it, h, alpha);
    if (r < best_risk) {
      best_risk = r;
      best_l = *it;
    }
  }
  return best_l;
}

void locate_at_peaks(ModeEstimate& estimate, const CellFieldd& histogram, int radius) {
  for (auto& m : estimate.modes) {
    m.location_cell = plateau_peak(histogram, m.birth_cell, radius);
    m.location = histogram.grid().cell_center(m.location_cell);
  }
}

namespace {

struct Pipeline {
  Calibration calibration;
  int radius = 0;
  CellFieldd histogram;
  PersistenceDiagram diagram;
};

Pipeline run_pipeline(const PointSet& samples, const EstimatorConfig& config) {
  config.validate();
  if (samples.rows() < 2) throw std::invalid_argument("estimation needs at least 2 samples");
  const int d = static_cast<int>(samples.cols());
  const Calibration cal = config.h_override ? calibration_from_h(*config.h_override, samples.rows(), d)
                                            : calibrate_h(samples.rows(), d, config.alpha, config.h_const);
  const int radius = config.dilation_override.value_or(dilation_radius(d, config.mu));
  CellFieldd histogram = build_histogram(samples, build_grid(d, cal.cells_per_axis));
  PersistenceDiagram diagram = superlevel_diagram(dilate_max(histogram, radius));
  return {cal, radius, std::move(histogram), std::move(diagram)};
}

ModeEstimate finish(Pipeline& p, ModeEstimate out) {
  locate_at_peaks(out, p.histogram, p.radius);
  out.calibration = p.calibration;
  out.dilation = p.radius;
  return out;
}

}  // namespace

PersistenceDiagram estimate_config_diagram(const PointSet& samples, const EstimatorConfig& config,
                                           Calibration* calibration, int* dilation) {
  Pipeline p = run_pipeline(samples, config);
  if (calibration) *calibration = p.calibration;
  if (dilation) *dilation = p.radius;
  return std::move(p.diagram);
}

ModeEstimate estimate_modes_known_l(const PointSet& samples, const EstimatorConfig& config) {
  if (!config.l_known) throw std::invalid_argument("known-l estimator needs l_known");
  Pipeline p = run_pipeline(samples, config);
  return finish(p, modes_known_l(p.diagram, *config.l_known));
}

ModeEstimate estimate_modes_adaptive(const PointSet& samples, const EstimatorConfig& config) {
  Pipeline p = run_pipeline(samples, config);
  return finish(p, modes_at_threshold(p.diagram, select_l(p.diagram, p.calibration.h, config.alpha)));
}

ModeEstimate estimate_modes(const PointSet& samples, const EstimatorConfig& config) {
  return config.l_known ? estimate_modes_known_l(samples, config) : estimate_modes_adaptive(samples, config);
}

}  // namespace persmode
