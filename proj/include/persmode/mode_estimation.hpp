#pragma once

#include "persmode/diagram_metrics.hpp"
#include "persmode/persistence_h0.hpp"

#include <optional>
#include <vector>

namespace persmode {

/// Estimator parameters: Hölder exponent alpha, reach parameter mu, and the
/// bandwidth rule h = c (log n / n)^{1/(d + 2 alpha)} unless h is forced.
struct EstimatorConfig {
  double alpha = 0.5;
  double mu = 1.0;
  double h_const = 1.0;
  /// Explicit bin width; snapped to 1/round(1/h).
  std::optional<double> h_override;
  /// Known minimal lifetime l; selects the known-threshold estimator.
  std::optional<double> l_known;
  /// Replaces ceil(sqrt(d)/mu) as the dilation radius (0 = plain histogram).
  std::optional<int> dilation_override;

  void validate() const;
};

struct Calibration {
  double h = 0.0;
  int cells_per_axis = 0;
  /// Target width before snapping to a reciprocal integer.
  double target = 0.0;
  /// h > sqrt(log(1/h^d) / (n h^d)); a failure is only a warning.
  bool condition_holds = false;
};

Calibration calibrate_h(long long n, int dim, double alpha, double c);

/// Snaps an explicit width to the grid rule m = max(2, round(1/h)).
Calibration calibration_from_h(double h, long long n, int dim);

struct EstimatedMode {
  /// Center of location_cell.
  Point location;
  double value = 0.0;
  /// +infinity for essential classes.
  double lifetime = 0.0;
  CellIndex birth_cell = -1;
  /// Histogram peak inside the dilation window of birth_cell when samples
  /// are available, otherwise birth_cell itself.
  CellIndex location_cell = -1;
  bool essential = false;
};

enum class ThresholdRule { KnownL, Adaptive };

struct ModeEstimate {
  std::size_t k_hat = 0;
  std::vector<EstimatedMode> modes;
  /// l for the known rule, l-hat for the adaptive one.
  double threshold_used = 0.0;
  ThresholdRule rule = ThresholdRule::Adaptive;
  PersistenceDiagram diagram;
  Calibration calibration;
  int dilation = 0;

  ModeSet locations() const;
  std::vector<double> values() const;
};

/// Modes of a diagram whose points clear lifetime > l/2 (essentials always
/// qualify). The diagram must carry its grid.
ModeEstimate modes_known_l(const PersistenceDiagram& diagram, double l);

/// Modes whose lifetime is at least l_hat (essentials always qualify).
ModeEstimate modes_at_threshold(const PersistenceDiagram& diagram, double l_hat);

/// R(l) = d_b(D, D^l) + h^alpha / l with strict truncation D^l.
double risk_R(const PersistenceDiagram& diagram, double l, double h, double alpha);

/// Left-limit risk: truncation keeps lifetimes >= l.
double risk_R_left(const PersistenceDiagram& diagram, double l, double h, double alpha);

/// Candidate thresholds: distinct finite lifetimes in (0, 1], plus 1.
std::vector<double> threshold_candidates(const PersistenceDiagram& diagram);

/// argmin of the left-limit risk over the candidates; ties go to the largest.
double select_l(const PersistenceDiagram& diagram, double h, double alpha);

/// Moves each location from the birth cell (the lowest-index cell of a flat
/// dilated plateau) to the histogram peak it was dilated from.
void locate_at_peaks(ModeEstimate& estimate, const CellFieldd& histogram, int radius);

/// Grid, histogram, dilation and diagram for a sample under config.
PersistenceDiagram estimate_config_diagram(const PointSet& samples, const EstimatorConfig& config,
                                           Calibration* calibration = nullptr,
                                           int* dilation = nullptr);

ModeEstimate estimate_modes_known_l(const PointSet& samples, const EstimatorConfig& config);
ModeEstimate estimate_modes_adaptive(const PointSet& samples, const EstimatorConfig& config);

/// Dispatches on config.l_known.
ModeEstimate estimate_modes(const PointSet& samples, const EstimatorConfig& config);

}  // namespace persmode
