#pragma once

#include "persmode/diagram_metrics.hpp"
#include "persmode/grid_field.hpp"
#include "persmode/persistence_h0.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace persmode {

enum class DensityFamily {
  Example1,     // cos(2 pi x) + 2 [x >= 1/2], clipped at 0, on [0,1]
  Example2_1,   // four truncated paraboloids on a lens-shaped support
  Example2_2,   // two cones restricted to pairs of touching diamonds
  LowerBound,   // 1 + L/2 x_1^a + L (h^a - |x - m/N (1..1)|_inf^a)_+
  TwoPointF0,   // 1 - |f0|_1 + f0,  f0 = 1 - |x - 1/2|_inf^a
  TwoPointF1,   // f~0 plus a bump at (1/2 + h)(1..1) minus corner sinks
  Grid,         // piecewise constant on a CellField
};

/// Parameters of the lower-bound families. N = floor(1/h).
struct LowerBoundParams {
  int dim = 1;
  double h = 0.1;
  int m = 5;
  double L = 2.0;
  double alpha = 1.0;
};

/// A reference density on [0,1]^d. Immutable; the normalising constant Z and
/// the sampling envelope are computed once at construction.
class DensitySpec {
 public:
  static DensitySpec example1();
  static DensitySpec example2_1();
  static DensitySpec example2_2();
  static DensitySpec grid_density(CellFieldd field);
  static DensitySpec lower_bound(const LowerBoundParams& params);
  static DensitySpec two_point_f0(int dim, double alpha);
  static DensitySpec two_point_f1(const LowerBoundParams& params);

  DensityFamily family() const { return family_; }
  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  const LowerBoundParams& params() const { return params_; }

  /// The defining formula clipped at 0; x must lie in [0,1]^d.
  double eval_unnormalized(const Eigen::Ref<const Point>& x) const;
  double eval(const Eigen::Ref<const Point>& x) const { return eval_unnormalized(x) / normalization(); }

  /// Z = integral of the clipped formula over the unit cube.
  double normalization() const { return z_; }
  /// 1.05 times the largest value of f/Z seen on the quadrature grid.
  double envelope() const { return envelope_; }

 private:
  DensitySpec(DensityFamily family, int dim, std::string name);
  void finalize();
  double raw(const Eigen::Ref<const Point>& x) const;

  DensityFamily family_;
  int dim_;
  std::string name_;
  LowerBoundParams params_{};
  std::shared_ptr<const CellFieldd> field_;
  double f0_mass_ = 0.0;
  double z_ = 0.0;
  double envelope_ = 0.0;
};

/// Cells per axis used for quadrature: 2^15 in 1-d, 2048 in 2-d, and at most
/// 2^22 cells overall beyond.
int default_quadrature_cells(int dim);

/// Midpoint-rule integral of the clipped formula on a uniform grid; each
/// centre is split into two points a hair apart so that a centre sitting on a
/// discontinuity counts half.
double quadrature(const DensitySpec& spec, int cells_per_axis);

/// Z of spec: midpoint quadrature at the default resolution (exact for grid
/// densities). Throws if the integral is not positive.
double normalize(const DensitySpec& spec);

/// n points by rejection from the uniform envelope. Point i draws from its
/// own stream seeded by (seed, i), so output depends only on (spec, n, seed).
PointSet sample(const DensitySpec& spec, std::int64_t n, std::uint64_t seed);

struct OracleDiagram {
  PersistenceDiagram diagram;
  /// Per point of diagram.points: lifetime moved more than
  /// 2 * lipschitz_estimate / fine_m when the resolution was halved.
  std::vector<bool> unstable;
  double lipschitz_estimate = 0.0;
};

int default_oracle_cells(int dim);

/// Superlevel diagram of f/Z sampled at cell centres of a fine_m^d grid.
OracleDiagram oracle_diagram(const DensitySpec& spec, int fine_m);

struct OracleModes {
  ModeSet locations;
  std::vector<double> values;
};

/// True modes and local-maximum values of f/Z: closed form where the formula
/// fixes them, otherwise read off the fine-grid oracle diagram.
OracleModes oracle_modes(const DensitySpec& spec);

enum class LowerBoundKind { DiagramFamily, TwoPointF0, TwoPointF1 };

DensitySpec lower_bound_family(LowerBoundKind kind, const LowerBoundParams& params);

/// Looks up a density by CLI name: example1, example2_1, example2_2,
/// lower_bound, two_point_f0, two_point_f1.
DensitySpec density_by_name(const std::string& name, const LowerBoundParams& params = {});

/// Estimator defaults used for each named example (alpha, mu, h constant).
struct DensityPreset {
  double alpha;
  double mu;
  double h_const;
};
DensityPreset preset_for(const DensitySpec& spec);

}  // namespace persmode
