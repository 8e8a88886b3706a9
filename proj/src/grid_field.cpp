#include "persmode/grid_field.hpp"

#include <limits>

namespace persmode {

GridSpec::GridSpec(int dim, int cells_per_axis) : dim_(dim), m_(cells_per_axis), total_(1) {
  if (dim < 1 || dim > kMaxDim) {
    throw std::invalid_argument("build_grid: dimension must be in [1, " + std::to_string(kMaxDim) +
                                "], got " + std::to_string(dim));
  }
  if (cells_per_axis < 2) {
    throw std::invalid_argument("build_grid: need at least 2 cells per axis, got " +
                                std::to_string(cells_per_axis));
  }
  for (int a = 0; a < dim; ++a) {
    if (total_ > std::numeric_limits<CellIndex>::max() / m_) {
      throw std::invalid_argument("build_grid: grid too large");
    }
    total_ *= m_;
  }
}

CellIndex GridSpec::flat_index(const MultiIndex& c) const {
  CellIndex flat = 0;
  for (int a = 0; a < dim_; ++a) flat = flat * m_ + c[a];
  return flat;
}

MultiIndex GridSpec::multi_index(CellIndex flat) const {
  MultiIndex c(dim_);
  for (int a = dim_ - 1; a >= 0; --a) {
    c[a] = static_cast<int>(flat % m_);
    flat /= m_;
  }
  return c;
}

Point GridSpec::cell_center(CellIndex flat) const {
  const MultiIndex c = multi_index(flat);
  Point x(dim_);
  for (int a = 0; a < dim_; ++a) x[a] = (c[a] + 0.5) * h();
  return x;
}

std::optional<CellIndex> GridSpec::cell_of_point(const Eigen::Ref<const Point>& x) const {
  if (x.size() != dim_) return std::nullopt;
  CellIndex flat = 0;
  for (int a = 0; a < dim_; ++a) {
    const double v = x[a];
    if (!(v >= 0.0 && v <= 1.0)) return std::nullopt;
    const int i = std::min(static_cast<int>(std::floor(v * m_)), m_ - 1);
    flat = flat * m_ + i;
  }
  return flat;
}

CellFieldd build_histogram(const PointSet& samples, const GridSpec& grid) {
  if (samples.rows() == 0) throw std::invalid_argument("build_histogram: empty sample set");
  if (samples.cols() != grid.dim()) {
    throw std::invalid_argument("build_histogram: samples have dimension " +
                                std::to_string(samples.cols()) + ", grid has " +
                                std::to_string(grid.dim()));
  }
  Eigen::ArrayXd counts = Eigen::ArrayXd::Zero(grid.total_cells());
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    const Point x = samples.row(i).transpose();
    if (auto c = grid.cell_of_point(x)) counts[*c] += 1.0;
  }
  const double scale = 1.0 / (static_cast<double>(samples.rows()) * grid.cell_volume());
  return CellFieldd(grid, counts * scale);
}

int dilation_radius(int dim, double mu) {
  if (dim < 1) throw std::invalid_argument("dilation_radius: dimension must be positive");
  if (!(mu > 0.0 && mu <= 1.0)) {
    throw std::invalid_argument("dilation_radius: mu must lie in (0, 1]");
  }
  // Absorb rounding in sqrt(d)/mu so exact integers such as 1/(1/3) stay put.
  const double ratio = std::sqrt(static_cast<double>(dim)) / mu;
  return static_cast<int>(std::ceil(ratio - 1e-12 * ratio));
}

}  // namespace persmode
