#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace persmode {

/// Sample storage: one point per row, one coordinate per column.
using PointSet = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Point = Eigen::VectorXd;
using CellIndex = std::int64_t;
using MultiIndex = std::vector<int>;

inline constexpr int kMaxDim = 8;

/// Regular grid of m^d closed cubes of side h = 1/m over [0,1]^d.
class GridSpec {
 public:
  GridSpec(int dim, int cells_per_axis);

  int dim() const { return dim_; }
  int cells_per_axis() const { return m_; }
  double h() const { return 1.0 / static_cast<double>(m_); }
  /// h^d, the volume of one cell.
  double cell_volume() const { return std::pow(h(), dim_); }
  CellIndex total_cells() const { return total_; }

  /// Row-major: the last coordinate varies fastest.
  CellIndex flat_index(const MultiIndex& c) const;
  MultiIndex multi_index(CellIndex flat) const;
  Point cell_center(CellIndex flat) const;

  /// Cell containing x, or nullopt when x lies outside [0,1]^d. Cells are
  /// half-open except the last one per axis, which also owns the upper face.
  std::optional<CellIndex> cell_of_point(const Eigen::Ref<const Point>& x) const;

  bool operator==(const GridSpec& other) const = default;

 private:
  int dim_;
  int m_;
  CellIndex total_;
};

inline GridSpec build_grid(int dim, int cells_per_axis) { return GridSpec(dim, cells_per_axis); }

/// A non-negative value per grid cell, stored in flat (row-major) order.
template <typename Scalar>
class CellField {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  explicit CellField(GridSpec grid) : grid_(grid), values_(Values::Zero(grid.total_cells())) {}

  CellField(GridSpec grid, Values values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.total_cells()) {
      throw std::invalid_argument("CellField: value count " + std::to_string(values_.size()) +
                                  " does not match grid size " +
                                  std::to_string(grid_.total_cells()));
    }
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
      if (!(values_[i] >= Scalar(0)) || !std::isfinite(static_cast<double>(values_[i]))) {
        throw std::invalid_argument("CellField: values must be finite and non-negative");
      }
    }
  }

  const GridSpec& grid() const { return grid_; }
  const Values& values() const { return values_; }
  Scalar operator[](CellIndex c) const { return values_[c]; }
  CellIndex size() const { return values_.size(); }

  template <typename Other>
  CellField<Other> cast() const {
    return CellField<Other>(grid_, values_.template cast<Other>());
  }

 private:
  GridSpec grid_;
  Values values_;
};

using CellFieldd = CellField<double>;

/// Histogram density estimate: count(c) / (n h^d). Samples outside the unit
/// cube count towards n but land in no cell.
CellFieldd build_histogram(const PointSet& samples, const GridSpec& grid);

/// ceil(sqrt(d) / mu): the thickening radius in cells.
int dilation_radius(int dim, double mu);

namespace detail {

// Sliding-window max along one axis, window [i-k, i+k] clipped to the grid.
template <typename Scalar>
void max_filter_axis(Eigen::Array<Scalar, Eigen::Dynamic, 1>& values, const GridSpec& grid, int axis,
                     int k) {
  const int m = grid.cells_per_axis();
  CellIndex stride = 1;
  for (int a = grid.dim() - 1; a > axis; --a) stride *= m;
  const CellIndex block = stride * m;
  std::vector<Scalar> line(m);
  for (CellIndex base = 0; base < grid.total_cells(); base += block) {
    for (CellIndex off = 0; off < stride; ++off) {
      const CellIndex start = base + off;
      for (int i = 0; i < m; ++i) line[i] = values[start + i * stride];
      for (int i = 0; i < m; ++i) {
        const int lo = std::max(0, i - k);
        const int hi = std::min(m - 1, i + k);
        values[start + i * stride] = *std::max_element(line.begin() + lo, line.begin() + hi + 1);
      }
    }
  }
}

}  // namespace detail

/// Chebyshev max-filter of radius k: out[c] = max of field over cells within
/// index L-infinity distance k (no wrap-around). Computed one axis at a time.
template <typename Scalar>
CellField<Scalar> dilate_max(const CellField<Scalar>& field, int k) {
  if (k < 0) throw std::invalid_argument("dilate_max: radius must be non-negative");
  auto values = field.values();
  if (k > 0) {
    for (int axis = 0; axis < field.grid().dim(); ++axis) {
      detail::max_filter_axis(values, field.grid(), axis, k);
    }
  }
  return CellField<Scalar>(field.grid(), std::move(values));
}

/// Calls fn(neighbor) for every in-grid cell at Chebyshev index distance
/// 1..radius from c (c itself excluded).
template <typename Fn>
void for_each_neighbor(const GridSpec& grid, CellIndex c, int radius, Fn&& fn) {
  const int d = grid.dim();
  const int m = grid.cells_per_axis();
  std::array<int, kMaxDim> center{}, lo{}, hi{}, cur{};
  CellIndex rest = c;
  for (int a = d - 1; a >= 0; --a) {
    center[a] = static_cast<int>(rest % m);
    rest /= m;
  }
  for (int a = 0; a < d; ++a) {
    lo[a] = std::max(0, center[a] - radius);
    hi[a] = std::min(m - 1, center[a] + radius);
    cur[a] = lo[a];
  }
  while (true) {
    CellIndex flat = 0;
    for (int a = 0; a < d; ++a) flat = flat * m + cur[a];
    if (flat != c) fn(flat);
    int a = d - 1;
    while (a >= 0 && cur[a] == hi[a]) {
      cur[a] = lo[a];
      --a;
    }
    if (a < 0) break;
    ++cur[a];
  }
}

}  // namespace persmode
