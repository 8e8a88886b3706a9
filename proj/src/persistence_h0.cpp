#include "persmode/persistence_h0.hpp"

namespace persmode {

bool same_points(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  return a.canonical().points == b.canonical().points;
}

PersistenceDiagram estimate_diagram(const PointSet& samples, const GridSpec& grid, double mu) {
  return estimate_diagram_with_radius(samples, grid, dilation_radius(grid.dim(), mu));
}

PersistenceDiagram estimate_diagram_with_radius(const PointSet& samples, const GridSpec& grid,
                                                int radius) {
  return superlevel_diagram(dilate_max(build_histogram(samples, grid), radius));
}

}  // namespace persmode
