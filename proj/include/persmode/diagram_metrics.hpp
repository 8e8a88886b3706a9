#pragma once

#include "persmode/persistence_h0.hpp"

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace persmode {

/// Finite multiset of points in R^d: mode locations, or local-maximum values
/// stored as 1-d points. One point per row.
struct ModeSet {
  int dim = 1;
  PointSet points;

  ModeSet() : points(0, 1) {}
  ModeSet(int d, PointSet p);
  static ModeSet from_values(const std::vector<double>& values);

  Eigen::Index size() const { return points.rows(); }
  bool empty() const { return points.rows() == 0; }
};

/// Result of a bottleneck assignment on a square cost matrix: the optimal
/// max cost and one permutation (row i -> column match[i]) achieving it.
struct BottleneckAssignment {
  double cost = 0.0;
  std::vector<int> match;
};

/// Minimises the largest cost over perfect matchings of a square matrix.
/// Entries equal to +infinity are forbidden edges; the result cost is
/// +infinity when no perfect matching avoids them. Exact: binary search over
/// the sorted distinct entries with a maximum-matching feasibility test.
BottleneckAssignment bottleneck_assignment(const Eigen::MatrixXd& cost);

/// Bottleneck distance with L-infinity ground cost. Essential classes only
/// match each other at cost |b1 - b2|; differing essential counts give +inf.
double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b);

/// Keeps every essential point and every point with lifetime strictly above l.
PersistenceDiagram truncate(const PersistenceDiagram& diagram, double l);

/// Keeps every essential point and every point with lifetime at least l.
PersistenceDiagram truncate_inclusive(const PersistenceDiagram& diagram, double l);

/// Pairing produced by matching_distance: (row in a or -1, row in b or -1),
/// where -1 stands for a zero padding vector.
struct ModeMatching {
  double distance = 0.0;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
};

/// d_M: both sets are padded with zero vectors to equal size, then the
/// bottleneck matching under the sup norm is returned.
ModeMatching match_modes(const ModeSet& a, const ModeSet& b);
double matching_distance(const ModeSet& a, const ModeSet& b);

/// Hausdorff distance under the sup norm; both sets must be nonempty.
double hausdorff(const ModeSet& a, const ModeSet& b);

}  // namespace persmode
