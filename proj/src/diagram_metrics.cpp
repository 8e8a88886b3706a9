#include "persmode/diagram_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace persmode {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Hopcroft-Karp on the dense graph {(i, j) : cost(i, j) <= t}.
class ThresholdMatcher {
 public:
  explicit ThresholdMatcher(const Eigen::MatrixXd& cost)
      : cost_(cost), n_(static_cast<int>(cost.rows())) {}

  // Returns the size of a maximum matching; match_row() holds it afterwards.
  int run(double t) {
    t_ = t;
    row_match_.assign(n_, -1);
    col_match_.assign(n_, -1);
    int size = 0;
    while (bfs()) {
      for (int r = 0; r < n_; ++r) {
        if (row_match_[r] < 0 && dfs(r)) ++size;
      }
    }
    return size;
  }

  const std::vector<int>& match_row() const { return row_match_; }

 private:
  bool bfs() {
    dist_.assign(n_, -1);
    std::queue<int> queue;
    for (int r = 0; r < n_; ++r) {
      if (row_match_[r] < 0) {
        dist_[r] = 0;
        queue.push(r);
      }
    }
    bool reachable_free = false;
    while (!queue.empty()) {
      const int r = queue.front();
      queue.pop();
      for (int c = 0; c < n_; ++c) {
        if (cost_(r, c) > t_) continue;
        const int next = col_match_[c];
        if (next < 0) {
          reachable_free = true;
        } else if (dist_[next] < 0) {
          dist_[next] = dist_[r] + 1;
          queue.push(next);
        }
      }
    }
    return reachable_free;
  }

  bool dfs(int r) {
    for (int c = 0; c < n_; ++c) {
      if (cost_(r, c) > t_) continue;
      const int next = col_match_[c];
      if (next < 0 || (dist_[next] == dist_[r] + 1 && dfs(next))) {
        row_match_[r] = c;
        col_match_[c] = r;
        return true;
      }
    }
    dist_[r] = -1;
    return false;
  }

  const Eigen::MatrixXd& cost_;
  int n_;
  double t_ = 0.0;
  std::vector<int> row_match_, col_match_, dist_;
};

double sup_distance(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                    const Eigen::Ref<const Eigen::RowVectorXd>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

ModeSet::ModeSet(int d, PointSet p) : dim(d), points(std::move(p)) {
  if (points.rows() > 0 && points.cols() != d) {
    throw std::invalid_argument("ModeSet: point dimension does not match dim");
  }
  if (points.rows() == 0) points.resize(0, d);
  if (!points.allFinite()) throw std::invalid_argument("ModeSet: coordinates must be finite");
}

ModeSet ModeSet::from_values(const std::vector<double>& values) {
  PointSet p(static_cast<Eigen::Index>(values.size()), 1);
  for (std::size_t i = 0; i < values.size(); ++i) p(static_cast<Eigen::Index>(i), 0) = values[i];
  return ModeSet(1, std::move(p));
}

BottleneckAssignment bottleneck_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) {
    throw std::invalid_argument("bottleneck_assignment: cost matrix must be square");
  }
  const int n = static_cast<int>(cost.rows());
  BottleneckAssignment result;
  if (n == 0) return result;

  std::vector<double> candidates;
  candidates.reserve(static_cast<std::size_t>(n) * n);
  for (Eigen::Index j = 0; j < cost.cols(); ++j) {
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
      if (std::isfinite(cost(i, j))) candidates.push_back(cost(i, j));
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  ThresholdMatcher matcher(cost);
  if (candidates.empty() || matcher.run(candidates.back()) < n) {
    result.cost = kInf;
    return result;
  }
  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (matcher.run(candidates[mid]) == n) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  matcher.run(candidates[lo]);
  result.cost = candidates[lo];
  result.match = matcher.match_row();
  return result;
}

double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  std::vector<const PersistencePoint*> ea, eb, fa, fb;
  for (const auto& p : a.points) (p.essential ? ea : fa).push_back(&p);
  for (const auto& p : b.points) (p.essential ? eb : fb).push_back(&p);
  if (ea.size() != eb.size()) return kInf;

  double essential_cost = 0.0;
  if (!ea.empty()) {
    const auto k = static_cast<Eigen::Index>(ea.size());
    Eigen::MatrixXd cost(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) cost(i, j) = std::abs(ea[i]->birth - eb[j]->birth);
    }
    essential_cost = bottleneck_assignment(cost).cost;
  }

  // Rows: points of a, then diagonal slots for b. Columns: points of b, then
  // diagonal slots for a.
  const auto na = static_cast<Eigen::Index>(fa.size());
  const auto nb = static_cast<Eigen::Index>(fb.size());
  if (na + nb == 0) return essential_cost;
  Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(na + nb, na + nb, kInf);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < nb; ++j) {
      cost(i, j) = std::max(std::abs(fa[i]->birth - fb[j]->birth), std::abs(fa[i]->death - fb[j]->death));
    }
    cost(i, nb + i) = (fa[i]->birth - fa[i]->death) / 2.0;
  }
  for (Eigen::Index j = 0; j < nb; ++j) cost(na + j, j) = (fb[j]->birth - fb[j]->death) / 2.0;
  cost.bottomRightCorner(nb, na).setZero();
  return std::max(essential_cost, bottleneck_assignment(cost).cost);
}

PersistenceDiagram truncate(const PersistenceDiagram& diagram, double l) {
  if (!(l > 0.0)) throw std::invalid_argument("truncate: threshold must be positive");
  PersistenceDiagram out{{}, diagram.grid};
  for (const auto& p : diagram.points) {
    if (p.essential || p.lifetime() > l) out.points.push_back(p);
  }
  return out;
}

PersistenceDiagram truncate_inclusive(const PersistenceDiagram& diagram, double l) {
  if (!(l > 0.0)) throw std::invalid_argument("truncate_inclusive: threshold must be positive");
  PersistenceDiagram out{{}, diagram.grid};
  for (const auto& p : diagram.points) {
    if (p.essential || p.lifetime() >= l) out.points.push_back(p);
  }
  return out;
}

ModeMatching match_modes(const ModeSet& a, const ModeSet& b) {
  if (a.dim != b.dim) throw std::invalid_argument("matching_distance: dimension mismatch");
  const Eigen::Index n = std::max(a.size(), b.size());
  ModeMatching out;
  if (n == 0) return out;
  const Eigen::RowVectorXd zero = Eigen::RowVectorXd::Zero(a.dim);
  auto row = [&](const ModeSet& s, Eigen::Index i) -> Eigen::RowVectorXd {
    return i < s.size() ? Eigen::RowVectorXd(s.points.row(i)) : zero;
  };
  Eigen::MatrixXd cost(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::RowVectorXd x = row(a, i);
    for (Eigen::Index j = 0; j < n; ++j) cost(i, j) = sup_distance(x, row(b, j));
  }
  const BottleneckAssignment assignment = bottleneck_assignment(cost);
  out.distance = assignment.cost;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = assignment.match[static_cast<std::size_t>(i)];
    out.pairs.emplace_back(i < a.size() ? i : -1, j < b.size() ? j : -1);
  }
  return out;
}

double matching_distance(const ModeSet& a, const ModeSet& b) { return match_modes(a, b).distance; }

double hausdorff(const ModeSet& a, const ModeSet& b) {
  if (a.dim != b.dim) throw std::invalid_argument("hausdorff: dimension mismatch");
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff: sets must be nonempty");
  auto directed = [](const ModeSet& from, const ModeSet& to) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < from.size(); ++i) {
      double best = kInf;
      for (Eigen::Index j = 0; j < to.size(); ++j) {
        best = std::min(best, sup_distance(from.points.row(i), to.points.row(j)));
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace persmode
