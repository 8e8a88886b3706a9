#pragma once

#include "persmode/grid_field.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <tuple>
#include <vector>

namespace persmode {

/// One H0 class of a superlevel filtration. Births sit above deaths; an
/// essential class never dies and carries death = 0 by convention.
struct PersistencePoint {
  double birth = 0.0;
  double death = 0.0;
  CellIndex birth_cell = -1;
  bool essential = false;

  /// birth - death, or +infinity for essential classes.
  double lifetime() const {
    return essential ? std::numeric_limits<double>::infinity() : birth - death;
  }

  bool operator==(const PersistencePoint&) const = default;
};

/// Multiset ordering used to compare diagrams: birth desc, death desc, then cell.
inline bool canonical_less(const PersistencePoint& a, const PersistencePoint& b) {
  return std::make_tuple(-a.birth, -a.death, a.essential, a.birth_cell) <
         std::make_tuple(-b.birth, -b.death, b.essential, b.birth_cell);
}

struct PersistenceDiagram {
  std::vector<PersistencePoint> points;
  /// Grid the diagram was computed on; absent for analytic or file-loaded diagrams.
  std::optional<GridSpec> grid;

  std::size_t size() const { return points.size(); }
  std::size_t essential_count() const {
    return static_cast<std::size_t>(
        std::count_if(points.begin(), points.end(), [](const auto& p) { return p.essential; }));
  }
  /// Points sorted into canonical order (grid provenance kept).
  PersistenceDiagram canonical() const {
    PersistenceDiagram out = *this;
    std::sort(out.points.begin(), out.points.end(), canonical_less);
    return out;
  }
};

/// Multiset equality of the point lists (grid provenance ignored).
bool same_points(const PersistenceDiagram& a, const PersistenceDiagram& b);

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  CellIndex find(CellIndex x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void attach(CellIndex child_root, CellIndex new_root) { parent_[child_root] = new_root; }

 private:
  std::vector<CellIndex> parent_;
};

// Elder rule: a is older than b when born higher, or equally high at a smaller cell.
template <typename Scalar>
bool older(Scalar birth_a, CellIndex cell_a, Scalar birth_b, CellIndex cell_b) {
  return birth_a > birth_b || (birth_a == birth_b && cell_a < cell_b);
}

}  // namespace detail

/// Every (birth, death) pair of the superlevel filtration of field under
/// vertex (Chebyshev) adjacency, including zero-persistence merges. Cells are
/// swept by decreasing value with ties in ascending flat index; a cell whose
/// already-swept neighbors are absent starts a component.
template <typename Scalar>
std::vector<PersistencePoint> superlevel_pairs(const CellField<Scalar>& field) {
  const GridSpec& grid = field.grid();
  const CellIndex n = grid.total_cells();
  const auto& v = field.values();

  std::vector<CellIndex> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), CellIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](CellIndex a, CellIndex b) { return v[a] > v[b]; });

  detail::UnionFind uf(static_cast<std::size_t>(n));
  std::vector<char> swept(static_cast<std::size_t>(n), 0);
  // Per-root birth data; only meaningful at current roots.
  std::vector<CellIndex> birth_cell(static_cast<std::size_t>(n), -1);
  std::vector<PersistencePoint> pairs;
  std::vector<CellIndex> roots;

  for (const CellIndex c : order) {
    const Scalar level = v[c];
    roots.clear();
    for_each_neighbor(grid, c, 1, [&](CellIndex nb) {
      if (!swept[nb]) return;
      const CellIndex r = uf.find(nb);
      if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
    });
    swept[c] = 1;
    if (roots.empty()) {
      birth_cell[c] = c;
      continue;
    }
    CellIndex eldest = roots.front();
    for (const CellIndex r : roots) {
      if (detail::older(v[birth_cell[r]], birth_cell[r], v[birth_cell[eldest]], birth_cell[eldest])) {
        eldest = r;
      }
    }
    uf.attach(c, eldest);
    for (const CellIndex r : roots) {
      if (r == eldest) continue;
      pairs.push_back({static_cast<double>(v[birth_cell[r]]), static_cast<double>(level),
                       birth_cell[r], false});
      uf.attach(r, eldest);
    }
  }

  for (CellIndex c = 0; c < n; ++c) {
    if (uf.find(c) == c) {
      pairs.push_back({static_cast<double>(v[birth_cell[c]]), 0.0, birth_cell[c], true});
    }
  }
  return pairs;
}

/// H0 persistence diagram of the superlevel filtration of field, with
/// zero-persistence pairs removed.
template <typename Scalar>
PersistenceDiagram superlevel_diagram(const CellField<Scalar>& field) {
  PersistenceDiagram out;
  out.grid = field.grid();
  for (const auto& p : superlevel_pairs(field)) {
    if (p.essential || p.birth > p.death) out.points.push_back(p);
  }
  return out;
}

/// Cell of largest raw value within Chebyshev radius of c (ties: smallest
/// index). When c is a birth cell of dilate_max(raw, radius), the returned
/// cell has the same dilated value and lies in the same component at birth.
template <typename Scalar>
CellIndex plateau_peak(const CellField<Scalar>& raw, CellIndex c, int radius) {
  CellIndex best = c;
  for_each_neighbor(raw.grid(), c, radius, [&](CellIndex nb) {
    if (raw[nb] > raw[best] || (raw[nb] == raw[best] && nb < best)) best = nb;
  });
  return best;
}

inline constexpr CellIndex kBruteForceMaxCells = 10000;

/// Reference implementation: recomputes the connected components of every
/// superlevel set by breadth-first search and matches them across levels by
/// containment. Quadratic; intended for testing on small grids.
template <typename Scalar>
PersistenceDiagram brute_force_diagram(const CellField<Scalar>& field) {
  const GridSpec& grid = field.grid();
  const CellIndex n = grid.total_cells();
  if (n > kBruteForceMaxCells) {
    throw std::invalid_argument("brute_force_diagram: grid has more than " +
                                std::to_string(kBruteForceMaxCells) + " cells");
  }
  const auto& v = field.values();

  std::vector<Scalar> levels(v.data(), v.data() + n);
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  struct Component {
    std::vector<CellIndex> cells;
    Scalar birth;
    CellIndex birth_cell;
  };
  std::vector<Component> previous;
  PersistenceDiagram out;
  out.grid = grid;

  for (const Scalar level : levels) {
    std::vector<int> label(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<CellIndex>> comps;
    for (CellIndex s = 0; s < n; ++s) {
      if (v[s] < level || label[s] >= 0) continue;
      const int id = static_cast<int>(comps.size());
      comps.emplace_back();
      std::queue<CellIndex> queue;
      queue.push(s);
      label[s] = id;
      while (!queue.empty()) {
        const CellIndex c = queue.front();
        queue.pop();
        comps[id].push_back(c);
        for_each_neighbor(grid, c, 1, [&](CellIndex nb) {
          if (v[nb] >= level && label[nb] < 0) {
            label[nb] = id;
            queue.push(nb);
          }
        });
      }
    }

    std::vector<std::vector<const Component*>> contained(comps.size());
    for (const auto& prev : previous) {
      const int id = label[prev.cells.front()];
      const bool inside = std::all_of(prev.cells.begin(), prev.cells.end(),
                                      [&](CellIndex c) { return label[c] == id; });
      if (!inside) throw std::logic_error("brute_force_diagram: superlevel sets not nested");
      contained[id].push_back(&prev);
    }

    std::vector<Component> current;
    for (std::size_t id = 0; id < comps.size(); ++id) {
      Component comp{comps[id], level, -1};
      if (contained[id].empty()) {
        CellIndex first = n;
        for (const CellIndex c : comps[id]) {
          if (v[c] == level) first = std::min(first, c);
        }
        comp.birth_cell = first;
      } else {
        const Component* eldest = contained[id].front();
        for (const Component* p : contained[id]) {
          if (detail::older(p->birth, p->birth_cell, eldest->birth, eldest->birth_cell)) eldest = p;
        }
        comp.birth = eldest->birth;
        comp.birth_cell = eldest->birth_cell;
        for (const Component* p : contained[id]) {
          if (p == eldest || !(p->birth > level)) continue;
          out.points.push_back({static_cast<double>(p->birth), static_cast<double>(level),
                                p->birth_cell, false});
        }
      }
      current.push_back(std::move(comp));
    }
    previous = std::move(current);
  }

  for (const auto& comp : previous) {
    out.points.push_back({static_cast<double>(comp.birth), 0.0, comp.birth_cell, true});
  }
  return out;
}

/// Estimated diagram: histogram, Chebyshev dilation of radius
/// ceil(sqrt(d)/mu), then the superlevel diagram.
PersistenceDiagram estimate_diagram(const PointSet& samples, const GridSpec& grid, double mu);

/// Same pipeline with an explicit dilation radius (0 disables the thickening).
PersistenceDiagram estimate_diagram_with_radius(const PointSet& samples, const GridSpec& grid,
                                                int radius);

}  // namespace persmode
