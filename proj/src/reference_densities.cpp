#include "persmode/reference_densities.hpp"

#include "persmode/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace persmode {

namespace {

using SmallPoint = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

constexpr std::int64_t kMaxOracleCells = std::int64_t{1} << 22;
constexpr double kEnvelopeFactor = 1.05;

double sup_norm_to(const Eigen::Ref<const Point>& x, double center) {
  return (x.array() - center).abs().maxCoeff();
}

// (L (h^a - |x - c (1..1)|_inf^a))_+
double bump(const Eigen::Ref<const Point>& x, double center, double L, double h, double a) {
  return L * std::max(0.0, std::pow(h, a) - std::pow(sup_norm_to(x, center), a));
}

double paraboloid(double x, double y, double cx, double cy, double r2) {
  const double dx = x - cx, dy = y - cy;
  return std::max(0.0, r2 - (dx * dx + dy * dy));
}

double cone(double x, double y, double cx, double cy) {
  return std::max(0.0, 0.125 - std::hypot(x - cx, y - cy));
}

// Visits every cell centre of a cells^d grid.
template <typename Fn>
void for_each_center(int dim, int cells, Fn&& fn) {
  std::int64_t total = 1;
  for (int a = 0; a < dim; ++a) total *= cells;
  SmallPoint x(dim);
  const double step = 1.0 / cells;
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t rest = flat;
    for (int a = dim - 1; a >= 0; --a) {
      x[a] = (static_cast<double>(rest % cells) + 0.5) * step;
      rest /= cells;
    }
    fn(flat, x);
  }
}

struct QuadratureResult {
  double integral = 0.0;
  double sup = 0.0;
};

// Midpoint rule with each centre replaced by a pair of points mirrored about
// it along a generic direction. A centre lying exactly on a jump of f then
// contributes half of each side instead of whichever side the inclusive
// support test picks, which removes an O(h) bias on dyadic grids.
template <class Fn>
QuadratureResult symmetric_midpoint(int dim, int cells, Fn&& f) {
  static constexpr double kDirection[kMaxDim] = {1.0, 0.6180339887498949, 0.4142135623730950, 0.3183098861837907,
                                                 0.2360679774997897, 0.1715728752538099, 0.1415926535897932,
                                                 0.0986122886681098};
  static_assert(kMaxDim <= 8);
  SmallPoint offset(dim);
  for (int a = 0; a < dim; ++a) offset[a] = 1e-7 * kDirection[a] / cells;
  long double sum = 0.0L;
  double sup = 0.0;
  SmallPoint y(dim);
  for_each_center(dim, cells, [&](std::int64_t, const SmallPoint& x) {
    y = x + offset;
    const double up = f(y);
    y = x - offset;
    const double down = f(y);
    sum += 0.5L * (static_cast<long double>(up) + down);
    sup = std::max({sup, up, down});
  });
  return {static_cast<double>(sum * std::pow(1.0L / cells, dim)), sup};
}

}  // namespace

DensitySpec::DensitySpec(DensityFamily family, int dim, std::string name)
    : family_(family), dim_(dim), name_(std::move(name)) {}

DensitySpec DensitySpec::example1() {
  DensitySpec s(DensityFamily::Example1, 1, "example1");
  s.finalize();
  return s;
}

DensitySpec DensitySpec::example2_1() {
  DensitySpec s(DensityFamily::Example2_1, 2, "example2_1");
  s.finalize();
  return s;
}

DensitySpec DensitySpec::example2_2() {
  DensitySpec s(DensityFamily::Example2_2, 2, "example2_2");
  s.finalize();
  return s;
}

DensitySpec DensitySpec::grid_density(CellFieldd field) {
  DensitySpec s(DensityFamily::Grid, field.grid().dim(), "grid");
  s.field_ = std::make_shared<const CellFieldd>(std::move(field));
  s.finalize();
  return s;
}

DensitySpec DensitySpec::lower_bound(const LowerBoundParams& p) {
  if (p.dim < 1 || p.dim > kMaxDim) throw std::invalid_argument("lower_bound: bad dimension");
  if (!(p.h > 0.0 && p.h < 1.0)) throw std::invalid_argument("lower_bound: h must lie in (0, 1)");
  if (!(p.L > 0.0)) throw std::invalid_argument("lower_bound: L must be positive");
  if (!(p.alpha > 0.0 && p.alpha <= 1.0)) throw std::invalid_argument("lower_bound: alpha must lie in (0, 1]");
  const int cells = static_cast<int>(std::floor(1.0 / p.h + 1e-9));
  if (!(4 * p.m > cells && 4 * p.m < 3 * cells)) {
    throw std::invalid_argument("lower_bound: m must satisfy floor(1/h)/4 < m < 3 floor(1/h)/4");
  }
  DensitySpec s(DensityFamily::LowerBound, p.dim, "lower_bound");
  s.params_ = p;
  s.finalize();
  return s;
}

DensitySpec DensitySpec::two_point_f0(int dim, double alpha) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("two_point_f0: bad dimension");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("two_point_f0: alpha must lie in (0, 1]");
  DensitySpec s(DensityFamily::TwoPointF0, dim, "two_point_f0");
  s.params_.dim = dim;
  s.params_.alpha = alpha;
  // The sup-norm radius r = |x - 1/2|_inf has CDF (2r)^d on [0, 1/2].
  s.f0_mass_ = 1.0 - dim * std::pow(0.5, alpha) / (alpha + dim);
  s.finalize();
  return s;
}

DensitySpec DensitySpec::two_point_f1(const LowerBoundParams& p) {
  DensitySpec s = two_point_f0(p.dim, p.alpha);
  if (!(p.L > 1.0)) throw std::invalid_argument("two_point_f1: L must exceed 1");
  if (!(p.h > 0.0 && p.h <= 0.25)) throw std::invalid_argument("two_point_f1: h must lie in (0, 1/4]");
  const double corner_value = 1.0 - s.f0_mass_ + 1.0 - std::pow(0.5, p.alpha);
  if (p.L * std::pow(p.h, p.alpha) > corner_value) {
    throw std::invalid_argument("two_point_f1: corner sinks would make the density negative");
  }
  s.family_ = DensityFamily::TwoPointF1;
  s.name_ = "two_point_f1";
  s.params_ = p;
  s.finalize();
  return s;
}

double DensitySpec::raw(const Eigen::Ref<const Point>& x) const {
  switch (family_) {
    case DensityFamily::Example1: {
      const double t = x[0];
      return std::cos(2.0 * std::numbers::pi * t) + (t >= 0.5 ? 2.0 : 0.0);
    }
    case DensityFamily::Example2_1: {
      const double px = x[0], py = x[1];
      if (py < 0.25 || py > 0.75) return 0.0;
      const double q = (py - 0.25) * (py - 0.75);
      if (px < 0.25 - q || px > 0.75 + q) return 0.0;
      return 2.0 * paraboloid(px, py, 0.25, 0.25, 1.0 / 20) + 4.0 * paraboloid(px, py, 0.75, 0.75, 1.0 / 20) +
             paraboloid(px, py, 0.75, 0.25, 1.0 / 16) + paraboloid(px, py, 0.25, 0.75, 1.0 / 16);
    }
    case DensityFamily::Example2_2: {
      const double px = x[0], py = x[1];
      auto diamond = [&](double cx, double cy) { return std::abs(px - cx) + std::abs(py - cy) <= 0.25; };
      if (diamond(0.25, 0.25) || diamond(0.25, 0.75)) return 0.5 * cone(px, py, 0.25, 0.5);
      if (diamond(0.75, 0.75) || diamond(0.75, 0.25)) return cone(px, py, 0.75, 0.5);
      return 0.0;
    }
    case DensityFamily::LowerBound: {
      const auto& p = params_;
      const double cells = std::floor(1.0 / p.h + 1e-9);
      return 1.0 + 0.5 * p.L * std::pow(x[0], p.alpha) + bump(x, p.m / cells, p.L, p.h, p.alpha);
    }
    case DensityFamily::TwoPointF0:
    case DensityFamily::TwoPointF1: {
      const auto& p = params_;
      double v = 1.0 - f0_mass_ + 1.0 - std::pow(sup_norm_to(x, 0.5), p.alpha);
      if (family_ == DensityFamily::TwoPointF1) {
        v += bump(x, 0.5 + p.h, p.L, p.h, p.alpha);
        // One sink per vertex of the cube.
        std::int64_t corners = std::int64_t{1} << dim_;
        for (std::int64_t mask = 0; mask < corners; ++mask) {
          double dist = 0.0;
          for (int a = 0; a < dim_; ++a) dist = std::max(dist, std::abs(x[a] - ((mask >> a) & 1)));
          v -= p.L * std::max(0.0, std::pow(p.h, p.alpha) - std::pow(dist, p.alpha));
        }
      }
      return v;
    }
    case DensityFamily::Grid:
      return (*field_)[*field_->grid().cell_of_point(x)];
  }
  return 0.0;
}

double DensitySpec::eval_unnormalized(const Eigen::Ref<const Point>& x) const {
  if (x.size() != dim_) throw std::invalid_argument("eval: point dimension does not match density");
  if (!((x.array() >= 0.0).all() && (x.array() <= 1.0).all())) {
    throw std::invalid_argument("eval: point lies outside the unit cube");
  }
  return std::max(0.0, raw(x));
}

int default_quadrature_cells(int dim) {
  if (dim == 1) return 1 << 15;
  if (dim == 2) return 2048;
  return static_cast<int>(std::floor(std::pow(static_cast<double>(kMaxOracleCells), 1.0 / dim) + 1e-9));
}

double quadrature(const DensitySpec& spec, int cells_per_axis) {
  if (cells_per_axis < 1) throw std::invalid_argument("quadrature: need at least one cell per axis");
  return symmetric_midpoint(spec.dim(), cells_per_axis,
                            [&](const SmallPoint& x) { return spec.eval_unnormalized(x); })
      .integral;
}

double normalize(const DensitySpec& spec) { return spec.normalization(); }

void DensitySpec::finalize() {
  double sup = 0.0;
  if (family_ == DensityFamily::Grid) {
    z_ = field_->values().sum() * field_->grid().cell_volume();
    sup = field_->values().maxCoeff();
  } else {
    const auto q = symmetric_midpoint(dim_, default_quadrature_cells(dim_),
                                      [&](const SmallPoint& x) { return eval_unnormalized(x); });
    z_ = q.integral;
    sup = q.sup;
  }
  if (!(z_ > 0.0) || !std::isfinite(z_)) throw std::invalid_argument("density integrates to zero");
  envelope_ = kEnvelopeFactor * sup / z_;
}

PointSet sample(const DensitySpec& spec, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample: n must be at least 1");
  const double bound = spec.envelope();
  if (!(bound > 0.0)) throw std::invalid_argument("sample: envelope bound is zero");
  const int d = spec.dim();
  PointSet out(n, d);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SmallPoint x(d);
  for (std::int64_t i = 0; i < n; ++i) {
    std::mt19937_64 rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
    while (true) {
      for (int a = 0; a < d; ++a) x[a] = unit(rng);
      if (unit(rng) * bound < spec.eval(x)) break;
    }
    out.row(i) = x.transpose();
  }
  return out;
}

int default_oracle_cells(int dim) {
  if (dim == 1) return 4096;
  if (dim == 2) return 512;
  return std::max(2, static_cast<int>(std::floor(std::pow(262144.0, 1.0 / dim) + 1e-9)));
}

namespace {

CellFieldd sample_on_centers(const DensitySpec& spec, int fine_m) {
  const GridSpec grid(spec.dim(), fine_m);
  if (grid.total_cells() > kMaxOracleCells) {
    throw std::invalid_argument("oracle_diagram: fine grid exceeds 2^22 cells");
  }
  Eigen::ArrayXd values(grid.total_cells());
  for_each_center(spec.dim(), fine_m, [&](std::int64_t flat, const SmallPoint& x) { values[flat] = spec.eval(x); });
  return CellFieldd(grid, std::move(values));
}

double lipschitz_estimate(const CellFieldd& field) {
  const GridSpec& grid = field.grid();
  double worst = 0.0;
  for (CellIndex c = 0; c < grid.total_cells(); ++c) {
    for_each_neighbor(grid, c, 1, [&](CellIndex nb) {
      if (nb > c) worst = std::max(worst, std::abs(field[nb] - field[c]));
    });
  }
  return worst * grid.cells_per_axis();
}

std::vector<PersistencePoint> by_persistence(const PersistenceDiagram& d) {
  std::vector<PersistencePoint> pts = d.points;
  std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    if (a.essential != b.essential) return a.essential;
    if (a.essential) return a.birth > b.birth;
    return a.lifetime() > b.lifetime();
  });
  return pts;
}

}  // namespace

OracleDiagram oracle_diagram(const DensitySpec& spec, int fine_m) {
  OracleDiagram out;
  const CellFieldd field = sample_on_centers(spec, fine_m);
  out.diagram = superlevel_diagram(field);
  out.diagram.points = by_persistence(out.diagram);
  out.lipschitz_estimate = lipschitz_estimate(field);
  out.unstable.assign(out.diagram.points.size(), false);
  if (fine_m / 2 >= 2) {
    const auto coarse = by_persistence(superlevel_diagram(sample_on_centers(spec, fine_m / 2)));
    const double tolerance = 2.0 * out.lipschitz_estimate / fine_m;
    for (std::size_t i = 0; i < out.diagram.points.size(); ++i) {
      const auto& p = out.diagram.points[i];
      if (i >= coarse.size() || coarse[i].essential != p.essential) {
        out.unstable[i] = true;
        continue;
      }
      const double change = p.essential ? std::abs(p.birth - coarse[i].birth)
                                         : std::abs(p.lifetime() - coarse[i].lifetime());
      out.unstable[i] = change > tolerance;
    }
  }
  return out;
}

OracleModes oracle_modes(const DensitySpec& spec) {
  std::vector<Point> locations;
  auto point = [&](std::initializer_list<double> coords) {
    Point p(static_cast<Eigen::Index>(coords.size()));
    Eigen::Index i = 0;
    for (const double c : coords) p[i++] = c;
    locations.push_back(p);
  };
  switch (spec.family()) {
    case DensityFamily::Example2_1:
      point({0.75, 0.75});
      point({0.25, 0.25});
      point({0.75, 0.25});
      point({0.25, 0.75});
      break;
    case DensityFamily::Example2_2:
      point({0.75, 0.5});
      point({0.25, 0.5});
      break;
    case DensityFamily::TwoPointF0:
      locations.push_back(Point::Constant(spec.dim(), 0.5));
      break;
    case DensityFamily::TwoPointF1:
      locations.push_back(Point::Constant(spec.dim(), 0.5 + spec.params().h));
      break;
    default: {
      const OracleDiagram oracle = oracle_diagram(spec, default_oracle_cells(spec.dim()));
      const GridSpec& grid = *oracle.diagram.grid;
      double top = 0.0;
      for (const auto& p : oracle.diagram.points) top = std::max(top, p.birth);
      for (const auto& p : oracle.diagram.points) {
        if (p.essential || p.lifetime() > 1e-3 * top) locations.push_back(grid.cell_center(p.birth_cell));
      }
    }
  }
  OracleModes out;
  PointSet pts(static_cast<Eigen::Index>(locations.size()), spec.dim());
  for (std::size_t i = 0; i < locations.size(); ++i) {
    pts.row(static_cast<Eigen::Index>(i)) = locations[i].transpose();
    out.values.push_back(spec.eval(locations[i]));
  }
  out.locations = ModeSet(spec.dim(), std::move(pts));
  return out;
}

DensitySpec lower_bound_family(LowerBoundKind kind, const LowerBoundParams& params) {
  switch (kind) {
    case LowerBoundKind::DiagramFamily:
      return DensitySpec::lower_bound(params);
    case LowerBoundKind::TwoPointF0:
      return DensitySpec::two_point_f0(params.dim, params.alpha);
    case LowerBoundKind::TwoPointF1:
      return DensitySpec::two_point_f1(params);
  }
  throw std::invalid_argument("lower_bound_family: unknown kind");
}

DensitySpec density_by_name(const std::string& name, const LowerBoundParams& params) {
  if (name == "example1") return DensitySpec::example1();
  if (name == "example2_1") return DensitySpec::example2_1();
  if (name == "example2_2") return DensitySpec::example2_2();
  if (name == "lower_bound") return lower_bound_family(LowerBoundKind::DiagramFamily, params);
  if (name == "two_point_f0") return lower_bound_family(LowerBoundKind::TwoPointF0, params);
  if (name == "two_point_f1") return lower_bound_family(LowerBoundKind::TwoPointF1, params);
  throw std::invalid_argument("unknown density '" + name + "'");
}

DensityPreset preset_for(const DensitySpec& spec) {
  switch (spec.family()) {
    case DensityFamily::Example1:
      return {0.5, 1.0, 0.25};
    case DensityFamily::Example2_1:
      return {0.5, 0.5, 1.0 / 6.0};
    case DensityFamily::Example2_2:
      return {0.5, 0.5, 0.25};
    case DensityFamily::LowerBound:
    case DensityFamily::TwoPointF0:
    case DensityFamily::TwoPointF1:
      return {spec.params().alpha, 1.0, 0.25};
    case DensityFamily::Grid:
      return {1.0, 1.0, 1.0};
  }
  return {0.5, 1.0, 1.0};
}

}  // namespace persmode
