#include "persmode/grid_field.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

namespace persmode {
namespace {

PointSet column(std::initializer_list<double> xs) {
  PointSet p(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) p(i++, 0) = x;
  return p;
}

CellFieldd field1d(std::initializer_list<double> xs) {
  CellFieldd::Values v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return CellFieldd(GridSpec(1, static_cast<int>(xs.size())), v);
}

TEST(GridSpec, BasicShapes) {
  const GridSpec g1 = build_grid(1, 4);
  EXPECT_EQ(g1.total_cells(), 4);
  EXPECT_DOUBLE_EQ(g1.h(), 0.25);
  const GridSpec g2 = build_grid(2, 10);
  EXPECT_EQ(g2.total_cells(), 100);
  EXPECT_DOUBLE_EQ(g2.h(), 0.1);
  EXPECT_THROW(build_grid(3, 1), std::invalid_argument);
  EXPECT_THROW(build_grid(0, 4), std::invalid_argument);
}

TEST(GridSpec, FlatIndexRoundTrip) {
  const GridSpec g(3, 5);
  for (CellIndex c = 0; c < g.total_cells(); ++c) EXPECT_EQ(g.flat_index(g.multi_index(c)), c);
  EXPECT_EQ(g.flat_index({0, 0, 1}), 1);
  EXPECT_EQ(g.flat_index({1, 0, 0}), 25);
}

TEST(GridSpec, CellOfPoint) {
  const GridSpec g(1, 4);
  auto at = [&](double x) { return g.cell_of_point(Point::Constant(1, x)); };
  EXPECT_EQ(at(0.999), 3);
  EXPECT_EQ(at(1.0), 3);
  EXPECT_EQ(at(0.25), 1);
  EXPECT_EQ(at(0.0), 0);
  EXPECT_FALSE(at(-0.01).has_value());
  EXPECT_FALSE(at(1.01).has_value());
}

TEST(GridSpec, CenterLiesInOwnCell) {
  const GridSpec g(2, 7);
  for (CellIndex c = 0; c < g.total_cells(); ++c) EXPECT_EQ(g.cell_of_point(g.cell_center(c)), c);
}

TEST(Histogram, ForcedValues) {
  const GridSpec g(1, 2);
  const auto a = build_histogram(column({0.1, 0.2, 0.3, 0.4}), g);
  EXPECT_DOUBLE_EQ(a[0], 2.0);
  EXPECT_DOUBLE_EQ(a[1], 0.0);
  const auto b = build_histogram(column({0.1, 0.9}), g);
  EXPECT_DOUBLE_EQ(b[0], 1.0);
  EXPECT_DOUBLE_EQ(b[1], 1.0);
}

TEST(Histogram, OutsidePointsCountTowardsN) {
  const auto f = build_histogram(column({0.1, 2.0}), GridSpec(1, 2));
  EXPECT_DOUBLE_EQ(f[0], 1.0);
  EXPECT_DOUBLE_EQ(f[1], 0.0);
}

TEST(Histogram, Errors) {
  EXPECT_THROW(build_histogram(PointSet(0, 1), GridSpec(1, 2)), std::invalid_argument);
  EXPECT_THROW(build_histogram(PointSet::Zero(3, 2), GridSpec(1, 2)), std::invalid_argument);
}

TEST(Histogram, MassConservation) {
  testing::Rng rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int d = 1; d <= 3; ++d) {
    PointSet p(1000, d);
    for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = u(rng);
    const GridSpec g(d, 7);
    const auto f = build_histogram(p, g);
    EXPECT_NEAR(f.values().sum() * g.cell_volume(), 1.0, 1e-12);
  }
}

TEST(CellField, RejectsBadValues) {
  const GridSpec g(1, 2);
  EXPECT_THROW(CellFieldd(g, CellFieldd::Values::Constant(3, 1.0)), std::invalid_argument);
  CellFieldd::Values neg(2);
  neg << 1.0, -1.0;
  EXPECT_THROW(CellFieldd(g, neg), std::invalid_argument);
  CellFieldd::Values nan(2);
  nan << 1.0, std::nan("");
  EXPECT_THROW(CellFieldd(g, nan), std::invalid_argument);
}

TEST(Dilation, Radius) {
  EXPECT_EQ(dilation_radius(1, 1.0), 1);
  EXPECT_EQ(dilation_radius(2, 0.5), 3);
  EXPECT_EQ(dilation_radius(2, 1.0), 2);
  EXPECT_EQ(dilation_radius(4, 1.0), 2);
  EXPECT_EQ(dilation_radius(4, 0.5), 4);
  EXPECT_THROW(dilation_radius(1, 0.0), std::invalid_argument);
  EXPECT_THROW(dilation_radius(1, 1.5), std::invalid_argument);
}

TEST(Dilation, ForcedExamples) {
  const auto a = dilate_max(field1d({1, 0, 0}), 1);
  EXPECT_EQ(a.values()[0], 1);
  EXPECT_EQ(a.values()[1], 1);
  EXPECT_EQ(a.values()[2], 0);
  const auto b = dilate_max(field1d({0, 2, 0, 0, 5}), 2);
  const std::vector<double> want{2, 2, 5, 5, 5};
  for (int i = 0; i < 5; ++i) EXPECT_EQ(b[i], want[i]);
  const auto f = field1d({3, 1, 4, 1, 5});
  EXPECT_TRUE((dilate_max(f, 0).values() == f.values()).all());
  EXPECT_THROW(dilate_max(f, -1), std::invalid_argument);
}

TEST(Dilation, SeparableMatchesDirectDefinition) {
  testing::Rng rng(3);
  for (const GridSpec& g : {GridSpec(1, 9), GridSpec(2, 7), GridSpec(3, 5)}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto f = testing::random_real_field(rng, g, 10.0);
      for (int k = 0; k <= 3; ++k) {
        EXPECT_TRUE((dilate_max(f, k).values() == testing::direct_dilation(f, k).values()).all());
      }
    }
  }
}

TEST(Dilation, Monotone) {
  testing::Rng rng(5);
  const GridSpec g(2, 6);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f1 = testing::random_real_field(rng, g, 5.0);
    const auto f2 = CellFieldd(g, f1.values() + testing::random_real_field(rng, g, 1.0).values());
    for (int k = 0; k <= 2; ++k) {
      EXPECT_TRUE((dilate_max(f1, k).values() <= dilate_max(f2, k).values()).all());
    }
  }
}

TEST(Dilation, Composition) {
  testing::Rng rng(7);
  const GridSpec g(2, 8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = testing::random_int_field(rng, g, 9);
    for (int k1 = 0; k1 <= 2; ++k1) {
      for (int k2 = 0; k2 <= 2; ++k2) {
        EXPECT_TRUE((dilate_max(dilate_max(f, k1), k2).values() == dilate_max(f, k1 + k2).values()).all());
      }
    }
  }
}

// {dilate(f) >= lambda} equals the index dilation of {f >= lambda}.
TEST(Dilation, SuperlevelCommutation) {
  testing::Rng rng(9);
  const GridSpec g(2, 8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = testing::random_int_field(rng, g, 6);
    for (int k = 0; k <= 2; ++k) {
      const auto df = dilate_max(f, k);
      for (int lambda = 1; lambda <= 6; ++lambda) {
        for (CellIndex c = 0; c < g.total_cells(); ++c) {
          bool near = f[c] >= lambda;
          for_each_neighbor(g, c, k, [&](CellIndex nb) { near = near || f[nb] >= lambda; });
          EXPECT_EQ(df[c] >= lambda, near);
        }
      }
    }
  }
}

TEST(Neighbors, CountsRespectBoundary) {
  const GridSpec g(2, 5);
  int count = 0;
  for_each_neighbor(g, g.flat_index({0, 0}), 1, [&](CellIndex) { ++count; });
  EXPECT_EQ(count, 3);
  count = 0;
  for_each_neighbor(g, g.flat_index({2, 2}), 1, [&](CellIndex) { ++count; });
  EXPECT_EQ(count, 8);
}

}  // namespace
}  // namespace persmode
