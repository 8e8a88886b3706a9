#include "persmode/diagram_metrics.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <limits>

namespace persmode {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PersistenceDiagram diagram(std::initializer_list<PersistencePoint> pts) {
  PersistenceDiagram d;
  d.points = pts;
  return d;
}

ModeSet values(std::initializer_list<double> xs) { return ModeSet::from_values(xs); }

TEST(Bottleneck, ForcedExamples) {
  EXPECT_DOUBLE_EQ(bottleneck(diagram({{3, 1, 0, false}}), PersistenceDiagram{}), 1.0);
  EXPECT_DOUBLE_EQ(bottleneck(diagram({{4, 1, 0, false}}), diagram({{4, 2, 0, false}})), 1.0);
  EXPECT_DOUBLE_EQ(bottleneck(PersistenceDiagram{}, PersistenceDiagram{}), 0.0);
}

TEST(Bottleneck, EssentialClasses) {
  const auto a = diagram({{5, 0, 0, true}, {2, 1, 1, false}});
  const auto b = diagram({{4.5, 0, 0, true}});
  EXPECT_DOUBLE_EQ(bottleneck(a, b), 0.5);
  EXPECT_EQ(bottleneck(a, PersistenceDiagram{}), kInf);
  EXPECT_EQ(bottleneck(diagram({{1, 0, 0, true}, {2, 0, 1, true}}), b), kInf);
}

TEST(Bottleneck, AgreesWithExhaustiveOracle) {
  testing::Rng rng(31);
  std::uniform_int_distribution<int> size(0, 5), ess(0, 1);
  for (int trial = 0; trial < 150; ++trial) {
    const int e = ess(rng);
    const auto a = testing::random_diagram(rng, size(rng), e);
    const auto b = testing::random_diagram(rng, size(rng), e);
    EXPECT_NEAR(bottleneck(a, b), testing::exhaustive_bottleneck(a, b), 1e-12);
  }
}

TEST(Bottleneck, SymmetricAndTriangle) {
  testing::Rng rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = testing::random_diagram(rng, 4, 1);
    const auto b = testing::random_diagram(rng, 5, 1);
    const auto c = testing::random_diagram(rng, 3, 1);
    EXPECT_EQ(bottleneck(a, b), bottleneck(b, a));
    EXPECT_LE(bottleneck(a, c), bottleneck(a, b) + bottleneck(b, c) + 1e-9);
    EXPECT_EQ(bottleneck(a, a), 0.0);
  }
}

TEST(BottleneckAssignment, ForbiddenEdges) {
  Eigen::MatrixXd m(2, 2);
  m << kInf, 1, 2, kInf;
  const auto r = bottleneck_assignment(m);
  EXPECT_DOUBLE_EQ(r.cost, 2.0);
  EXPECT_EQ(r.match, (std::vector<int>{1, 0}));
  m << kInf, kInf, 1, 1;
  EXPECT_EQ(bottleneck_assignment(m).cost, kInf);
  EXPECT_DOUBLE_EQ(bottleneck_assignment(Eigen::MatrixXd(0, 0)).cost, 0.0);
}

TEST(Truncate, ForcedExamples) {
  const auto d = diagram({{3, 0, 0, true}, {2, 1.9, 1, false}});
  EXPECT_EQ(truncate(d, 0.2).size(), 1u);
  EXPECT_TRUE(truncate(d, 0.2).points[0].essential);
  const auto kept = diagram({{3, 0, 0, true}, {2, 1, 1, false}});
  EXPECT_TRUE(same_points(truncate(kept, 0.5), kept));
  EXPECT_EQ(truncate(kept, 1.0).size(), 1u);
  EXPECT_EQ(truncate_inclusive(kept, 1.0).size(), 2u);
}

TEST(Truncate, BoundByRemovedHalfLifetimes) {
  testing::Rng rng(35);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = testing::random_diagram(rng, 6, 1);
    const double l = u(rng);
    const auto t = truncate(d, l);
    double removed = 0.0, smallest_kept = kInf, largest_removed = 0.0;
    for (const auto& p : d.points) {
      if (p.essential) continue;
      if (p.lifetime() > l) {
        smallest_kept = std::min(smallest_kept, p.lifetime());
      } else {
        removed = std::max(removed, p.lifetime() / 2);
        largest_removed = std::max(largest_removed, p.lifetime());
      }
    }
    const double db = bottleneck(d, t);
    EXPECT_LE(db, removed + 1e-12);
    EXPECT_NEAR(db, testing::exhaustive_bottleneck(d, t), 1e-12);
    if (largest_removed <= smallest_kept) EXPECT_NEAR(db, removed, 1e-12);
  }
}

TEST(MatchingDistance, ForcedExamples) {
  const auto a = values({0.1, 0.9});
  EXPECT_DOUBLE_EQ(matching_distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(matching_distance(values({0.2}), ModeSet{}), 0.2);
  EXPECT_NEAR(matching_distance(a, values({0.15, 0.85})), 0.05, 1e-15);
  EXPECT_THROW(matching_distance(ModeSet(2, PointSet::Zero(1, 2)), a), std::invalid_argument);
}

TEST(MatchingDistance, PairsRecordPadding) {
  const auto m = match_modes(values({0.5, 0.9}), values({0.88}));
  EXPECT_NEAR(m.distance, 0.5, 1e-15);
  ASSERT_EQ(m.pairs.size(), 2u);
  int padded = 0;
  for (const auto& [i, j] : m.pairs) padded += (j < 0);
  EXPECT_EQ(padded, 1);
}

TEST(MatchingDistance, AgreesWithExhaustiveOracle) {
  testing::Rng rng(37);
  std::uniform_int_distribution<int> count(0, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = testing::random_mode_set(rng, 2, count(rng));
    const auto b = testing::random_mode_set(rng, 2, count(rng));
    EXPECT_NEAR(matching_distance(a, b), testing::exhaustive_matching_distance(a, b), 1e-15);
    EXPECT_EQ(matching_distance(a, b), matching_distance(b, a));
  }
}

TEST(Hausdorff, ForcedExamplesAndBound) {
  EXPECT_DOUBLE_EQ(hausdorff(values({0.0, 1.0}), values({0.5})), 0.5);
  EXPECT_DOUBLE_EQ(hausdorff(values({0.3}), values({0.3})), 0.0);
  EXPECT_THROW(hausdorff(ModeSet{}, values({0.3})), std::invalid_argument);
  testing::Rng rng(39);
  std::uniform_int_distribution<int> count(1, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = count(rng);
    const auto a = testing::random_mode_set(rng, 2, k);
    const auto b = testing::random_mode_set(rng, 2, k);
    EXPECT_LE(hausdorff(a, b), matching_distance(a, b) + 1e-15);
  }
}

// With unequal sizes the zero padding can undercut the Hausdorff distance.
TEST(Hausdorff, PaddingCanBeatItForUnequalSizes) {
  const auto a = values({0.05, 0.9});
  const auto b = values({0.9});
  EXPECT_DOUBLE_EQ(hausdorff(a, b), 0.85);
  EXPECT_DOUBLE_EQ(matching_distance(a, b), 0.05);
}

}  // namespace
}  // namespace persmode
