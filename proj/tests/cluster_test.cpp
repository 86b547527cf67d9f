#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "specforge/generators.hpp"

namespace specforge {
namespace {

TEST(KMeans, SeparatesTwoGroups) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0, 0.1);
  std::vector<double> x;
  for (int i = 0; i < 50; ++i) {
    x.push_back(n(rng));
    x.push_back(n(rng));
  }
  for (int i = 0; i < 50; ++i) {
    x.push_back(10 + n(rng));
    x.push_back(10 + n(rng));
  }
  const auto r = kmeans(x, 2, {2, 100, 1});
  for (int i = 1; i < 50; ++i) EXPECT_EQ(r.assignment[i], r.assignment[0]);
  for (int i = 51; i < 100; ++i) EXPECT_EQ(r.assignment[i], r.assignment[50]);
  EXPECT_NE(r.assignment[0], r.assignment[50]);
}

TEST(KMeans, KEqualsNGivesZeroInertia) {
  const std::vector<double> x{0, 0, 1, 0, 0, 1, 5, 5, -3, 2};
  const auto r = kmeans(x, 2, {5, 50, 0});
  EXPECT_EQ(r.inertia, 0.0);
  EXPECT_EQ(std::set<int>(r.assignment.begin(), r.assignment.end()).size(), 5u);
}

TEST(KMeans, DeterministicUnderSeed) {
  const Dataset d = synth_spiral(100, 3, 0.2, 2);
  const auto a = kmeans(d.features(), 2, {30, 300, 17});
  const auto b = kmeans(d.features(), 2, {30, 300, 17});
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.centroids, b.centroids);
}

TEST(KMeans, AssignmentIsNearestCentroid) {
  const Dataset d = synth_spiral(100, 3, 0.2, 2);
  const auto r = kmeans(d.features(), 2, {12, 300, 5});
  ASSERT_EQ(r.centroids.size(), 24u);
  std::set<int> used(r.assignment.begin(), r.assignment.end());
  EXPECT_EQ(used.size(), 12u);
  for (std::size_t i = 0; i < d.rows(); ++i) {
    auto sq = [&](int c) {
      const double dx = d.row(i)[0] - r.centroids[2 * c];
      const double dy = d.row(i)[1] - r.centroids[2 * c + 1];
      return dx * dx + dy * dy;
    };
    for (int c = 0; c < 12; ++c) EXPECT_LE(sq(r.assignment[i]), sq(c) + 1e-12);
  }
}

TEST(KMeans, RejectsBadK) {
  const std::vector<double> x{0, 1, 2};
  EXPECT_THROW(kmeans(x, 1, {0, 10, 0}), std::invalid_argument);
  EXPECT_THROW(kmeans(x, 1, {4, 10, 0}), std::invalid_argument);
}

TEST(GenCluster, SinglePointCluster) {
  const Dataset c({0, 0.1, 100}, 1, {0, 0, 2}, TaskKind::Classification);
  const SpecSet set = gen_cluster(c, {2, 50, 0}, TaskKind::Classification);
  ASSERT_EQ(set.specs.size(), 2u);
  bool found = false;
  for (const auto& s : set.specs) {
    if (s.input == Hyperrectangle({100}, {100})) {
      EXPECT_EQ(s.output, OutputConstraint(ClassLabel{2}));
      found = true;
    }
  }
  EXPECT_TRUE(found);

  const Dataset r({0, 0.1, 100}, 1, {1, 3, 7.5}, TaskKind::Regression);
  const SpecSet rs = gen_cluster(r, {2, 50, 0}, TaskKind::Regression);
  found = false;
  for (const auto& s : rs.specs) {
    if (s.input == Hyperrectangle({100}, {100})) {
      EXPECT_EQ(s.output, OutputConstraint(Interval{7.5, 7.5}));
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(GenCluster, OverlappingBoxesShareAPoint) {
  // With seed 0 the clusters are {(0,0), (2,3), (0,2)} and {(1,9), (6,2)}.
  // Their boxes [0,2]x[0,3] and [1,6]x[2,9] both hold (2,3), whose label
  // breaks the 1-vs-2 tie of the second cluster's own members.
  const std::vector<double> x{0, 0, 1, 9, 2, 3, 0, 2, 6, 2};
  const std::vector<double> y{0, 1, 2, 0, 2};
  const Dataset d(x, 2, y, TaskKind::Classification);
  const auto km = kmeans(x, 2, {2, 100, 0});
  ASSERT_EQ(km.assignment[0], km.assignment[2]);
  ASSERT_EQ(km.assignment[1], km.assignment[4]);
  ASSERT_NE(km.assignment[0], km.assignment[1]);

  const SpecSet set = gen_cluster(d, {2, 100, 0}, TaskKind::Classification);
  ASSERT_EQ(set.specs.size(), 2u);
  const std::vector<double> shared{2, 3};
  for (const auto& s : set.specs) {
    EXPECT_TRUE(oracle::inside({s.input.lower(), s.input.upper()}, shared));
    // Majority over every point inside the box, smallest id on ties.
    int counts[3] = {0, 0, 0};
    for (std::size_t i = 0; i < d.rows(); ++i) {
      const std::vector<double> p(d.row(i).begin(), d.row(i).end());
      if (oracle::inside({s.input.lower(), s.input.upper()}, p)) {
        ++counts[static_cast<int>(d.label(i))];
      }
    }
    int majority = 0;
    for (int c = 1; c < 3; ++c) {
      if (counts[c] > counts[majority]) majority = c;
    }
    EXPECT_EQ(s.output, OutputConstraint(ClassLabel{majority}));
  }
  EXPECT_EQ(set.specs[static_cast<std::size_t>(km.assignment[1])].output,
            OutputConstraint(ClassLabel{2}));
}

TEST(GenCluster, SpiralDeterministicAndValid) {
  const Dataset gen = split(synth_spiral(300, 3, 0.2, 7), {0.9, 7, true}).first;
  const SpecSet a = gen_cluster(gen, {30, 300, 7}, TaskKind::Classification);
  const SpecSet b = gen_cluster(gen, {30, 300, 7}, TaskKind::Classification);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.specs.size(), 30u);
  EXPECT_NO_THROW(a.validate());
  EXPECT_EQ(a.params["k"], 30);
}

}  // namespace
}  // namespace specforge
