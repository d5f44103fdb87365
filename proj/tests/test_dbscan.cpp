#include <gtest/gtest.h>

#include "oracles/dbscan_oracle.hpp"
#include "raypet/dbscan.hpp"
#include "raypet/error.hpp"
#include "raypet/preprocess.hpp"
#include "support.hpp"

using namespace raypet;

namespace {

std::vector<Point> survivors_by_oracle(const std::vector<Point>& pts, double eps, int min_points) {
  const auto noise = oracle::dbscan_noise(pts, eps, min_points);
  std::vector<Point> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!noise[i]) out.push_back(pts[i]);
  return out;
}

}  // namespace

TEST(Dbscan, EmptyFrame) {
  const Frame f = preprocess::dbscan_denoise(Frame{}, 0.5, 2);
  EXPECT_TRUE(f.points.empty());
}

TEST(Dbscan, PairWithinEpsKept) {
  Frame f;
  f.points = {{0, 1, 0, 0, 1}, {0.4, 1, 0, 0, 1}};
  EXPECT_EQ(preprocess::dbscan_denoise(f, 0.5, 2).points.size(), 2u);
}

TEST(Dbscan, IsolatedPointRemoved) {
  Frame f;
  f.points = {{0, 1, 0, 0, 1}, {0.1, 1, 0, 0, 1}, {0.05, 1.1, 0, 0, 1}, {3, 1, 0, 0, 1}};
  const Frame out = preprocess::dbscan_denoise(f, 0.5, 2);
  ASSERT_EQ(out.points.size(), 3u);
  for (const auto& p : out.points) EXPECT_LT(p.x, 1.0);
}

TEST(Dbscan, DistanceExactlyEpsCounts) {
  Frame f;
  f.points = {{0, 0, 0, 0, 1}, {0.5, 0, 0, 0, 1}};
  EXPECT_EQ(preprocess::dbscan_denoise(f, 0.5, 2).points.size(), 2u);
}

TEST(Dbscan, BorderPointsKeptAndAllClustersRetained) {
  // Chain a - b - c with min_points 3: only b is core, a and c are border.
  std::vector<Point> pts = {{0, 0, 0, 0, 1}, {0.4, 0, 0, 0, 1}, {0.8, 0, 0, 0, 1},
                            // a second, smaller cluster far away
                            {5, 5, 5, 0, 1}, {5.1, 5, 5, 0, 1}, {5, 5.1, 5, 0, 1}};
  const auto r = dbscan(pts, 0.45, 3);
  EXPECT_EQ(r.role[0], PointRole::kBorder);
  EXPECT_EQ(r.role[1], PointRole::kCore);
  EXPECT_EQ(r.role[2], PointRole::kBorder);
  EXPECT_EQ(r.cluster_count, 2);
  EXPECT_EQ(r.cluster[0], 0);
  EXPECT_EQ(r.cluster[3], 1);
  Frame f;
  f.points = pts;
  EXPECT_EQ(preprocess::dbscan_denoise(f, 0.45, 3).points.size(), 6u);
}

TEST(Dbscan, MinPointsOneKeepsEverything) {
  CounterRng rng{8};
  Frame f;
  f.points = support::random_points(rng, 50, -10, 10);
  EXPECT_EQ(preprocess::dbscan_denoise(f, 0.1, 1).points, f.points);
}

TEST(Dbscan, InvalidParameters) {
  std::vector<Point> pts(3);
  EXPECT_THROW(dbscan(pts, 0.0, 2), ConfigError);
  EXPECT_THROW(dbscan(pts, 0.5, 0), ConfigError);
}

TEST(Dbscan, MatchesBruteForceOracle) {
  CounterRng rng{0xdb5c};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng.below(201);
    const double eps = rng.uniform(0.1, 1.0);
    const int min_points = 1 + static_cast<int>(rng.below(5));
    // vary density so every role shows up
    const double half = rng.uniform(0.3, 4.0);
    Frame f;
    f.points = support::random_points(rng, n, -half, half);
    if (n > 3 && trial % 4 == 0) f.points[1] = f.points[0];  // duplicates
    const Frame out = preprocess::dbscan_denoise(f, eps, min_points);
    ASSERT_EQ(out.points, survivors_by_oracle(f.points, eps, min_points))
        << "trial " << trial << " n=" << n << " eps=" << eps << " min=" << min_points;

    const auto r = dbscan(f.points, eps, min_points);
    const auto noise = oracle::dbscan_noise(f.points, eps, min_points);
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_EQ(r.role[i] == PointRole::kNoise, static_cast<bool>(noise[i]));
      ASSERT_EQ(r.cluster[i] == DbscanResult::kNoise, static_cast<bool>(noise[i]));
    }
  }
}
