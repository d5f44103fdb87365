#pragma once

#include <span>
#include <vector>

#include "raypet/point_cloud.hpp"

namespace raypet {

enum class PointRole { kCore, kBorder, kNoise };

struct DbscanResult {
  // Cluster id per point, or kNoise for noise points. Ids are assigned in
  // order of the first core point of each cluster.
  std::vector<int> cluster;
  std::vector<PointRole> role;
  int cluster_count = 0;

  static constexpr int kNoise = -1;
};

// Density-based clustering in 3-D Euclidean space. A point is core when at
// least min_points points (itself included) lie within distance <= eps.
DbscanResult dbscan(std::span<const Point> points, double eps, int min_points);

}  // namespace raypet
