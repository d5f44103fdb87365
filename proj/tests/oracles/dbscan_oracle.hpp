#pragma once

// Quadratic DBSCAN written straight from the definitions, used only to
// check the indexed implementation.

#include <cmath>
#include <vector>

#include "raypet/point_cloud.hpp"

namespace oracle {

// true = noise. A point is core when |{q : d(p, q) <= eps}| >= min_points
// (p itself included); border when not core but within eps of a core point;
// noise otherwise.
inline std::vector<bool> dbscan_noise(const std::vector<raypet::Point>& pts, double eps,
                                      int min_points) {
  const std::size_t n = pts.size();
  auto dist = [&](std::size_t a, std::size_t b) {
    const double dx = pts[a].x - pts[b].x, dy = pts[a].y - pts[b].y, dz = pts[a].z - pts[b].z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  };
  std::vector<bool> core(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    int count = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (dist(i, j) <= eps) ++count;
    core[i] = count >= min_points;
  }
  std::vector<bool> noise(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) {
      noise[i] = false;
      continue;
    }
    for (std::size_t j = 0; j < n && noise[i]; ++j)
      if (core[j] && dist(i, j) <= eps) noise[i] = false;
  }
  return noise;
}

}  // namespace oracle
