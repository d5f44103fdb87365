#include "raypet/dbscan.hpp"

#include <deque>

#include "raypet/error.hpp"
#include "raypet/spatial_index.hpp"

namespace raypet {

DbscanResult dbscan(std::span<const Point> points, double eps, int min_points) {
  if (!(eps > 0)) throw ConfigError("dbscan eps must be positive");
  if (min_points < 1) throw ConfigError("dbscan min_points must be >= 1");

  const std::size_t n = points.size();
  DbscanResult result;
  result.cluster.assign(n, DbscanResult::kNoise);
  result.role.assign(n, PointRole::kNoise);
  if (n == 0) return result;

  const PointIndex index(points, eps);
  std::vector<std::vector<std::size_t>> neighbours(n);
  for (std::size_t i = 0; i < n; ++i) {
    index.within(points[i], eps, neighbours[i]);
    if (neighbours[i].size() >= static_cast<std::size_t>(min_points))
      result.role[i] = PointRole::kCore;
  }

  // Expand clusters from core points in index order.
  std::deque<std::size_t> queue;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (result.role[seed] != PointRole::kCore ||
        result.cluster[seed] != DbscanResult::kNoise)
      continue;
    const int id = result.cluster_count++;
    result.cluster[seed] = id;
    queue.assign(1, seed);
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      for (std::size_t nb : neighbours[cur]) {
        if (result.cluster[nb] != DbscanResult::kNoise) continue;
        result.cluster[nb] = id;
        if (result.role[nb] == PointRole::kCore)
          queue.push_back(nb);
        else
          result.role[nb] = PointRole::kBorder;
      }
    }
  }
  return result;
}

}  // namespace raypet
