#include "raypet/spatial_index.hpp"

#include <algorithm>
#include <cmath>

namespace raypet {

std::size_t PointIndex::CellHash::operator()(const CellKey& k) const {
  std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9e3779b97f4a7c15ULL;
  h ^= static_cast<std::uint64_t>(k.y) * 0xc2b2ae3d27d4eb4fULL + (h << 6);
  h ^= static_cast<std::uint64_t>(k.z) * 0x165667b19e3779f9ULL + (h >> 2);
  return static_cast<std::size_t>(h);
}

PointIndex::PointIndex(std::span<const Point> points, double cell_size)
    : points_(points.begin(), points.end()), cell_(cell_size) {
  for (std::size_t i = 0; i < points_.size(); ++i)
    cells_[key_of(points_[i])].push_back(i);
}

PointIndex::CellKey PointIndex::key_of(const Point& p) const {
  return {static_cast<std::int64_t>(std::floor(p.x / cell_)),
          static_cast<std::int64_t>(std::floor(p.y / cell_)),
          static_cast<std::int64_t>(std::floor(p.z / cell_))};
}

bool PointIndex::any_within(const Point& p, double radius) const {
  if (points_.empty()) return false;
  const double r2 = radius * radius;
  const CellKey c = key_of(p);
  for (std::int64_t dx = -1; dx <= 1; ++dx)
    for (std::int64_t dy = -1; dy <= 1; ++dy)
      for (std::int64_t dz = -1; dz <= 1; ++dz) {
        auto it = cells_.find({c.x + dx, c.y + dy, c.z + dz});
        if (it == cells_.end()) continue;
        for (std::size_t i : it->second)
          if (squared_distance(points_[i], p) <= r2) return true;
      }
  return false;
}

void PointIndex::within(const Point& p, double radius,
                        std::vector<std::size_t>& out) const {
  out.clear();
  const double r2 = radius * radius;
  const CellKey c = key_of(p);
  for (std::int64_t dx = -1; dx <= 1; ++dx)
    for (std::int64_t dy = -1; dy <= 1; ++dy)
      for (std::int64_t dz = -1; dz <= 1; ++dz) {
        auto it = cells_.find({c.x + dx, c.y + dy, c.z + dz});
        if (it == cells_.end()) continue;
        for (std::size_t i : it->second)
          if (squared_distance(points_[i], p) <= r2) out.push_back(i);
      }
  std::sort(out.begin(), out.end());
}

}  // namespace raypet
