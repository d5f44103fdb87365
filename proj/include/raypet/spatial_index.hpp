#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "raypet/point_cloud.hpp"

namespace raypet {

// Uniform hash grid over a fixed point set. Radius queries are answered by
// scanning the 27 cells around the query, so the cell size must be at least
// the query radius.
class PointIndex {
 public:
  PointIndex() = default;
  PointIndex(std::span<const Point> points, double cell_size);

  // True if some indexed point lies within distance <= radius of p.
  bool any_within(const Point& p, double radius) const;

  // Indices of all points within distance <= radius of p, ascending.
  void within(const Point& p, double radius,
              std::vector<std::size_t>& out) const;

  std::size_t size() const { return points_.size(); }
  double cell_size() const { return cell_; }

 private:
  struct CellKey {
    std::int64_t x, y, z;
    bool operator==(const CellKey&) const = default;
  };
  struct CellHash {
    std::size_t operator()(const CellKey& k) const;
  };
  CellKey key_of(const Point& p) const;

  std::vector<Point> points_;
  double cell_ = 1.0;
  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> cells_;
};

}  // namespace raypet
