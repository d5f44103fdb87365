#pragma once

#include <array>
#include <string>

#include "raypet/point_cloud.hpp"

namespace raypet {

// Axis-aligned box in the radar frame, coordinates ordered (x, y, z).
struct Box {
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};

  bool contains(const Point& p, double margin = 0) const {
    return p.x >= lo[0] - margin && p.x <= hi[0] + margin &&
           p.y >= lo[1] - margin && p.y <= hi[1] + margin &&
           p.z >= lo[2] - margin && p.z <= hi[2] + margin;
  }
  bool degenerate() const {
    return !(lo[0] < hi[0] && lo[1] < hi[1] && lo[2] < hi[2]);
  }
  bool contains(const Box& other) const {
    for (int a = 0; a < 3; ++a)
      if (other.lo[a] < lo[a] || other.hi[a] > hi[a]) return false;
    return true;
  }
  bool operator==(const Box&) const = default;
};

}  // namespace raypet
