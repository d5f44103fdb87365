#include "raypet/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "raypet/error.hpp"

namespace raypet {

namespace {
constexpr std::array<std::string_view, kNumLabels> kLabelNames = {
    "eating", "lying", "sitting", "standing", "walking"};
}

std::string_view label_name(ActivityLabel label) {
  return kLabelNames.at(static_cast<std::size_t>(label));
}

std::optional<ActivityLabel> parse_label(std::string_view name) {
  for (int i = 0; i < kNumLabels; ++i)
    if (kLabelNames[i] == name) return static_cast<ActivityLabel>(i);
  return std::nullopt;
}

ActivityLabel label_from_index(int index) {
  if (index < 0 || index >= kNumLabels)
    throw ValidationError("label", "index " + std::to_string(index) +
                                       " out of range");
  return static_cast<ActivityLabel>(index);
}

double squared_distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

double distance(const Point& a, const Point& b) {
  return std::sqrt(squared_distance(a, b));
}

bool Clip::is_background() const {
  auto it = meta.find("kind");
  return it != meta.end() && it->is_string() && *it == "background";
}

void validate_point(const Point& p) {
  if (!std::isfinite(p.x)) throw ValidationError("x", "not finite");
  if (!std::isfinite(p.y)) throw ValidationError("y", "not finite");
  if (!std::isfinite(p.z)) throw ValidationError("z", "not finite");
  if (!std::isfinite(p.velocity))
    throw ValidationError("velocity", "not finite");
  if (!std::isfinite(p.intensity))
    throw ValidationError("intensity", "not finite");
  if (p.intensity < 0) throw ValidationError("intensity", "negative");
}

void validate_clip(const Clip& clip) {
  if (clip.session_id.empty())
    throw ValidationError("session_id", "empty");
  if (!(clip.frame_duration_s > 0) || !std::isfinite(clip.frame_duration_s))
    throw ValidationError("frame_duration_s", "must be positive");
  for (std::size_t i = 0; i < clip.frames.size(); ++i) {
    const Frame& f = clip.frames[i];
    if (f.index != i)
      throw ValidationError("index", "non-contiguous frame index " +
                                         std::to_string(f.index) +
                                         " at position " + std::to_string(i));
    const double expected = static_cast<double>(f.index) * clip.frame_duration_s;
    if (!std::isfinite(f.timestamp) || std::abs(f.timestamp - expected) > 1e-9)
      throw ValidationError("t", "timestamp of frame " + std::to_string(i) +
                                     " is not index * frame_duration");
    for (const Point& p : f.points) validate_point(p);
  }
}

void BoundingBox::extend(const Point& p) {
  const std::array<double, 3> c{p.x, p.y, p.z};
  if (empty) {
    lo = hi = c;
    empty = false;
    return;
  }
  for (int a = 0; a < 3; ++a) {
    lo[a] = std::min(lo[a], c[a]);
    hi[a] = std::max(hi[a], c[a]);
  }
}

ClipStats clip_stats(const Clip& clip) {
  ClipStats s;
  s.frame_count = clip.frames.size();
  if (clip.frames.empty()) return s;
  s.min_points = std::numeric_limits<std::size_t>::max();
  for (const Frame& f : clip.frames) {
    const std::size_t n = f.points.size();
    s.total_points += n;
    s.min_points = std::min(s.min_points, n);
    s.max_points = std::max(s.max_points, n);
    for (const Point& p : f.points) s.bounds.extend(p);
  }
  s.mean_points =
      static_cast<double>(s.total_points) / static_cast<double>(s.frame_count);
  return s;
}

std::vector<Point> pool_points(const Clip& clip) {
  std::vector<Point> out;
  for (const Frame& f : clip.frames)
    out.insert(out.end(), f.points.begin(), f.points.end());
  return out;
}

}  // namespace raypet
