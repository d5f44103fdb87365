#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace raypet {

enum class ActivityLabel : int { kEating = 0, kLying, kSitting, kStanding, kWalking };

inline constexpr int kNumLabels = 5;
inline constexpr std::array<ActivityLabel, kNumLabels> kAllLabels = {
    ActivityLabel::kEating, ActivityLabel::kLying, ActivityLabel::kSitting,
    ActivityLabel::kStanding, ActivityLabel::kWalking};

std::string_view label_name(ActivityLabel label);
std::optional<ActivityLabel> parse_label(std::string_view name);
inline int label_index(ActivityLabel label) { return static_cast<int>(label); }
ActivityLabel label_from_index(int index);

// One radar return in the radar frame: y is boresight, x lateral, z up.
struct Point {
  double x = 0, y = 0, z = 0;
  double velocity = 0;   // radial, m/s
  double intensity = 0;  // dimensionless, >= 0

  bool operator==(const Point&) const = default;
};

double distance(const Point& a, const Point& b);
double squared_distance(const Point& a, const Point& b);

struct Frame {
  std::size_t index = 0;
  double timestamp = 0;  // seconds from clip start
  std::vector<Point> points;

  bool operator==(const Frame&) const = default;
};

// A labeled recording session. Background recordings carry
// meta["kind"] == "background"; their label field is unused.
struct Clip {
  std::string session_id;
  ActivityLabel label = ActivityLabel::kStanding;
  double frame_duration_s = 0.03333;
  std::vector<Frame> frames;
  nlohmann::json meta = nlohmann::json::object();

  bool operator==(const Clip&) const = default;
  bool is_background() const;
};

// Throws ValidationError naming the first violated field.
void validate_point(const Point& p);
void validate_clip(const Clip& clip);

struct BoundingBox {
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};
  bool empty = true;

  void extend(const Point& p);
};

struct ClipStats {
  std::size_t frame_count = 0;
  std::size_t total_points = 0;
  std::size_t min_points = 0;
  double mean_points = 0;
  std::size_t max_points = 0;
  BoundingBox bounds;
};

ClipStats clip_stats(const Clip& clip);

// Every point of every frame, in frame order.
std::vector<Point> pool_points(const Clip& clip);

}  // namespace raypet
