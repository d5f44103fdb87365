#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "raypet/geometry.hpp"
#include "raypet/point_cloud.hpp"
#include "raypet/radar.hpp"

namespace raypet::synth {

inline constexpr int kGeneratorVersion = 1;

// Share of body returns coming from each part.
struct PartWeights {
  double torso = 0.50;
  double head = 0.15;
  double legs = 0.30;
  double tail = 0.05;
};

struct AnimalModel {
  double length_m = 1.10;
  double shoulder_height_m = 0.75;
  double scale = 1.0;         // mass proxy, multiplies body dimensions
  double size_jitter = 0.05;  // per-session relative size variation
  PartWeights parts;
};

struct NoiseModel {
  std::vector<Point> static_clutter_points;
  double outlier_rate = 1.0;    // expected outliers per frame
  double jitter_sigma = 0.02;   // per-axis position noise, meters
  double dropout_prob = 0.10;   // chance a body return is missing
  double tail_wag_rate = 2.0;   // expected irrelevant-motion points per frame
  // Outliers are drawn uniformly from this box.
  Box outlier_region{{-1.0, 0.3, -0.5}, {1.0, 2.3, 0.4}};
};

struct SceneConfig {
  double subject_distance_m = 1.30;
  double radar_height_m = 0.50;
  double points_per_frame = 40;
  std::uint64_t seed = 0;
  // Per-session placement variation around (0, subject_distance).
  double lateral_spread_m = 0.20;
  double distance_spread_m = 0.10;
  Box extent{{-3.5, 0.2, -0.5}, {3.5, 3.0, 1.0}};
};

// Moderate noise: a few pieces of furniture, light outliers and jitter.
NoiseModel default_noise();
// Heavy corruption: dense clutter and many outliers inside the voxel box.
NoiseModel high_noise();
NoiseModel zero_noise();

std::vector<std::string> validate(const AnimalModel& animal);
std::vector<std::string> validate(const NoiseModel& noise,
                                  const SceneConfig& scene);
std::vector<std::string> validate(const SceneConfig& scene,
                                  const radar::RadarConfig& radar);

// Per-session subject parameters drawn from the clip seed.
struct SubjectParams {
  double center_x = 0;
  double distance = 1.30;
  double facing = 1;  // +1 head towards +x, -1 towards -x
  double size = 1.0;
  double eating_hz = 1.5;
  double walking_speed = 0.75;  // m/s
  double phase = 0;
};

SubjectParams draw_subject(ActivityLabel label, const SceneConfig& scene,
                           const AnimalModel& animal);

// Lateral position of the body centre at time t, after the walking path has
// been folded back into the scene extent. Static poses stay at center_x.
double body_center_x(ActivityLabel label, const SubjectParams& subject,
                     const SceneConfig& scene, const AnimalModel& animal,
                     double duration_s, double t);

// Outlier points are listed in meta["outliers"] as [frame, point] pairs.
Clip synthesize_clip(ActivityLabel label, double duration_s,
                     const SceneConfig& scene, const AnimalModel& animal,
                     const NoiseModel& noise, const radar::RadarConfig& radar);

// Empty scene: jittered static clutter plus outliers, meta["kind"] ==
// "background".
Clip synthesize_background(double duration_s, const SceneConfig& scene,
                           const NoiseModel& noise,
                           const radar::RadarConfig& radar);

struct DatasetSpec {
  std::array<int, kNumLabels> counts{1, 1, 1, 1, 1};
  double clip_duration_s = 10.0;
  double walking_duration_s = 5.0;
  std::uint64_t base_seed = 0;
};

std::uint64_t clip_seed(std::uint64_t base_seed, std::size_t ordinal);

// Clips ordered by label, then ordinal within label. Session ids are
// "<label>-<nnn>"; clip seeds come from clip_seed(base_seed, ordinal).
std::vector<Clip> synthesize_dataset(const DatasetSpec& spec,
                                     const SceneConfig& scene,
                                     const AnimalModel& animal,
                                     const NoiseModel& noise,
                                     const radar::RadarConfig& radar);

}  // namespace raypet::synth
