#include "raypet/synth.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "raypet/error.hpp"
#include "raypet/kernels.hpp"
#include "raypet/rng.hpp"

namespace raypet::synth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Stream purposes within one frame.
enum Stream : std::uint64_t {
  kSubjectStream = 5,
  kBodyStream = 1,
  kTailStream = 2,
  kClutterStream = 3,
  kOutlierStream = 4,
};

struct Vec3 {
  double x = 0, y = 0, z = 0;
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

// A body part: points are drawn uniformly along segment a-b and uniformly
// inside a ball of the given radius around it.
struct Capsule {
  Vec3 a, b;
  double radius = 0.03;
  double weight = 0;
};

struct Pose {
  std::vector<Capsule> parts;
  Vec3 tail_tip;
};

void throw_if(const std::vector<std::string>& violations, const char* what) {
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid " << what << ":";
  for (const auto& v : violations) msg << "\n  " << v;
  throw ConfigError(msg.str());
}

double reflect_into(double x, double lo, double hi) {
  const double span = hi - lo;
  if (span <= 0) return lo;
  const double period = 2.0 * span;
  double r = std::fmod(x - lo, period);
  if (r < 0) r += period;
  return r <= span ? lo + r : hi - (r - span);
}

double walking_margin(const AnimalModel& animal, const SubjectParams& s) {
  return 0.65 * animal.length_m * s.size + 0.1;
}

Pose make_pose(ActivityLabel label, const SubjectParams& s,
               const SceneConfig& scene, const AnimalModel& animal,
               double duration, double t) {
  const double L = animal.length_m * s.size;
  const double H = animal.shoulder_height_m * s.size;
  const double floor_z = -scene.radar_height_m;
  const double dir = s.facing;
  const double xc = body_center_x(label, s, scene, animal, duration, t);
  const double yc = s.distance;
  const PartWeights& w = animal.parts;
  const double breathing =
      label == ActivityLabel::kWalking
          ? 0.0
          : 0.006 * std::sin(kTwoPi * 0.35 * t + s.phase);
  // Body-relative point: forward along the facing direction, lateral in y,
  // height above the floor.
  auto at = [&](double forward, double lateral, double height) {
    return Vec3{xc + dir * forward, yc + lateral, floor_z + height};
  };

  Pose pose;
  auto add = [&](Vec3 a, Vec3 b, double r, double weight) {
    pose.parts.push_back({a, b, r, weight});
  };
  auto standing_legs = [&](double swing_amp, double gait_hz) {
    const double front = 0.28 * L, rear = -0.30 * L;
    const double offsets[4][2] = {{front, 0.08}, {front, -0.08},
                                  {rear, 0.08}, {rear, -0.08}};
    for (int i = 0; i < 4; ++i) {
      // Diagonal pairs move together.
      const double sign = (i == 0 || i == 3) ? 1.0 : -1.0;
      const double swing =
          sign * swing_amp * std::sin(kTwoPi * gait_hz * t + s.phase);
      add(at(offsets[i][0] + swing, offsets[i][1], 0.0),
          at(offsets[i][0], offsets[i][1], 0.65 * H), 0.03 * s.size,
          w.legs / 4);
    }
  };

  switch (label) {
    case ActivityLabel::kStanding:
    case ActivityLabel::kWalking: {
      const bool walking = label == ActivityLabel::kWalking;
      const double gait = 1.8 * s.walking_speed;
      const double bob =
          walking ? 0.01 * std::sin(kTwoPi * 2.0 * gait * t + s.phase) : 0.0;
      add(at(-0.35 * L, 0, 0.80 * H + breathing + bob),
          at(0.30 * L, 0, 0.85 * H + breathing + bob), 0.13 * s.size, w.torso);
      add(at(0.42 * L, 0, 0.95 * H + bob), at(0.50 * L, 0, 1.10 * H + bob),
          0.07 * s.size, w.head);
      standing_legs(walking ? 0.10 : 0.0, gait);
      add(at(-0.40 * L, 0, 0.80 * H), at(-0.55 * L, 0, 0.92 * H), 0.03 * s.size,
          w.tail);
      break;
    }
    case ActivityLabel::kEating: {
      add(at(-0.35 * L, 0, 0.80 * H + breathing),
          at(0.30 * L, 0, 0.78 * H + breathing), 0.13 * s.size, w.torso);
      const double phase = kTwoPi * s.eating_hz * t + s.phase;
      const double dx = 0.03 * std::sin(phase + 1.3);
      const double dz = 0.04 * std::sin(phase);
      const Vec3 head = at(0.58 * L + dx, 0, 0.10 + dz);
      add(at(0.35 * L, 0, 0.75 * H), head, 0.05 * s.size, 0.4 * w.head);
      add(head, head + Vec3{dir * 0.08, 0, -0.02}, 0.06 * s.size,
          0.6 * w.head);
      standing_legs(0.0, 0.0);
      add(at(-0.40 * L, 0, 0.80 * H), at(-0.55 * L, 0, 0.92 * H), 0.03 * s.size,
          w.tail);
      break;
    }
    case ActivityLabel::kSitting: {
      add(at(-0.22 * L, 0, 0.22 * H + breathing),
          at(0.18 * L, 0, 0.80 * H + breathing), 0.13 * s.size, w.torso);
      add(at(0.24 * L, 0, 1.00 * H), at(0.34 * L, 0, 1.12 * H), 0.07 * s.size,
          w.head);
      for (double lateral : {0.08, -0.08})
        add(at(0.18 * L, lateral, 0.0), at(0.18 * L, lateral, 0.62 * H),
            0.03 * s.size, w.legs / 4);
      for (double lateral : {0.10, -0.10})
        add(at(-0.28 * L, lateral, 0.03), at(-0.02 * L, lateral, 0.12), 0.04,
            w.legs / 4);
      add(at(-0.25 * L, 0, 0.03), at(-0.55 * L, 0, 0.03), 0.025, w.tail);
      break;
    }
    case ActivityLabel::kLying: {
      // Absolute heights keep every return within 0.25 m of the floor.
      add(at(-0.35 * L, 0, 0.12 + breathing), at(0.25 * L, 0, 0.12 + breathing),
          0.11, w.torso);
      add(at(0.36 * L, 0, 0.13), at(0.50 * L, 0, 0.15), 0.06, w.head);
      for (double lateral : {0.06, -0.06})
        add(at(0.25 * L, lateral, 0.03), at(0.50 * L, lateral, 0.03), 0.03,
            w.legs / 4);
      for (double lateral : {0.10, -0.10})
        add(at(-0.30 * L, lateral, 0.04), at(-0.10 * L, lateral + 0.02, 0.04),
            0.03, w.legs / 4);
      add(at(-0.45 * L, 0, 0.03), at(-0.65 * L, 0, 0.03), 0.025, w.tail);
      break;
    }
  }
  pose.tail_tip = pose.parts.back().b;
  return pose;
}

Vec3 sample_in_ball(CounterRng& rng, double radius) {
  Vec3 d{rng.normal(), rng.normal(), rng.normal()};
  const double norm = std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
  if (norm == 0) return {};
  const double r = radius * std::cbrt(rng.uniform());
  return d * (r / norm);
}

double radial_velocity(const Vec3& p, const Vec3& v) {
  const double r = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
  if (r == 0) return 0;
  return (p.x * v.x + p.y * v.y + p.z * v.z) / r;
}

Vec3 capsule_mid(const Capsule& c) { return (c.a + c.b) * 0.5; }

Point jittered(const Point& p, double sigma, CounterRng& rng) {
  if (sigma <= 0) return p;
  Point q = p;
  q.x += rng.normal(0, sigma);
  q.y += rng.normal(0, sigma);
  q.z += rng.normal(0, sigma);
  return q;
}

// Static clutter followed by outliers; returns the index of the first
// outlier within the frame.
void add_scene_noise(Frame& frame, const NoiseModel& noise, std::uint64_t seed,
                     nlohmann::json& outlier_tags) {
  CounterRng clutter_rng{seed, frame.index, kClutterStream};
  for (const Point& c : noise.static_clutter_points)
    frame.points.push_back(jittered(c, noise.jitter_sigma, clutter_rng));

  CounterRng out_rng{seed, frame.index, kOutlierStream};
  const int outliers = out_rng.poisson(noise.outlier_rate);
  const Box& box = noise.outlier_region;
  for (int k = 0; k < outliers; ++k) {
    Point p;
    p.x = out_rng.uniform(box.lo[0], box.hi[0]);
    p.y = out_rng.uniform(box.lo[1], box.hi[1]);
    p.z = out_rng.uniform(box.lo[2], box.hi[2]);
    p.velocity = out_rng.uniform(-1.0, 1.0);
    p.intensity = out_rng.uniform(1.0, 5.0);
    outlier_tags.push_back({frame.index, frame.points.size()});
    frame.points.push_back(p);
  }
}

nlohmann::json noise_meta(const NoiseModel& noise) {
  return {{"outlier_rate", noise.outlier_rate},
          {"jitter_sigma", noise.jitter_sigma},
          {"dropout_prob", noise.dropout_prob},
          {"tail_wag_rate", noise.tail_wag_rate},
          {"clutter_points", noise.static_clutter_points.size()}};
}

Point clutter(double x, double y, double z, double intensity) {
  return Point{x, y, z, 0.0, intensity};
}

}  // namespace

NoiseModel default_noise() {
  NoiseModel n;
  n.static_clutter_points = {
      clutter(-0.80, 0.95, -0.45, 25), clutter(-0.80, 0.95, -0.20, 25),
      clutter(0.75, 0.95, -0.45, 18),  clutter(-0.55, 2.10, -0.30, 30),
      clutter(0.10, 2.15, 0.05, 30),   clutter(0.60, 2.10, -0.25, 30)};
  return n;
}

NoiseModel high_noise() {
  NoiseModel n = default_noise();
  for (const Point& p :
       {clutter(-0.30, 1.85, 0.25, 22), clutter(0.35, 1.90, 0.30, 22),
        clutter(0.90, 1.60, -0.10, 20), clutter(-0.95, 1.55, 0.10, 20),
        clutter(0.00, 0.70, -0.48, 15), clutter(-0.50, 0.75, -0.35, 15),
        clutter(0.45, 0.80, 0.20, 15), clutter(0.85, 2.00, 0.30, 26)})
    n.static_clutter_points.push_back(p);
  n.outlier_rate = 8.0;
  n.jitter_sigma = 0.03;
  n.dropout_prob = 0.20;
  n.tail_wag_rate = 4.0;
  return n;
}

NoiseModel zero_noise() {
  NoiseModel n;
  n.outlier_rate = 0;
  n.jitter_sigma = 0;
  n.dropout_prob = 0;
  n.tail_wag_rate = 0;
  return n;
}

std::vector<std::string> validate(const AnimalModel& a) {
  std::vector<std::string> out;
  if (!(a.length_m > 0)) out.push_back("length_m must be positive");
  if (!(a.shoulder_height_m > 0))
    out.push_back("shoulder_height_m must be positive");
  if (!(a.scale > 0)) out.push_back("scale must be positive");
  if (!(a.size_jitter >= 0 && a.size_jitter < 0.5))
    out.push_back("size_jitter must be in [0, 0.5)");
  const PartWeights& w = a.parts;
  if (!(w.torso >= 0 && w.head >= 0 && w.legs >= 0 && w.tail >= 0))
    out.push_back("part weights must be non-negative");
  if (std::abs(w.torso + w.head + w.legs + w.tail - 1.0) > 1e-9)
    out.push_back("part weights must sum to 1");
  return out;
}

std::vector<std::string> validate(const NoiseModel& n, const SceneConfig& scene) {
  std::vector<std::string> out;
  if (!(n.outlier_rate >= 0)) out.push_back("outlier_rate must be >= 0");
  if (!(n.jitter_sigma >= 0)) out.push_back("jitter_sigma must be >= 0");
  if (!(n.dropout_prob >= 0 && n.dropout_prob <= 1))
    out.push_back("dropout_prob must be in [0, 1]");
  if (!(n.tail_wag_rate >= 0)) out.push_back("tail_wag_rate must be >= 0");
  if (n.outlier_region.degenerate())
    out.push_back("outlier_region is degenerate");
  else if (!scene.extent.contains(n.outlier_region))
    out.push_back("outlier_region must lie inside the scene extent");
  for (std::size_t i = 0; i < n.static_clutter_points.size(); ++i) {
    try {
      validate_point(n.static_clutter_points[i]);
    } catch (const ValidationError& e) {
      out.push_back("static_clutter_points[" + std::to_string(i) + "]." +
                    e.what());
    }
  }
  return out;
}

std::vector<std::string> validate(const SceneConfig& s,
                                  const radar::RadarConfig& radar) {
  std::vector<std::string> out;
  if (!(s.subject_distance_m > 0))
    out.push_back("subject_distance_m must be positive");
  if (radar.bandwidth_hz > 0 && radar.samples_per_chirp > 0) {
    const double max_range =
        radar.samples_per_chirp * radar::range_resolution(radar);
    if (s.subject_distance_m + s.distance_spread_m > max_range)
      out.push_back("subject_distance_m beyond radar range");
  }
  if (!(s.radar_height_m > 0)) out.push_back("radar_height_m must be positive");
  if (!(s.points_per_frame > 0))
    out.push_back("points_per_frame must be positive");
  if (!(s.lateral_spread_m >= 0 && s.distance_spread_m >= 0))
    out.push_back("placement spreads must be >= 0");
  if (s.extent.degenerate()) {
    out.push_back("extent is degenerate");
  } else {
    if (std::abs(s.extent.lo[2] + s.radar_height_m) > 1e-9)
      out.push_back("extent z lower bound must equal the floor (-radar_height_m)");
    const Point centre{0, s.subject_distance_m, 0};
    if (!s.extent.contains(centre))
      out.push_back("subject position outside extent");
  }
  return out;
}

SubjectParams draw_subject(ActivityLabel label, const SceneConfig& scene,
                           const AnimalModel& animal) {
  (void)label;
  CounterRng rng{scene.seed, kSubjectStream};
  SubjectParams s;
  s.center_x = rng.uniform(-scene.lateral_spread_m, scene.lateral_spread_m);
  s.distance = scene.subject_distance_m +
               rng.uniform(-scene.distance_spread_m, scene.distance_spread_m);
  s.facing = rng.bernoulli(0.5) ? 1.0 : -1.0;
  s.size = animal.scale *
           (1.0 + rng.uniform(-animal.size_jitter, animal.size_jitter));
  s.eating_hz = rng.uniform(1.0, 2.0);
  s.walking_speed = rng.uniform(0.5, 1.0);
  s.phase = rng.uniform(0.0, kTwoPi);
  return s;
}

double body_center_x(ActivityLabel label, const SubjectParams& s,
                     const SceneConfig& scene, const AnimalModel& animal,
                     double duration_s, double t) {
  if (label != ActivityLabel::kWalking) return s.center_x;
  const double margin = walking_margin(animal, s);
  const double lo = scene.extent.lo[0] + margin;
  const double hi = scene.extent.hi[0] - margin;
  const double start = s.center_x - s.facing * s.walking_speed * duration_s / 2;
  return reflect_into(start + s.facing * s.walking_speed * t, lo, hi);
}

Clip synthesize_clip(ActivityLabel label, double duration_s,
                     const SceneConfig& scene, const AnimalModel& animal,
                     const NoiseModel& noise, const radar::RadarConfig& radar) {
  throw_if(radar::validate_config(radar), "radar config");
  throw_if(validate(scene, radar), "scene config");
  throw_if(validate(animal), "animal model");
  throw_if(validate(noise, scene), "noise model");

  const int frames = radar::frames_per_clip(duration_s, radar);
  const double dr = radar::range_resolution(radar);
  const SubjectParams subject = draw_subject(label, scene, animal);
  const double floor_z = -scene.radar_height_m;
  const double dt = radar.frame_duration_s;
  const std::uint64_t seed = scene.seed;

  Clip clip;
  clip.session_id = std::string(label_name(label));
  clip.label = label;
  clip.frame_duration_s = dt;
  clip.frames.resize(static_cast<std::size_t>(frames));
  std::vector<nlohmann::json> outlier_tags(clip.frames.size(),
                                           nlohmann::json::array());

  kernels::for_each_index(kernels::Exec::kSerial, clip.frames.size(),
                          [&](std::size_t fi) {
    Frame& frame = clip.frames[fi];
    frame.index = fi;
    frame.timestamp = static_cast<double>(fi) * dt;
    const double t = frame.timestamp;
    const Pose pose = make_pose(label, subject, scene, animal, duration_s, t);
    const Pose ahead =
        make_pose(label, subject, scene, animal, duration_s, t + 1e-3);

    CounterRng rng{seed, fi, kBodyStream};
    const int count = rng.poisson(scene.points_per_frame);
    double total_weight = 0;
    for (const Capsule& c : pose.parts) total_weight += c.weight;
    for (int k = 0; k < count; ++k) {
      // Pick a part by weight, then a point inside it.
      double pick = rng.uniform() * total_weight;
      std::size_t part = 0;
      while (part + 1 < pose.parts.size() && pick >= pose.parts[part].weight) {
        pick -= pose.parts[part].weight;
        ++part;
      }
      const Capsule& c = pose.parts[part];
      const double u = rng.uniform();
      Vec3 p = c.a + (c.b - c.a) * u + sample_in_ball(rng, c.radius);
      const Vec3 vel =
          (capsule_mid(ahead.parts[part]) - capsule_mid(c)) * (1.0 / 1e-3);
      const double intensity = rng.uniform(5.0, 15.0);
      const bool dropped = rng.bernoulli(noise.dropout_prob);
      const double nx = rng.normal(), ny = rng.normal(), nz = rng.normal();
      if (dropped) continue;
      if (p.z < floor_z) p.z = floor_z;
      p.y = std::round(p.y / dr) * dr;
      Point q{p.x + noise.jitter_sigma * nx, p.y + noise.jitter_sigma * ny,
              p.z + noise.jitter_sigma * nz, radial_velocity(p, vel), intensity};
      frame.points.push_back(q);
    }

    CounterRng tail_rng{seed, fi, kTailStream};
    const int wag = tail_rng.poisson(noise.tail_wag_rate);
    if (wag > 0) {
      const double w = kTwoPi * 3.0 * t + subject.phase;
      const Vec3 centre = pose.tail_tip +
                          Vec3{-subject.facing * 0.15 + 0.05 * std::cos(w),
                               0.10 * std::sin(w), 0.0};
      const Vec3 vel{-0.05 * kTwoPi * 3.0 * std::sin(w),
                     0.10 * kTwoPi * 3.0 * std::cos(w), 0.0};
      for (int k = 0; k < wag; ++k) {
        Vec3 p = centre + sample_in_ball(tail_rng, 0.05);
        if (p.z < floor_z) p.z = floor_z;
        p.y = std::round(p.y / dr) * dr;
        frame.points.push_back(jittered(
            Point{p.x, p.y, p.z, radial_velocity(p, vel),
                  tail_rng.uniform(2.0, 8.0)},
            noise.jitter_sigma, tail_rng));
      }
    }
    add_scene_noise(frame, noise, seed, outlier_tags[fi]);
  });

  nlohmann::json outliers = nlohmann::json::array();
  for (auto& tags : outlier_tags)
    for (auto& t : tags) outliers.push_back(std::move(t));
  clip.meta = {
      {"kind", "activity"},
      {"generator", "raypet-synth"},
      {"generator_version", kGeneratorVersion},
      {"seed", seed},
      {"duration_s", duration_s},
      {"noise", noise_meta(noise)},
      {"subject",
       {{"center_x", subject.center_x},
        {"distance", subject.distance},
        {"facing", subject.facing},
        {"size", subject.size},
        {"eating_hz", subject.eating_hz},
        {"walking_speed", subject.walking_speed}}},
      {"outliers", std::move(outliers)}};
  return clip;
}

Clip synthesize_background(double duration_s, const SceneConfig& scene,
                           const NoiseModel& noise,
                           const radar::RadarConfig& radar) {
  throw_if(radar::validate_config(radar), "radar config");
  throw_if(validate(scene, radar), "scene config");
  throw_if(validate(noise, scene), "noise model");

  const int frames = radar::frames_per_clip(duration_s, radar);
  Clip clip;
  clip.session_id = "background";
  clip.label = ActivityLabel::kStanding;
  clip.frame_duration_s = radar.frame_duration_s;
  clip.frames.resize(static_cast<std::size_t>(frames));
  nlohmann::json outliers = nlohmann::json::array();
  for (std::size_t fi = 0; fi < clip.frames.size(); ++fi) {
    Frame& frame = clip.frames[fi];
    frame.index = fi;
    frame.timestamp = static_cast<double>(fi) * radar.frame_duration_s;
    add_scene_noise(frame, noise, scene.seed, outliers);
  }
  clip.meta = {{"kind", "background"},
               {"generator", "raypet-synth"},
               {"generator_version", kGeneratorVersion},
               {"seed", scene.seed},
               {"duration_s", duration_s},
               {"noise", noise_meta(noise)},
               {"outliers", std::move(outliers)}};
  return clip;
}

std::uint64_t clip_seed(std::uint64_t base_seed, std::size_t ordinal) {
  return derive_key({base_seed, ordinal, 0xc11bULL});
}

std::vector<Clip> synthesize_dataset(const DatasetSpec& spec,
                                     const SceneConfig& scene,
                                     const AnimalModel& animal,
                                     const NoiseModel& noise,
                                     const radar::RadarConfig& radar) {
  struct Job {
    ActivityLabel label;
    int ordinal_in_label;
    double duration;
  };
  std::vector<Job> jobs;
  for (ActivityLabel label : kAllLabels) {
    const int count = spec.counts[static_cast<std::size_t>(label_index(label))];
    if (count < 0) throw ConfigError("clip counts must be non-negative");
    const double duration = label == ActivityLabel::kWalking
                                ? spec.walking_duration_s
                                : spec.clip_duration_s;
    for (int i = 0; i < count; ++i) jobs.push_back({label, i, duration});
  }
  std::vector<Clip> clips(jobs.size());
  kernels::for_each_index(kernels::default_exec(), jobs.size(),
                          [&](std::size_t i) {
    SceneConfig s = scene;
    s.seed = clip_seed(spec.base_seed, i);
    clips[i] = synthesize_clip(jobs[i].label, jobs[i].duration, s, animal,
                               noise, radar);
    char suffix[16];
    std::snprintf(suffix, sizeof(suffix), "-%03d", jobs[i].ordinal_in_label);
    clips[i].session_id += suffix;
    clips[i].meta["ordinal"] = i;
    clips[i].meta["base_seed"] = spec.base_seed;
  });
  return clips;
}

}  // namespace raypet::synth
