#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "raypet/error.hpp"
#include "raypet/preprocess.hpp"
#include "raypet/radar.hpp"
#include "raypet/synth.hpp"

using namespace raypet;
using namespace raypet::synth;

namespace {

SceneConfig scene_with(std::uint64_t seed) {
  SceneConfig s;
  s.seed = seed;
  return s;
}

double centroid_x(const Frame& f) {
  double sx = 0;
  for (const auto& p : f.points) sx += p.x;
  return f.points.empty() ? 0 : sx / static_cast<double>(f.points.size());
}

}  // namespace

TEST(Synth, SameInputsSameClip) {
  for (auto label : kAllLabels) {
    const Clip a = synthesize_clip(label, 3.0, scene_with(42), {}, default_noise(), {});
    const Clip b = synthesize_clip(label, 3.0, scene_with(42), {}, default_noise(), {});
    EXPECT_EQ(a, b);
    const Clip c = synthesize_clip(label, 3.0, scene_with(43), {}, default_noise(), {});
    EXPECT_NE(a, c);
  }
}

TEST(Synth, FrameCountFollowsRadar) {
  const Clip c = synthesize_clip(ActivityLabel::kSitting, 10.0, scene_with(1), {},
                                 default_noise(), {});
  EXPECT_EQ(c.frames.size(), static_cast<std::size_t>(radar::frames_per_clip(10.0, {})));
  EXPECT_NO_THROW(validate_clip(c));
}

TEST(Synth, LyingStaysNearFloor) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Clip c = synthesize_clip(ActivityLabel::kLying, 10.0, scene_with(seed), {},
                                   zero_noise(), {});
    double top = -1e9;
    std::size_t n = 0;
    for (const auto& f : c.frames)
      for (const auto& p : f.points) {
        top = std::max(top, p.z);
        ++n;
      }
    ASSERT_GT(n, 0u);
    EXPECT_LE(top, -0.50 + 0.25) << "seed " << seed;
  }
}

TEST(Synth, WalkingTranslatesMonotonically) {
  const AnimalModel animal;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const SceneConfig scene = scene_with(seed);
    const double dur = 5.0;
    const Clip c = synthesize_clip(ActivityLabel::kWalking, dur, scene, animal, zero_noise(), {});
    const SubjectParams subj = draw_subject(ActivityLabel::kWalking, scene, animal);

    double prev = body_center_x(ActivityLabel::kWalking, subj, scene, animal, dur, 0.0);
    for (const auto& f : c.frames) {
      const double x = body_center_x(ActivityLabel::kWalking, subj, scene, animal, dur, f.timestamp);
      EXPECT_GE(subj.facing * (x - prev), -1e-12);
      prev = x;
    }
    const double span = subj.facing * (body_center_x(ActivityLabel::kWalking, subj, scene, animal, dur, dur) -
                                       body_center_x(ActivityLabel::kWalking, subj, scene, animal, dur, 0.0));
    EXPECT_GE(span, 2.5 - 1e-9) << "seed " << seed;

    // least-squares slope of the observed point centroids
    double st = 0, sx = 0, stt = 0, stx = 0, n = 0;
    for (const auto& f : c.frames) {
      if (f.points.empty()) continue;
      const double x = centroid_x(f);
      st += f.timestamp;
      sx += x;
      stt += f.timestamp * f.timestamp;
      stx += f.timestamp * x;
      n += 1;
    }
    const double slope = (n * stx - st * sx) / (n * stt - st * st);
    EXPECT_GE(slope * subj.facing * dur, 2.5 * 0.95) << "seed " << seed;
  }
}

TEST(Synth, StaticPosesDoNotMove) {
  const AnimalModel animal;
  const SceneConfig scene = scene_with(9);
  for (auto label : {ActivityLabel::kLying, ActivityLabel::kSitting, ActivityLabel::kStanding,
                     ActivityLabel::kEating}) {
    const SubjectParams s = draw_subject(label, scene, animal);
    EXPECT_EQ(body_center_x(label, s, scene, animal, 10, 0), body_center_x(label, s, scene, animal, 10, 7.3));
  }
}

TEST(Synth, RangeAxisQuantized) {
  const double dr = radar::range_resolution({});
  const Clip c = synthesize_clip(ActivityLabel::kStanding, 1.0, scene_with(4), {}, zero_noise(), {});
  for (const auto& f : c.frames)
    for (const auto& p : f.points) {
      const double q = p.y / dr;
      EXPECT_NEAR(q, std::round(q), 1e-6);
    }
}

TEST(Synth, PointsStayInsideExtent) {
  for (auto noise : {default_noise(), high_noise()}) {
    for (auto label : kAllLabels) {
      const SceneConfig scene = scene_with(label_index(label) + 100);
      const Clip c = synthesize_clip(label, 5.0, scene, {}, noise, {});
      const double slack = 3 * noise.jitter_sigma + 1e-12;
      for (const auto& f : c.frames)
        for (const auto& p : f.points) {
          ASSERT_NO_THROW(validate_point(p));
          ASSERT_TRUE(scene.extent.contains(p, slack))
              << label_name(label) << " " << p.x << " " << p.y << " " << p.z;
        }
    }
  }
}

TEST(Synth, OutliersAreTagged) {
  NoiseModel noise = zero_noise();
  noise.outlier_rate = 3;
  const Clip c = synthesize_clip(ActivityLabel::kStanding, 2.0, scene_with(5), {}, noise, {});
  ASSERT_TRUE(c.meta.contains("outliers"));
  for (const auto& tag : c.meta["outliers"]) {
    const auto f = tag[0].get<std::size_t>();
    const auto i = tag[1].get<std::size_t>();
    ASSERT_LT(f, c.frames.size());
    ASSERT_LT(i, c.frames[f].points.size());
    EXPECT_TRUE(noise.outlier_region.contains(c.frames[f].points[i]));
  }
}

TEST(Background, ZeroNoiseEqualsClutterList) {
  NoiseModel noise = default_noise();
  noise.outlier_rate = 0;
  noise.jitter_sigma = 0;
  const Clip bg = synthesize_background(10.0, scene_with(1), noise, {});
  EXPECT_TRUE(bg.is_background());
  ASSERT_EQ(bg.frames.size(), 300u);
  for (const auto& f : bg.frames) EXPECT_EQ(f.points, noise.static_clutter_points);
}

TEST(Background, EmptyWhenNothingToShow) {
  const Clip bg = synthesize_background(10.0, scene_with(1), zero_noise(), {});
  for (const auto& f : bg.frames) EXPECT_TRUE(f.points.empty());
}

TEST(Background, OutlierCountConcentrates) {
  NoiseModel noise = zero_noise();
  noise.outlier_rate = 2.0;
  double total = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Clip bg = synthesize_background(10.0, scene_with(seed), noise, {});
    ASSERT_EQ(bg.frames.size(), 300u);
    std::size_t n = 0;
    for (const auto& f : bg.frames) n += f.points.size();
    EXPECT_EQ(n, bg.meta["outliers"].size());
    total += static_cast<double>(n);
  }
  const double mean = total / 10;
  EXPECT_GE(mean, 600 * 0.8);
  EXPECT_LE(mean, 600 * 1.2);
}

TEST(Dataset, OnePerLabel) {
  const auto clips = synthesize_dataset({}, {}, {}, default_noise(), {});
  ASSERT_EQ(clips.size(), 5u);
  std::set<std::string> ids;
  for (const auto& c : clips) {
    ids.insert(c.session_id);
    const std::size_t want = c.label == ActivityLabel::kWalking ? 150u : 300u;
    EXPECT_EQ(c.frames.size(), want) << c.session_id;
  }
  EXPECT_EQ(ids.size(), 5u);
  EXPECT_EQ(clips[0].session_id, "eating-000");
}

TEST(Dataset, SameBaseSeedSameDataset) {
  DatasetSpec spec;
  spec.counts = {2, 1, 1, 1, 2};
  spec.clip_duration_s = 1.0;
  spec.walking_duration_s = 0.5;
  spec.base_seed = 77;
  const auto a = synthesize_dataset(spec, {}, {}, default_noise(), {});
  const auto b = synthesize_dataset(spec, {}, {}, default_noise(), {});
  EXPECT_EQ(a, b);
  spec.base_seed = 78;
  EXPECT_NE(a, synthesize_dataset(spec, {}, {}, default_noise(), {}));
}

TEST(Dataset, PublishedDurationOrder) {
  const DatasetSpec spec;
  const double total = 44 * 4 * spec.clip_duration_s + 44 * spec.walking_duration_s;
  EXPECT_GE(total, 1980);
  EXPECT_LE(total, 2200);
}

TEST(Synth, LabelsSeparateInHeightProfile) {
  // Mean normalized occupancy per z layer, noise free.
  const int layers = 10;
  const Box box{{-1.0, 0.3, -0.5}, {1.0, 2.3, 0.5}};
  std::vector<std::vector<double>> profile(kNumLabels, std::vector<double>(layers, 0));
  for (auto label : kAllLabels) {
    auto& prof = profile[static_cast<std::size_t>(label_index(label))];
    double total = 0;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const Clip c = synthesize_clip(label, 5.0, scene_with(seed), {}, zero_noise(), {});
      for (const auto& f : c.frames) {
        const auto g = preprocess::voxelize(f, {layers, 1, 1}, box);
        for (int z = 0; z < layers; ++z) prof[z] += g.counts[static_cast<std::size_t>(z)];
        total += static_cast<double>(g.total());
      }
    }
    for (auto& v : prof) v /= total;
  }
  for (int a = 0; a < kNumLabels; ++a)
    for (int b = a + 1; b < kNumLabels; ++b) {
      double l1 = 0;
      for (int z = 0; z < layers; ++z) l1 += std::abs(profile[a][z] - profile[b][z]);
      EXPECT_GT(l1, 0.01) << label_name(label_from_index(a)) << " vs "
                          << label_name(label_from_index(b));
    }
}

TEST(Synth, InvalidConfigsRejected) {
  AnimalModel bad;
  bad.parts.tail = 0.5;
  EXPECT_FALSE(validate(bad).empty());
  EXPECT_THROW(synthesize_clip(ActivityLabel::kEating, 1, {}, bad, default_noise(), {}), Error);
  NoiseModel noisy = default_noise();
  noisy.dropout_prob = 1.5;
  EXPECT_FALSE(validate(noisy, SceneConfig{}).empty());
  SceneConfig far;
  far.subject_distance_m = 100;
  EXPECT_FALSE(validate(far, radar::RadarConfig{}).empty());
  EXPECT_TRUE(validate(SceneConfig{}, radar::RadarConfig{}).empty());
  EXPECT_TRUE(validate(high_noise(), SceneConfig{}).empty());
}
