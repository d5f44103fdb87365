#include <gtest/gtest.h>

#include "raypet/error.hpp"
#include "raypet/radar.hpp"
#include "raypet/rng.hpp"

using namespace raypet;
using namespace raypet::radar;

TEST(RangeResolution, HalfSpeedOfLightBandwidthGivesOneMetre) {
  RadarConfig c;
  c.bandwidth_hz = kSpeedOfLight / 2;
  EXPECT_DOUBLE_EQ(range_resolution(c), 1.0);
  c.bandwidth_hz = kSpeedOfLight;
  EXPECT_DOUBLE_EQ(range_resolution(c), 0.5);
}

TEST(RangeResolution, DefaultBandwidth) {
  // 299792458 / (2 * 2.4398e9), evaluated by hand.
  EXPECT_NEAR(range_resolution(RadarConfig{}), 0.061438, 1e-6);
}

TEST(RangeResolution, RejectsNonPositiveBandwidth) {
  RadarConfig c;
  c.bandwidth_hz = 0;
  EXPECT_THROW(range_resolution(c), ConfigError);
}

TEST(RangeResolution, StrictlyDecreasingInBandwidth) {
  CounterRng rng{11};
  for (int i = 0; i < 1000; ++i) {
    RadarConfig a, b;
    a.bandwidth_hz = rng.uniform(1e6, 5e9);
    b.bandwidth_hz = a.bandwidth_hz * rng.uniform(1.001, 3.0);
    EXPECT_GT(range_resolution(a), range_resolution(b));
  }
}

TEST(Delay, RoundTrip) {
  EXPECT_EQ(round_trip_delay(0), 0.0);
  EXPECT_NEAR(round_trip_delay(1.30), 8.6727e-9, 1e-13);
  EXPECT_THROW(round_trip_delay(-0.1), ConfigError);
  CounterRng rng{12};
  for (int i = 0; i < 1000; ++i) {
    const double d = rng.uniform(0, 100);
    EXPECT_NEAR(delay_to_range(round_trip_delay(d)), d, 1e-12 * std::max(d, 1e-300));
  }
}

TEST(BeatFrequency, Conversions) {
  RadarConfig c;
  EXPECT_EQ(beat_frequency_to_range(0, c), 0.0);
  EXPECT_NEAR(chirp_slope(c), 3.8039e13, 1e9);
  EXPECT_NEAR(beat_frequency_to_range(1e6, c), 3.941, 1e-3);
  RadarConfig unit;
  unit.bandwidth_hz = kSpeedOfLight / 2;
  unit.pri_s = 1.0;
  EXPECT_DOUBLE_EQ(beat_frequency_to_range(1.0, unit), 1.0);
}

TEST(FramesPerClip, Counts) {
  RadarConfig c;
  EXPECT_EQ(frames_per_clip(10.0, c), 300);
  EXPECT_EQ(frames_per_clip(5.0, c), 150);
  EXPECT_EQ(frames_per_clip(c.frame_duration_s, c), 1);
}

TEST(Validate, DefaultsAreClean) { EXPECT_TRUE(validate_config(RadarConfig{}).empty()); }

TEST(Validate, CollectsEveryViolation) {
  RadarConfig c;
  c.pri_s = 0.01;  // 16 chirps no longer fit in one frame
  EXPECT_EQ(validate_config(c).size(), 1u);
  c.bandwidth_hz = 0;
  EXPECT_EQ(validate_config(c).size(), 2u);
}

TEST(Validate, BandFlagFlagsTheDefaultSweep) {
  // 79.21 GHz + 2.4398 GHz ends at 81.65 GHz, outside 76-81 GHz.
  EXPECT_TRUE(validate_config(RadarConfig{}, {.ti_band = false}).empty());
  EXPECT_EQ(validate_config(RadarConfig{}, {.ti_band = true}).size(), 1u);
  RadarConfig inside;
  inside.start_frequency_hz = 77e9;
  EXPECT_TRUE(validate_config(inside, {.ti_band = true}).empty());
}
