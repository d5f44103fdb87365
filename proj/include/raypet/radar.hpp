#pragma once

#include <string>
#include <vector>

namespace raypet::radar {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// FMCW chirp configuration. Defaults are the IWR1443 setup used for the
// recordings this pipeline was designed around.
struct RadarConfig {
  int samples_per_chirp = 240;
  int chirps_per_frame = 16;
  double start_frequency_hz = 79.21e9;
  double frame_duration_s = 0.03333;
  double bandwidth_hz = 2.4398e9;
  double pri_s = 64.140e-6;
};

struct ValidationOptions {
  // Require start + bandwidth to fall inside the 76-81 GHz band.
  bool ti_band = false;
};

// Minimum separable distance c / (2 BW). Throws ConfigError if BW <= 0.
double range_resolution(const RadarConfig& config);

// Round-trip propagation delay 2d / c. Throws ConfigError for d < 0.
double round_trip_delay(double distance_m);
double delay_to_range(double delay_s);

// Chirp slope in Hz/s, taken as BW / PRI.
double chirp_slope(const RadarConfig& config);
double beat_frequency_to_range(double beat_hz, const RadarConfig& config);

int frames_per_clip(double clip_duration_s, const RadarConfig& config);

// Returns one message per violated invariant; empty means valid.
std::vector<std::string> validate_config(const RadarConfig& config,
                                         ValidationOptions options = {});

}  // namespace raypet::radar
