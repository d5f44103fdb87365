#include "raypet/radar.hpp"

#include <cmath>
#include <sstream>

#include "raypet/error.hpp"

namespace raypet::radar {

double range_resolution(const RadarConfig& config) {
  if (!(config.bandwidth_hz > 0))
    throw ConfigError("bandwidth_hz must be positive");
  return kSpeedOfLight / (2.0 * config.bandwidth_hz);
}

double round_trip_delay(double distance_m) {
  if (!(distance_m >= 0))
    throw ConfigError("distance must be non-negative");
  return 2.0 * distance_m / kSpeedOfLight;
}

double delay_to_range(double delay_s) { return kSpeedOfLight * delay_s / 2.0; }

double chirp_slope(const RadarConfig& config) {
  if (!(config.bandwidth_hz > 0) || !(config.pri_s > 0))
    throw ConfigError("bandwidth_hz and pri_s must be positive");
  return config.bandwidth_hz / config.pri_s;
}

double beat_frequency_to_range(double beat_hz, const RadarConfig& config) {
  if (!(beat_hz >= 0)) throw ConfigError("beat frequency must be non-negative");
  return kSpeedOfLight * beat_hz / (2.0 * chirp_slope(config));
}

int frames_per_clip(double clip_duration_s, const RadarConfig& config) {
  if (!(clip_duration_s > 0)) throw ConfigError("clip duration must be positive");
  if (!(config.frame_duration_s > 0))
    throw ConfigError("frame_duration_s must be positive");
  // The epsilon absorbs rounding when the duration is an exact multiple.
  return static_cast<int>(
      std::floor(clip_duration_s / config.frame_duration_s + 1e-9));
}

std::vector<std::string> validate_config(const RadarConfig& config,
                                         ValidationOptions options) {
  std::vector<std::string> out;
  auto positive = [&](bool ok, const char* name) {
    if (!ok) out.push_back(std::string(name) + " must be positive");
  };
  positive(config.samples_per_chirp > 0, "samples_per_chirp");
  positive(config.chirps_per_frame > 0, "chirps_per_frame");
  positive(config.start_frequency_hz > 0 && std::isfinite(config.start_frequency_hz),
           "start_frequency_hz");
  positive(config.frame_duration_s > 0 && std::isfinite(config.frame_duration_s),
           "frame_duration_s");
  positive(config.bandwidth_hz > 0 && std::isfinite(config.bandwidth_hz),
           "bandwidth_hz");
  positive(config.pri_s > 0 && std::isfinite(config.pri_s), "pri_s");

  if (config.chirps_per_frame > 0 && config.pri_s > 0 &&
      config.frame_duration_s > 0) {
    const double active = config.chirps_per_frame * config.pri_s;
    if (active > config.frame_duration_s) {
      std::ostringstream msg;
      msg << "chirps_per_frame * pri_s = " << active
          << " s exceeds frame_duration_s = " << config.frame_duration_s << " s";
      out.push_back(msg.str());
    }
  }
  if (options.ti_band) {
    const double lo = config.start_frequency_hz;
    const double hi = config.start_frequency_hz + config.bandwidth_hz;
    if (lo < 76e9 || hi > 81e9) {
      std::ostringstream msg;
      msg << "sweep [" << lo << ", " << hi << "] Hz leaves the 76-81 GHz band";
      out.push_back(msg.str());
    }
  }
  return out;
}

}  // namespace raypet::radar
