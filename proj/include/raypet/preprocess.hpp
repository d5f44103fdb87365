#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "raypet/geometry.hpp"
#include "raypet/kernels.hpp"
#include "raypet/point_cloud.hpp"
#include "raypet/spatial_index.hpp"

namespace raypet::preprocess {

// Grid resolution: m cells along z, n along x, p along y.
struct VoxelDims {
  int m = 10;
  int n = 32;
  int p = 32;

  std::size_t size() const {
    return static_cast<std::size_t>(m) * static_cast<std::size_t>(n) *
           static_cast<std::size_t>(p);
  }
  bool operator==(const VoxelDims&) const = default;
};

struct StageToggles {
  bool background_filter = true;
  bool static_clutter = true;
  bool dbscan = true;
  bool aggregation = true;

  bool operator==(const StageToggles&) const = default;
};

struct PipelineConfig {
  double background_radius = 0.10;
  int clutter_window = 5;  // T, frames in a stationary track
  double clutter_radius = 0.10;
  double dbscan_eps = 0.5;
  int dbscan_min_points = 2;
  int aggregation_factor = 2;  // K
  VoxelDims voxel_dims;
  Box voxel_bounds{{-1.0, 0.3, -0.6}, {1.0, 2.3, 0.4}};
  bool binary_occupancy = false;
  int window_size = 30;   // W
  int window_slide = 10;  // SW
  StageToggles stages;

  bool operator==(const PipelineConfig&) const = default;
};

std::vector<std::string> validate(const PipelineConfig& config);

// Same config with every noise-removal stage and aggregation switched off:
// voxelization and windowing only.
PipelineConfig baseline_config(PipelineConfig config);

// Counts stored z-major, then x, then y: index = (iz * n + ix) * p + iy.
struct VoxelGrid {
  VoxelDims dims;
  std::vector<std::int32_t> counts;
  std::size_t source_frame_index = 0;

  std::size_t offset(int iz, int ix, int iy) const {
    return (static_cast<std::size_t>(iz) * dims.n + ix) * dims.p + iy;
  }
  std::int64_t total() const;
  bool operator==(const VoxelGrid&) const = default;
};

// W consecutive grids of one clip. The grids are a view into a shared
// per-clip sequence so overlapping windows do not copy data.
class WindowSample {
 public:
  WindowSample() = default;
  WindowSample(std::shared_ptr<const std::vector<VoxelGrid>> sequence,
               std::size_t offset, std::size_t length, ActivityLabel label,
               std::string session_id);

  std::span<const VoxelGrid> grids() const {
    return {sequence_->data() + offset_, length_};
  }
  std::size_t window() const { return length_; }
  VoxelDims dims() const;
  std::size_t start_frame() const;

  ActivityLabel label = ActivityLabel::kStanding;
  std::string session_id;

 private:
  std::shared_ptr<const std::vector<VoxelGrid>> sequence_;
  std::size_t offset_ = 0;
  std::size_t length_ = 0;
};

// Pooled points of a background recording, indexed for radius queries.
class BackgroundReference {
 public:
  BackgroundReference() = default;
  BackgroundReference(std::span<const Point> points, double radius);
  explicit BackgroundReference(const Clip& background, double radius);

  bool empty() const { return index_.size() == 0; }
  bool matches(const Point& p) const;
  double radius() const { return radius_; }

 private:
  PointIndex index_;
  double radius_ = 0.1;
};

// Drops every point within distance <= radius of a reference point.
Frame background_filter(const Frame& frame, std::span<const Point> reference,
                        double radius);
Frame background_filter(const Frame& frame,
                        const BackgroundReference& reference);

// Removes a point of frame i when each of the next T-1 frames has a point
// within delta of it. The last T-1 frames are returned unchanged.
std::vector<Frame> static_clutter_removal(std::span<const Frame> frames,
                                          double delta, int window,
                                          kernels::Exec exec = kernels::Exec::kParallel);

// Removes exactly the DBSCAN noise points; every cluster is kept.
Frame dbscan_denoise(const Frame& frame, double eps, int min_points);

// Concatenates disjoint groups of K frames; a trailing partial group is
// dropped. Output indices restart at 0 and timestamps use K * frame_duration.
std::vector<Frame> aggregate_frames(std::span<const Frame> frames, int factor,
                                    double frame_duration_s);

// Points outside bounds are dropped. A coordinate equal to the upper bound
// falls in the last cell.
VoxelGrid voxelize(const Frame& frame, const VoxelDims& dims,
                   const Box& bounds, bool binary = false);

std::size_t window_count(std::size_t grid_count, int window, int slide);

std::vector<WindowSample> make_windows(std::vector<VoxelGrid> grids,
                                       ActivityLabel label,
                                       const std::string& session_id,
                                       int window, int slide);

struct PipelineTrace {
  std::size_t input_points = 0;
  std::size_t after_background = 0;
  std::size_t after_clutter = 0;
  std::size_t after_dbscan = 0;
  std::size_t grids = 0;
  std::size_t windows = 0;
};

// background_filter -> static_clutter_removal -> dbscan_denoise ->
// aggregate_frames -> voxelize -> make_windows. Disabled stages pass data
// through. Errors are rethrown as Error("<stage>: ...").
std::vector<WindowSample> run_pipeline(
    const Clip& clip, const BackgroundReference* background,
    const PipelineConfig& config, PipelineTrace* trace = nullptr,
    kernels::Exec exec = kernels::Exec::kParallel);

// Convenience overload that pools the background clip itself.
std::vector<WindowSample> run_pipeline(const Clip& clip,
                                       const Clip* background,
                                       const PipelineConfig& config);

}  // namespace raypet::preprocess
