#include "raypet/preprocess.hpp"

#include <cmath>
#include <sstream>

#include "raypet/dbscan.hpp"
#include "raypet/error.hpp"

namespace raypet::preprocess {

namespace {

// Cell index along one axis, or -1 when the coordinate is out of bounds.
int cell_of(double c, double lo, double hi, int cells) {
  if (!(c >= lo && c <= hi)) return -1;
  if (c == hi) return cells - 1;
  const double width = (hi - lo) / cells;
  const int idx = static_cast<int>(std::floor((c - lo) / width));
  return idx >= cells ? cells - 1 : idx;
}

template <class Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(stage) + ": " + e.what());
  } catch (const Error& e) {
    throw Error(std::string(stage) + ": " + e.what());
  }
}

std::size_t count_points(std::span<const Frame> frames) {
  std::size_t n = 0;
  for (const Frame& f : frames) n += f.points.size();
  return n;
}

}  // namespace

std::vector<std::string> validate(const PipelineConfig& c) {
  std::vector<std::string> out;
  if (!(c.background_radius > 0)) out.push_back("background_radius must be > 0");
  if (c.clutter_window < 2) out.push_back("clutter_window (T) must be >= 2");
  if (!(c.clutter_radius > 0)) out.push_back("clutter_radius must be > 0");
  if (!(c.dbscan_eps > 0)) out.push_back("dbscan_eps must be > 0");
  if (c.dbscan_min_points < 1) out.push_back("dbscan_min_points must be >= 1");
  if (c.aggregation_factor < 1)
    out.push_back("aggregation_factor (K) must be >= 1");
  if (c.voxel_dims.m < 1 || c.voxel_dims.n < 1 || c.voxel_dims.p < 1)
    out.push_back("voxel_dims must all be >= 1");
  if (c.voxel_bounds.degenerate()) out.push_back("voxel_bounds are degenerate");
  if (c.window_size < 1) out.push_back("window_size (W) must be >= 1");
  if (c.window_slide < 1 || c.window_slide > c.window_size)
    out.push_back("window_slide (SW) must satisfy 1 <= SW <= W");
  return out;
}

PipelineConfig baseline_config(PipelineConfig config) {
  config.stages.background_filter = false;
  config.stages.static_clutter = false;
  config.stages.dbscan = false;
  config.stages.aggregation = false;
  return config;
}

std::int64_t VoxelGrid::total() const {
  std::int64_t s = 0;
  for (std::int32_t c : counts) s += c;
  return s;
}

WindowSample::WindowSample(std::shared_ptr<const std::vector<VoxelGrid>> sequence,
                           std::size_t offset, std::size_t length,
                           ActivityLabel label_, std::string session_id_)
    : label(label_),
      session_id(std::move(session_id_)),
      sequence_(std::move(sequence)),
      offset_(offset),
      length_(length) {
  if (!sequence_ || offset_ + length_ > sequence_->size() || length_ == 0)
    throw ShapeError("window outside its grid sequence");
}

VoxelDims WindowSample::dims() const { return grids().front().dims; }

std::size_t WindowSample::start_frame() const {
  return grids().front().source_frame_index;
}

BackgroundReference::BackgroundReference(std::span<const Point> points,
                                         double radius)
    : index_(points, radius), radius_(radius) {
  if (!(radius > 0)) throw ConfigError("background radius must be > 0");
}

BackgroundReference::BackgroundReference(const Clip& background, double radius)
    : BackgroundReference(pool_points(background), radius) {}

bool BackgroundReference::matches(const Point& p) const {
  return index_.any_within(p, radius_);
}

Frame background_filter(const Frame& frame,
                        const BackgroundReference& reference) {
  Frame out{frame.index, frame.timestamp, {}};
  out.points.reserve(frame.points.size());
  for (const Point& p : frame.points)
    if (reference.empty() || !reference.matches(p)) out.points.push_back(p);
  return out;
}

Frame background_filter(const Frame& frame, std::span<const Point> reference,
                        double radius) {
  return background_filter(frame, BackgroundReference(reference, radius));
}

std::vector<Frame> static_clutter_removal(std::span<const Frame> frames,
                                          double delta, int window,
                                          kernels::Exec exec) {
  if (!(delta > 0)) throw ConfigError("clutter radius must be > 0");
  if (window < 2) throw ConfigError("clutter window must be >= 2");
  const std::size_t n = frames.size();
  const std::size_t successors = static_cast<std::size_t>(window) - 1;

  std::vector<PointIndex> index(n);
  kernels::for_each_index(exec, n, [&](std::size_t i) {
    index[i] = PointIndex(frames[i].points, delta);
  });

  std::vector<Frame> out(n);
  kernels::for_each_index(exec, n, [&](std::size_t i) {
    const Frame& f = frames[i];
    if (i + successors >= n) {
      out[i] = f;
      return;
    }
    out[i] = Frame{f.index, f.timestamp, {}};
    out[i].points.reserve(f.points.size());
    for (const Point& p : f.points) {
      bool stationary = true;
      for (std::size_t j = i + 1; j <= i + successors && stationary; ++j)
        stationary = index[j].any_within(p, delta);
      if (!stationary) out[i].points.push_back(p);
    }
  });
  return out;
}

Frame dbscan_denoise(const Frame& frame, double eps, int min_points) {
  const DbscanResult r = dbscan(frame.points, eps, min_points);
  Frame out{frame.index, frame.timestamp, {}};
  out.points.reserve(frame.points.size());
  for (std::size_t i = 0; i < frame.points.size(); ++i)
    if (r.role[i] != PointRole::kNoise) out.points.push_back(frame.points[i]);
  return out;
}

std::vector<Frame> aggregate_frames(std::span<const Frame> frames, int factor,
                                    double frame_duration_s) {
  if (factor < 1) throw ConfigError("aggregation factor must be >= 1");
  const std::size_t k = static_cast<std::size_t>(factor);
  const std::size_t groups = frames.size() / k;
  std::vector<Frame> out(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    Frame& f = out[g];
    f.index = g;
    f.timestamp = static_cast<double>(g) * (frame_duration_s * factor);
    for (std::size_t j = g * k; j < (g + 1) * k; ++j)
      f.points.insert(f.points.end(), frames[j].points.begin(),
                      frames[j].points.end());
  }
  return out;
}

VoxelGrid voxelize(const Frame& frame, const VoxelDims& dims, const Box& bounds,
                   bool binary) {
  if (dims.m < 1 || dims.n < 1 || dims.p < 1)
    throw ConfigError("voxel dims must be >= 1");
  if (bounds.degenerate()) throw ConfigError("voxel bounds are degenerate");
  VoxelGrid grid{dims, std::vector<std::int32_t>(dims.size(), 0), frame.index};
  for (const Point& p : frame.points) {
    const int ix = cell_of(p.x, bounds.lo[0], bounds.hi[0], dims.n);
    const int iy = cell_of(p.y, bounds.lo[1], bounds.hi[1], dims.p);
    const int iz = cell_of(p.z, bounds.lo[2], bounds.hi[2], dims.m);
    if (ix < 0 || iy < 0 || iz < 0) continue;
    std::int32_t& cell = grid.counts[grid.offset(iz, ix, iy)];
    cell = binary ? 1 : cell + 1;
  }
  return grid;
}

std::size_t window_count(std::size_t grid_count, int window, int slide) {
  if (window < 1 || slide < 1) throw ConfigError("window and slide must be >= 1");
  const std::size_t w = static_cast<std::size_t>(window);
  if (grid_count < w) return 0;
  return (grid_count - w) / static_cast<std::size_t>(slide) + 1;
}

std::vector<WindowSample> make_windows(std::vector<VoxelGrid> grids,
                                       ActivityLabel label,
                                       const std::string& session_id,
                                       int window, int slide) {
  if (window < 1 || slide < 1 || slide > window)
    throw ConfigError("windowing needs 1 <= SW <= W");
  const std::size_t count = window_count(grids.size(), window, slide);
  auto sequence =
      std::make_shared<const std::vector<VoxelGrid>>(std::move(grids));
  std::vector<WindowSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.emplace_back(sequence, i * static_cast<std::size_t>(slide),
                     static_cast<std::size_t>(window), label, session_id);
  return out;
}

std::vector<WindowSample> run_pipeline(const Clip& clip,
                                       const BackgroundReference* background,
                                       const PipelineConfig& config,
                                       PipelineTrace* trace,
                                       kernels::Exec exec) {
  if (auto v = validate(config); !v.empty()) {
    std::ostringstream msg;
    msg << "invalid pipeline config:";
    for (const auto& s : v) msg << "\n  " << s;
    throw ConfigError(msg.str());
  }
  const StageToggles& on = config.stages;
  std::vector<Frame> frames = clip.frames;
  PipelineTrace local;
  local.input_points = count_points(frames);

  if (on.background_filter && background && !background->empty()) {
    in_stage("background_filter", [&] {
      kernels::for_each_index(exec, frames.size(), [&](std::size_t i) {
        frames[i] = background_filter(frames[i], *background);
      });
    });
  }
  local.after_background = count_points(frames);

  if (on.static_clutter) {
    frames = in_stage("static_clutter_removal", [&] {
      return static_clutter_removal(frames, config.clutter_radius,
                                    config.clutter_window, exec);
    });
  }
  local.after_clutter = count_points(frames);

  if (on.dbscan) {
    in_stage("dbscan_denoise", [&] {
      kernels::for_each_index(exec, frames.size(), [&](std::size_t i) {
        frames[i] = dbscan_denoise(frames[i], config.dbscan_eps,
                                   config.dbscan_min_points);
      });
    });
  }
  local.after_dbscan = count_points(frames);

  const int k = on.aggregation ? config.aggregation_factor : 1;
  frames = in_stage("aggregate_frames", [&] {
    return aggregate_frames(frames, k, clip.frame_duration_s);
  });

  std::vector<VoxelGrid> grids(frames.size());
  in_stage("voxelize", [&] {
    kernels::for_each_index(exec, frames.size(), [&](std::size_t i) {
      grids[i] = voxelize(frames[i], config.voxel_dims, config.voxel_bounds,
                          config.binary_occupancy);
    });
  });
  local.grids = grids.size();

  auto windows = in_stage("make_windows", [&] {
    return make_windows(std::move(grids), clip.label, clip.session_id,
                        config.window_size, config.window_slide);
  });
  local.windows = windows.size();
  if (trace) *trace = local;
  return windows;
}

std::vector<WindowSample> run_pipeline(const Clip& clip, const Clip* background,
                                       const PipelineConfig& config) {
  if (background && config.stages.background_filter) {
    const BackgroundReference ref(*background, config.background_radius);
    return run_pipeline(clip, &ref, config);
  }
  return run_pipeline(clip, static_cast<const BackgroundReference*>(nullptr),
                      config);
}

}  // namespace raypet::preprocess
