#pragma once

#include <memory>
#include <string>
#include <vector>

#include "raypet/point_cloud.hpp"
#include "raypet/preprocess.hpp"
#include "raypet/rng.hpp"

namespace support {

using raypet::ActivityLabel;
using raypet::preprocess::VoxelDims;
using raypet::preprocess::VoxelGrid;
using raypet::preprocess::WindowSample;

inline WindowSample make_sample(std::vector<VoxelGrid> grids, ActivityLabel label,
                                std::string session, std::size_t start = 0) {
  for (std::size_t i = 0; i < grids.size(); ++i) grids[i].source_frame_index = start + i;
  auto seq = std::make_shared<const std::vector<VoxelGrid>>(std::move(grids));
  const std::size_t n = seq->size();
  return WindowSample(seq, 0, n, label, std::move(session));
}

// Five classes, each lighting its own block of cells in every grid, plus a
// sprinkling of unit counts elsewhere. Separable by construction.
inline std::vector<WindowSample> separable_toy(int per_class = 20, std::uint64_t seed = 3,
                                               std::size_t window = 5,
                                               VoxelDims dims = {2, 4, 4}) {
  std::vector<WindowSample> out;
  const std::size_t cells = dims.size();
  for (int c = 0; c < raypet::kNumLabels; ++c) {
    for (int i = 0; i < per_class; ++i) {
      raypet::CounterRng rng{seed, static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(i)};
      std::vector<VoxelGrid> grids(window);
      for (auto& g : grids) {
        g.dims = dims;
        g.counts.assign(cells, 0);
        for (std::size_t k = 0; k < cells; ++k)
          if (k % raypet::kNumLabels == static_cast<std::size_t>(c)) g.counts[k] = 2 + static_cast<int>(rng.below(2));
          else if (rng.bernoulli(0.1)) g.counts[k] = 1;
      }
      out.push_back(make_sample(std::move(grids), raypet::label_from_index(c),
                                std::string(raypet::label_name(raypet::label_from_index(c))) +
                                    "-" + std::to_string(i)));
    }
  }
  return out;
}

inline std::vector<raypet::Point> random_points(raypet::CounterRng& rng, std::size_t n,
                                                double lo = -1.0, double hi = 1.0) {
  std::vector<raypet::Point> pts(n);
  for (auto& p : pts) {
    p.x = rng.uniform(lo, hi);
    p.y = rng.uniform(lo, hi);
    p.z = rng.uniform(lo, hi);
    p.velocity = rng.uniform(-1, 1);
    p.intensity = rng.uniform(0, 10);
  }
  return pts;
}

inline raypet::Clip random_clip(raypet::CounterRng& rng, std::size_t frames, std::size_t max_points,
                                double frame_duration = 0.03333) {
  raypet::Clip c;
  c.session_id = "rand-" + std::to_string(rng.below(1000));
  c.label = raypet::label_from_index(static_cast<int>(rng.below(raypet::kNumLabels)));
  c.frame_duration_s = frame_duration;
  for (std::size_t f = 0; f < frames; ++f) {
    raypet::Frame fr;
    fr.index = f;
    fr.timestamp = static_cast<double>(f) * frame_duration;
    fr.points = random_points(rng, rng.below(max_points + 1), -2.0, 2.0);
    c.frames.push_back(std::move(fr));
  }
  return c;
}

}  // namespace support
