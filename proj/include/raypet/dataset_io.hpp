#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "json.hpp"
#include "raypet/preprocess.hpp"

namespace raypet {

// Windowed dataset container:
//   "RAYPETDS" | u32 version | u32 reserved | u64 header bytes | JSON header
//   per sample: u32 id bytes | id | u32 label | u64 start_frame |
//               W*m*n*p int32 counts (row-major)
// All integers little-endian. The header records window, dims, sample count
// and whatever provenance the producer adds (pipeline config, seeds).
struct Dataset {
  nlohmann::json header = nlohmann::json::object();
  std::size_t window = 0;
  preprocess::VoxelDims dims;
  std::vector<preprocess::WindowSample> samples;
};

inline constexpr std::uint32_t kDatasetVersion = 1;

void write_dataset(const Dataset& dataset, std::ostream& out);
Dataset read_dataset(std::istream& in);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace raypet
