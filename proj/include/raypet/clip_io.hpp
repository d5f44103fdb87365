#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "raypet/point_cloud.hpp"

namespace raypet {

inline constexpr const char* kClipExtension = ".clip.jsonl";

// JSON Lines: a header object followed by one object per frame,
//   {"session_id": ..., "label": ..., "frame_duration_s": ..., "meta": {...}}
//   {"index": 0, "t": 0, "points": [[x, y, z, v, i], ...]}
// Numbers are written with 17 significant digits so reading is exact.
void write_clip(const Clip& clip, std::ostream& out);

// Throws ParseError (with line number) on malformed JSON and ValidationError
// on invariant violations. Nothing is repaired.
Clip read_clip(std::istream& in);

void save_clip(const Clip& clip, const std::filesystem::path& path);
Clip load_clip(const std::filesystem::path& path);

// Writes via a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);

std::string format_double(double value);

}  // namespace raypet
