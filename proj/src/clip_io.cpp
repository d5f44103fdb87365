#include "raypet/clip_io.hpp"

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "raypet/error.hpp"

namespace raypet {

namespace {

constexpr std::array<const char*, 5> kPointFields = {"x", "y", "z", "velocity",
                                                     "intensity"};

void append_point(std::string& out, const Point& p) {
  out += '[';
  out += format_double(p.x);
  out += ',';
  out += format_double(p.y);
  out += ',';
  out += format_double(p.z);
  out += ',';
  out += format_double(p.velocity);
  out += ',';
  out += format_double(p.intensity);
  out += ']';
}

const nlohmann::json& require(const nlohmann::json& obj, const char* key,
                              std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ParseError(std::string("missing key \"") + key + "\"", line);
  return *it;
}

double number_field(const nlohmann::json& value, const char* field,
                    std::size_t line) {
  if (!value.is_number())
    throw ValidationError(field, "expected a number on line " +
                                     std::to_string(line) + ", got " +
                                     value.dump());
  return value.get<double>();
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_clip(const Clip& clip, std::ostream& out) {
  validate_clip(clip);
  std::string line;
  line += "{\"session_id\":";
  line += nlohmann::json(clip.session_id).dump();
  line += ",\"label\":";
  line += nlohmann::json(std::string(label_name(clip.label))).dump();
  line += ",\"frame_duration_s\":";
  line += format_double(clip.frame_duration_s);
  line += ",\"meta\":";
  line += clip.meta.dump();
  line += "}\n";
  out << line;
  for (const Frame& f : clip.frames) {
    line.clear();
    line += "{\"index\":";
    line += std::to_string(f.index);
    line += ",\"t\":";
    line += format_double(f.timestamp);
    line += ",\"points\":[";
    for (std::size_t i = 0; i < f.points.size(); ++i) {
      if (i) line += ',';
      append_point(line, f.points[i]);
    }
    line += "]}\n";
    out << line;
  }
  if (!out) throw IoError("failed writing clip " + clip.session_id);
}

Clip read_clip(std::istream& in) {
  Clip clip;
  std::string text;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty() || text == "\r") continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(e.what(), line_no);
    }
    if (!obj.is_object()) throw ParseError("expected a JSON object", line_no);

    if (!have_header) {
      const auto& sid = require(obj, "session_id", line_no);
      if (!sid.is_string())
        throw ValidationError("session_id", "expected a string");
      clip.session_id = sid.get<std::string>();
      const auto& lab = require(obj, "label", line_no);
      if (!lab.is_string()) throw ValidationError("label", "expected a string");
      auto label = parse_label(lab.get<std::string>());
      if (!label)
        throw ValidationError("label", "unknown label " + lab.dump());
      clip.label = *label;
      clip.frame_duration_s =
          number_field(require(obj, "frame_duration_s", line_no),
                       "frame_duration_s", line_no);
      if (auto it = obj.find("meta"); it != obj.end()) {
        if (!it->is_object()) throw ValidationError("meta", "expected an object");
        clip.meta = *it;
      }
      have_header = true;
      continue;
    }

    Frame frame;
    const auto& idx = require(obj, "index", line_no);
    if (!idx.is_number_integer() || idx.get<long long>() < 0)
      throw ValidationError("index", "expected a non-negative integer on line " +
                                         std::to_string(line_no));
    frame.index = idx.get<std::size_t>();
    if (frame.index != clip.frames.size())
      throw ValidationError("index", "non-contiguous frame index " +
                                         std::to_string(frame.index) +
                                         " on line " + std::to_string(line_no));
    frame.timestamp = number_field(require(obj, "t", line_no), "t", line_no);
    const auto& pts = require(obj, "points", line_no);
    if (!pts.is_array()) throw ValidationError("points", "expected an array");
    frame.points.reserve(pts.size());
    for (const auto& arr : pts) {
      if (!arr.is_array() || arr.size() != 5)
        throw ValidationError("points", "each point must be [x, y, z, v, i] on line " +
                                            std::to_string(line_no));
      Point p;
      double* fields[5] = {&p.x, &p.y, &p.z, &p.velocity, &p.intensity};
      for (int k = 0; k < 5; ++k)
        *fields[k] = number_field(arr[k], kPointFields[k], line_no);
      validate_point(p);
      frame.points.push_back(p);
    }
    clip.frames.push_back(std::move(frame));
  }
  if (!have_header) throw ParseError("missing header line", line_no + 1);
  validate_clip(clip);
  return clip;
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path parent = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(parent, ec))
    throw IoError("directory does not exist: " + parent.string());
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into place: " + path.string());
  }
}

void save_clip(const Clip& clip, const std::filesystem::path& path) {
  std::ostringstream out;
  write_clip(clip, out);
  write_file_atomic(path, out.str());
}

Clip load_clip(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open clip: " + path.string());
  try {
    return read_clip(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  } catch (const ValidationError& e) {
    throw ValidationError(e.field(), path.string() + ": " + e.what());
  }
}

}  // namespace raypet
