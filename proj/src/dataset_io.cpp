#include "raypet/dataset_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "raypet/clip_io.hpp"
#include "raypet/error.hpp"

namespace raypet {

namespace {

constexpr char kMagic[8] = {'R', 'A', 'Y', 'P', 'E', 'T', 'D', 'S'};

template <class T>
void put(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i)
    bytes[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(std::istream& in, const char* what) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T)))
    throw ParseError(std::string("truncated dataset while reading ") + what, 0);
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return static_cast<T>(v);
}

std::string get_bytes(std::istream& in, std::size_t n, const char* what) {
  std::string s(n, '\0');
  if (n && !in.read(s.data(), static_cast<std::streamsize>(n)))
    throw ParseError(std::string("truncated dataset while reading ") + what, 0);
  return s;
}

}  // namespace

void write_dataset(const Dataset& dataset, std::ostream& out) {
  const std::size_t cells = dataset.dims.size();
  nlohmann::json header = dataset.header;
  header["window"] = dataset.window;
  header["dims"] = {dataset.dims.m, dataset.dims.n, dataset.dims.p};
  header["samples"] = dataset.samples.size();
  const std::string text = header.dump();

  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kDatasetVersion);
  put<std::uint32_t>(out, 0);
  put<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& s : dataset.samples) {
    if (s.window() != dataset.window || !(s.dims() == dataset.dims))
      throw ShapeError("sample from session " + s.session_id +
                       " does not match the dataset window and dims");
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.session_id.size()));
    out.write(s.session_id.data(), static_cast<std::streamsize>(s.session_id.size()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(label_index(s.label)));
    put<std::uint64_t>(out, s.start_frame());
    for (const auto& g : s.grids()) {
      if (g.counts.size() != cells) throw ShapeError("voxel grid has the wrong cell count");
      for (std::int32_t c : g.counts) put<std::uint32_t>(out, static_cast<std::uint32_t>(c));
    }
  }
  if (!out) throw IoError("failed to write dataset");
}

Dataset read_dataset(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw ParseError("not a RayPet dataset (bad magic)", 0);
  const auto version = get<std::uint32_t>(in, "version");
  if (version != kDatasetVersion)
    throw ParseError("unsupported dataset version " + std::to_string(version), 0);
  get<std::uint32_t>(in, "reserved");
  const auto header_len = get<std::uint64_t>(in, "header length");
  Dataset ds;
  try {
    ds.header = nlohmann::json::parse(get_bytes(in, header_len, "header"));
    ds.window = ds.header.at("window").get<std::size_t>();
    const auto dims = ds.header.at("dims").get<std::vector<int>>();
    if (dims.size() != 3) throw ParseError("dims must have 3 entries", 0);
    ds.dims = {dims[0], dims[1], dims[2]};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad dataset header: ") + e.what(), 0);
  }
  if (ds.window == 0 || ds.dims.m < 1 || ds.dims.n < 1 || ds.dims.p < 1)
    throw ParseError("dataset header has empty window or dims", 0);
  const auto count = ds.header.at("samples").get<std::size_t>();
  const std::size_t cells = ds.dims.size();
  ds.samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto id_len = get<std::uint32_t>(in, "session id length");
    std::string id = get_bytes(in, id_len, "session id");
    const auto label = get<std::uint32_t>(in, "label");
    if (label >= static_cast<std::uint32_t>(kNumLabels))
      throw ParseError("sample " + std::to_string(i) + " has invalid label " +
                           std::to_string(label),
                       0);
    const auto start = get<std::uint64_t>(in, "start frame");
    auto grids = std::make_shared<std::vector<preprocess::VoxelGrid>>(ds.window);
    for (std::size_t w = 0; w < ds.window; ++w) {
      auto& g = (*grids)[w];
      g.dims = ds.dims;
      g.source_frame_index = start + w;
      g.counts.resize(cells);
      for (auto& c : g.counts) c = static_cast<std::int32_t>(get<std::uint32_t>(in, "counts"));
    }
    ds.samples.emplace_back(std::move(grids), 0, ds.window,
                            label_from_index(static_cast<int>(label)), std::move(id));
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw ParseError("trailing bytes after the last sample", 0);
  return ds;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ostringstream buf(std::ios::binary);
  write_dataset(dataset, buf);
  write_file_atomic(path, buf.str());
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset " + path.string());
  return read_dataset(in);
}

}  // namespace raypet
