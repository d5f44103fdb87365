// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oracles/dbscan_oracle.hpp"
#include "oracles/voxel_oracle.hpp"
#include "raypet/classifiers.hpp"
#include "raypet/cli.hpp"
#include "raypet/config.hpp"
#include "raypet/dataset_io.hpp"
#include "raypet/dbscan.hpp"
#include "raypet/eval.hpp"
#include "raypet/kernels.hpp"
#include "raypet/learn/gradcheck.hpp"
#include "raypet/learn/layers.hpp"
#include "raypet/preprocess.hpp"
#include "raypet/radar.hpp"
#include "raypet/synth.hpp"
#include "support.hpp"

using namespace raypet;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

fs::path work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "raypet_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunConfig shipped_config(const char* name) {
  return load_run_config(fs::path(RAYPET_SOURCE_DIR) / "configs" / name);
}

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------- 1

Outcome range_resolution() {
  const CliResult r = cli_run({"inspect"});
  if (r.code != cli::kOk) return {false, "inspect exited " + std::to_string(r.code)};
  json info;
  std::istringstream lines(r.out);
  for (std::string line; std::getline(lines, line);) {
    const json e = json::parse(line);
    if (e.value("event", "") == "inspect") info = e;
  }
  if (info.is_null()) return {false, "no inspect record"};
  const double dr = info["range_resolution_m"].get<double>();
  const double hand = 299792458.0 / (2.0 * 2.4398e9);
  const bool surfaced = info["published_range_resolution_m"].get<double>() == 0.05 &&
                        std::abs(info["range_resolution_discrepancy_m"].get<double>() -
                                 (dr - 0.05)) < 1e-15;
  const bool ok = std::abs(dr - 0.061438) <= 1e-6 && std::abs(dr - hand) < 1e-15 && surfaced;
  return {ok, "dR = " + fmt("%.9f", dr) + " m; published 0.05 m reported as discrepancy " +
                  fmt("%.6f", dr - 0.05) + " m"};
}

// ---------------------------------------------------------------- 2

Outcome dbscan_oracle() {
  CounterRng rng{0xacce92};
  std::size_t points = 0, removed = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng.below(201);
    const double eps = rng.uniform(0.1, 1.0);
    const int min_points = 1 + static_cast<int>(rng.below(5));
    std::vector<Point> pts;
    // mix of uniform scatter, tight blobs and exact duplicates
    while (pts.size() < n) {
      const double r = rng.uniform();
      if (r < 0.5 || pts.empty()) {
        pts.push_back(support::random_points(rng, 1, -2.0, 2.0)[0]);
      } else if (r < 0.9) {
        Point p = pts[rng.below(pts.size())];
        p.x += rng.normal(0, eps);
        p.y += rng.normal(0, eps);
        p.z += rng.normal(0, eps);
        pts.push_back(p);
      } else {
        pts.push_back(pts[rng.below(pts.size())]);
      }
    }
    const auto want = oracle::dbscan_noise(pts, eps, min_points);
    const auto got = dbscan(pts, eps, min_points);
    Frame frame{0, 0.0, pts};
    const Frame kept = preprocess::dbscan_denoise(frame, eps, min_points);
    std::vector<Point> want_kept;
    for (std::size_t i = 0; i < n; ++i) {
      const bool noise = got.role[i] == PointRole::kNoise;
      if (noise != want[i])
        return {false, "trial " + std::to_string(trial) + " point " + std::to_string(i) +
                           " disagrees with the brute-force reference"};
      if (!want[i]) want_kept.push_back(pts[i]);
    }
    if (kept.points != want_kept)
      return {false, "trial " + std::to_string(trial) + ": removed set differs"};
    points += n;
    removed += n - want_kept.size();
  }
  return {true, "200 frames, " + std::to_string(points) + " points, " + std::to_string(removed) +
                    " removed, identical to the quadratic reference"};
}

// ---------------------------------------------------------------- 3

Outcome counting_invariants() {
  using namespace preprocess;
  CounterRng rng{0xc0417};
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string where = "trial " + std::to_string(trial) + ": ";

    const VoxelDims dims{1 + static_cast<int>(rng.below(10)), 1 + static_cast<int>(rng.below(32)),
                         1 + static_cast<int>(rng.below(32))};
    Box b;
    for (int a = 0; a < 3; ++a) {
      b.lo[a] = rng.uniform(-2, 0);
      b.hi[a] = b.lo[a] + rng.uniform(0.1, 3);
    }
    const auto pts = support::random_points(rng, rng.below(100), -3, 3);
    std::int64_t inside = 0;
    for (const auto& p : pts) inside += b.contains(p);
    const auto g = voxelize(Frame{0, 0.0, pts}, dims, b);
    if (g.total() != inside) return {false, where + "voxel sum differs from in-bounds count"};
    if (g.counts != oracle::voxel_counts(pts, b, dims.m, dims.n, dims.p))
      return {false, where + "voxel counts differ from the scanning reference"};

    PipelineConfig cfg;
    cfg.aggregation_factor = 1 + static_cast<int>(rng.below(5));
    cfg.window_size = 1 + static_cast<int>(rng.below(15));
    cfg.window_slide = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.window_size)));
    cfg.voxel_dims = {1 + static_cast<int>(rng.below(4)), 1 + static_cast<int>(rng.below(6)),
                      1 + static_cast<int>(rng.below(6))};
    cfg.stages.background_filter = rng.bernoulli(0.5);
    cfg.stages.static_clutter = rng.bernoulli(0.5);
    cfg.stages.dbscan = rng.bernoulli(0.5);
    cfg.stages.aggregation = rng.bernoulli(0.8);
    const Clip clip = support::random_clip(rng, rng.below(90), 12);
    PipelineTrace trace;
    const auto windows = run_pipeline(clip, nullptr, cfg, &trace, kernels::Exec::kSerial);
    const std::size_t k = cfg.stages.aggregation ? static_cast<std::size_t>(cfg.aggregation_factor) : 1;
    const std::size_t grids = clip.frames.size() / k;
    const std::size_t w = static_cast<std::size_t>(cfg.window_size);
    const std::size_t sw = static_cast<std::size_t>(cfg.window_slide);
    const std::size_t want_windows = grids < w ? 0 : (grids - w) / sw + 1;
    if (trace.grids != grids) return {false, where + "aggregated grid count is not floor(N/K)"};
    if (windows.size() != want_windows || trace.windows != want_windows)
      return {false, where + "window count is not floor((N-W)/SW)+1"};
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (windows[i].start_frame() != i * sw) return {false, where + "window start is not i*SW"};
      if (windows[i].grids().size() != w) return {false, where + "window length is not W"};
    }
  }

  synth::SceneConfig scene;
  scene.seed = 2024;
  const Clip clip = synth::synthesize_clip(ActivityLabel::kEating, 10.0, scene, {},
                                           synth::default_noise(), {});
  const Clip bg = synth::synthesize_background(1.0, scene, synth::default_noise(), {});
  preprocess::PipelineTrace trace;
  const preprocess::BackgroundReference ref(bg, 0.1);
  const auto windows = preprocess::run_pipeline(clip, &ref, preprocess::PipelineConfig{}, &trace);
  const bool ok = clip.frames.size() == 300 && trace.grids == 150 && windows.size() == 13;
  return {ok, "1000 random parameterizations hold; default 10 s clip: " +
                  std::to_string(clip.frames.size()) + " frames -> " + std::to_string(trace.grids) +
                  " grids -> " + std::to_string(windows.size()) + " windows"};
}

// ---------------------------------------------------------------- 4

Outcome gradient_checks() {
  using namespace learn;
  auto random_tensor = [](Shape shape, std::uint64_t seed, double lo = -1, double hi = 1) {
    Tensor t(std::move(shape));
    CounterRng rng{seed, 0xacc};
    for (double& v : t.values()) v = rng.uniform(lo, hi);
    return t;
  };
  auto randomize = [](Layer& layer, std::uint64_t seed) {
    CounterRng rng{seed, 0x5ca1e};
    for (Tensor* p : layer.params())
      for (double& v : p->values()) v = rng.uniform(-0.5, 0.5);
  };

  std::vector<std::pair<std::string, double>> errors;
  auto check = [&](const std::string& name, Layer& layer, const Tensor& x, std::uint64_t seed) {
    randomize(layer, seed);
    errors.emplace_back(name, check_layer_gradients(layer, x, seed + 1).max_error());
  };

  for (auto [act, name] : {std::pair{Activation::kLinear, "dense/linear"},
                           std::pair{Activation::kRelu, "dense/relu"},
                           std::pair{Activation::kTanh, "dense/tanh"}}) {
    Dense d(6, 4, act);
    check(name, d, random_tensor({6}, 1), 2);
  }
  Conv3D conv(2, 3, Activation::kRelu);
  check("conv3d", conv, random_tensor({2, 3, 4, 2}, 3), 4);
  MaxPool3D pool;
  check("maxpool3d", pool, random_tensor({2, 4, 3, 4}, 5), 6);
  Lstm fwd(3, 4), rev(3, 4, true);
  check("lstm", fwd, random_tensor({5, 3}, 7), 8);
  check("lstm/reverse", rev, random_tensor({5, 3}, 9), 10);
  Bidirectional bi(3, 4);
  check("bidirectional", bi, random_tensor({5, 3}, 11), 12);
  Sequential inner;
  inner.add(std::make_unique<Conv3D>(1, 2, Activation::kRelu));
  inner.add(std::make_unique<MaxPool3D>());
  inner.add(std::make_unique<Dense>(2 * 1 * 2 * 2, 3, Activation::kTanh));
  TimeDistributed td(std::make_unique<Sequential>(inner));
  check("time_distributed+sequential", td, random_tensor({3, 1, 2, 4, 4}, 13), 14);
  Softmax softmax;
  check("softmax", softmax, random_tensor({5}, 15, -3, 3), 16);

  classifiers::ClassifierConfig cfg;
  cfg.mlp.hidden = {9, 7, 6};
  cfg.bilstm.hidden = 4;
  cfg.tdcnn.conv1_channels = 2;
  cfg.tdcnn.conv2_channels = 3;
  cfg.tdcnn.embedding = 5;
  cfg.tdcnn.hidden = 4;
  const classifiers::SampleShape shape{3, {2, 3, 4}};
  const auto sample = support::separable_toy(1, 1, 3, {2, 3, 4}).front();
  for (auto kind : {classifiers::Kind::kMlp, classifiers::Kind::kBiLstm,
                    classifiers::Kind::kTdCnnBiLstm}) {
    Sequential net = classifiers::build_network(kind, shape, cfg, 17);
    const Tensor x = random_tensor(classifiers::network_input(kind, sample, 1.0).shape(), 18, 0, 1);
    check(std::string("model/") + std::string(classifiers::kind_name(kind)), net, x, 19);
  }

  double worst = 0;
  std::string worst_name;
  for (const auto& [name, e] : errors)
    if (!(e <= worst)) {
      worst = e;
      worst_name = name;
    }
  return {worst < 1e-4, std::to_string(errors.size()) + " checks, max relative error " +
                            fmt("%.2e", worst) + " (" + worst_name + ")"};
}

// ---------------------------------------------------------------- 5

Outcome separable_toy() {
  const auto toy = support::separable_toy();
  std::string detail;
  bool ok = true;
  for (auto kind : classifiers::kAllKinds) {
    const auto a = classifiers::train(kind, toy, {}, 11);
    const auto b = classifiers::train(kind, toy, {}, 11);
    std::size_t right = 0;
    for (const auto& s : toy) right += a->predict(s).label == s.label;
    const double acc = static_cast<double>(right) / static_cast<double>(toy.size());
    const bool same = a->to_json() == b->to_json();
    ok = ok && acc >= 0.99 && same;
    detail += std::string(classifiers::kind_name(kind)) + " " + fmt("%.3f", acc) +
              (same ? "" : " (not reproducible)") + "; ";
  }
  return {ok, detail + "training accuracy on " + std::to_string(toy.size()) + " windows"};
}

// ---------------------------------------------------------------- 6

Outcome end_to_end() {
  const RunConfig c = shipped_config("desk.json");
  const auto clips = synth::synthesize_dataset(c.dataset, c.scene, c.animal, c.noise, c.radar);
  synth::SceneConfig bg_scene = c.scene;
  bg_scene.seed = derive_key({c.seed, 0xba59});
  const Clip bg = synth::synthesize_background(c.background_duration_s, bg_scene, c.noise, c.radar);
  const auto samples = eval::preprocess_clips(clips, &bg, c.pipeline);
  const auto split = eval::split_dataset(samples, c.split);
  const auto model = classifiers::train(classifiers::Kind::kTdCnnBiLstm, split.train, c.classifier, c.seed);
  const auto report = eval::evaluate(*model, split.test);
  return {report.accuracy >= 0.80,
          "tdcnn_bilstm, " + std::to_string(clips.size()) + " clips, W=" +
              std::to_string(c.pipeline.window_size) + " grids 4x8x8, " +
              std::to_string(split.train.size()) + " train / " + std::to_string(split.test.size()) +
              " test windows, test accuracy " + fmt("%.3f", report.accuracy)};
}

// ---------------------------------------------------------------- 7

Outcome comparison_direction() {
  const RunConfig base = shipped_config("high_noise.json");
  double sum_delta = 0, sum_full = 0, sum_base = 0;
  std::string per_seed;
  int not_worse = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    json j = to_json(base);
    j["seed"] = seed;
    const RunConfig c = run_config_from_json(j);
    const auto clips = synth::synthesize_dataset(c.dataset, c.scene, c.animal, c.noise, c.radar);
    synth::SceneConfig bg_scene = c.scene;
    bg_scene.seed = derive_key({c.seed, 0xba59});
    const Clip bg = synth::synthesize_background(c.background_duration_s, bg_scene, c.noise, c.radar);
    const auto r = eval::compare_pipelines(clips, &bg, c.pipeline, classifiers::Kind::kTdCnnBiLstm,
                                           c.classifier, c.split, c.seed);
    sum_delta += r.delta;
    sum_full += r.full.report.accuracy;
    sum_base += r.baseline.report.accuracy;
    not_worse += r.full.report.accuracy >= r.baseline.report.accuracy;
    per_seed += fmt("%+.3f", r.delta) + (seed < 5 ? " " : "");
  }
  const double mean = sum_delta / 5;
  return {mean > 0 && sum_full >= sum_base,
          "tdcnn_bilstm on high noise, mean full " + fmt("%.3f", sum_full / 5) + " vs baseline " +
              fmt("%.3f", sum_base / 5) + ", mean delta " + fmt("%+.4f", mean) + " (per seed " +
              per_seed + "; full >= baseline on " + std::to_string(not_worse) + "/5)"};
}

// ---------------------------------------------------------------- 8

Outcome sweep_shape() {
  RunConfig c = shipped_config("desk.json");
  c.dataset.counts = {8, 8, 8, 8, 8};
  const auto clips = synth::synthesize_dataset(c.dataset, c.scene, c.animal, c.noise, c.radar);
  synth::SceneConfig bg_scene = c.scene;
  bg_scene.seed = derive_key({c.seed, 0xba59});
  const Clip bg = synth::synthesize_background(c.background_duration_s, bg_scene, c.noise, c.radar);
  const std::vector<eval::WindowPair> pairs = {{20, 4}, {25, 5}, {30, 10}, {45, 10}};
  const auto entries = eval::window_sweep(clips, &bg, c.pipeline, pairs, classifiers::Kind::kSvmPca,
                                          c.classifier, c.split, c.seed);
  bool ok = entries.size() == pairs.size();
  std::string detail;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    detail += std::to_string(e.pair.window) + ":" + std::to_string(e.pair.slide) + " -> " +
              std::to_string(e.train_samples) + " train" +
              (e.report ? " (acc " + fmt("%.3f", e.report->accuracy) + ")" : "") + "; ";
    ok = ok && e.report.has_value();
    for (std::size_t j = 0; j < entries.size(); ++j) {
      const auto& f = entries[j];
      // fixed slide: more grids per window means fewer windows
      if (e.pair.slide == f.pair.slide && e.pair.window < f.pair.window)
        ok = ok && e.train_samples > f.train_samples;
    }
    if (i > 0) ok = ok && entries[i - 1].train_samples > e.train_samples;
  }
  return {ok, detail + "strictly decreasing in W"};
}

// ---------------------------------------------------------------- 9

Outcome determinism_and_provenance() {
  const fs::path dir = work_dir() / "determinism";
  fs::create_directories(dir);
  std::vector<std::string> common = {"--seed", "17"};
  for (const char* s : {"dataset.counts.eating=3", "dataset.counts.lying=3", "dataset.counts.sitting=3",
                        "dataset.counts.standing=3", "dataset.counts.walking=3",
                        "dataset.clip_duration_s=3", "dataset.walking_duration_s=3",
                        "pipeline.voxel_dims=[2,4,4]", "pipeline.window_size=5",
                        "pipeline.window_slide=5", "classifier.mlp.training.epochs=3"}) {
    common.push_back("--set");
    common.push_back(s);
  }
  auto run = [&](std::vector<std::string> args, bool with_common = true) {
    std::vector<std::string> all = with_common ? common : std::vector<std::string>{};
    all.insert(all.end(), args.begin(), args.end());
    const CliResult r = cli_run(all);
    if (r.code != cli::kOk) throw std::runtime_error("raypet exited " + std::to_string(r.code) + ": " + r.err);
  };
  auto same_tree = [](const fs::path& a, const fs::path& b) {
    std::size_t n = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
      if (!e.is_regular_file()) continue;
      if (slurp(e.path()) != slurp(b / fs::relative(e.path(), a))) return std::size_t{0};
      ++n;
    }
    return n;
  };
  auto config_from = [&](const json& provenance, const std::string& name) {
    const fs::path p = dir / name;
    std::ofstream(p) << provenance.at("config").dump(2);
    return p.string();
  };

  try {
    // same config and seed twice
    run({"gen", "-o", (dir / "gen_a").string()});
    run({"gen", "-o", (dir / "gen_b").string()});
    const std::size_t files = same_tree(dir / "gen_a", dir / "gen_b");
    if (files == 0) return {false, "gen output differs between identical runs"};
    const std::string manifest = (dir / "gen_a" / "manifest.json").string();
    run({"preprocess", "-m", manifest, "-o", (dir / "a.rpds").string()});
    run({"preprocess", "-m", manifest, "-o", (dir / "b.rpds").string()});
    if (slurp(dir / "a.rpds") != slurp(dir / "b.rpds")) return {false, "datasets differ"};
    for (const char* kind : {"svm_pca", "mlp"}) {
      const std::string k(kind);
      run({"train", "-d", (dir / "a.rpds").string(), "-k", k, "-o", (dir / (k + "_a.json")).string()});
      run({"train", "-d", (dir / "a.rpds").string(), "-k", k, "-o", (dir / (k + "_b.json")).string()});
      if (slurp(dir / (k + "_a.json")) != slurp(dir / (k + "_b.json"))) return {false, k + " checkpoints differ"};
      run({"eval", "-d", (dir / "a.rpds").string(), "-M", (dir / (k + "_a.json")).string(), "-o",
           (dir / (k + "_eval_a.json")).string()});
      run({"eval", "-d", (dir / "a.rpds").string(), "-M", (dir / (k + "_b.json")).string(), "-o",
           (dir / (k + "_eval_b.json")).string()});
      json ea = json::parse(slurp(dir / (k + "_eval_a.json")));
      json eb = json::parse(slurp(dir / (k + "_eval_b.json")));
      ea["provenance"].erase("model");
      eb["provenance"].erase("model");
      if (ea != eb) return {false, k + " metrics differ"};
    }

    // each file's provenance alone re-derives it
    const json m = json::parse(slurp(dir / "gen_a" / "manifest.json"));
    run({"-c", config_from(m["provenance"], "from_manifest.json"), "gen", "-o", (dir / "gen_c").string()},
        false);
    if (same_tree(dir / "gen_a", dir / "gen_c") != files) return {false, "manifest provenance does not re-derive the clips"};

    const Dataset ds = load_dataset(dir / "a.rpds");
    run({"-c", config_from(ds.header["provenance"], "from_dataset.json"), "preprocess", "-m", manifest,
         "-o", (dir / "c.rpds").string()},
        false);
    if (slurp(dir / "a.rpds") != slurp(dir / "c.rpds")) return {false, "dataset provenance does not re-derive it"};

    const json ckpt = json::parse(slurp(dir / "mlp_a.json"));
    run({"-c", config_from(ckpt["provenance"], "from_model.json"), "train", "-d", (dir / "a.rpds").string(),
         "-k", "mlp", "-o", (dir / "mlp_c.json").string()},
        false);
    if (slurp(dir / "mlp_a.json") != slurp(dir / "mlp_c.json")) return {false, "checkpoint provenance does not re-derive it"};

    const json rep = json::parse(slurp(dir / "mlp_eval_a.json"));
    run({"-c", config_from(rep["provenance"], "from_report.json"), "eval", "-d", (dir / "a.rpds").string(),
         "-M", (dir / "mlp_a.json").string(), "-o", (dir / "mlp_eval_c.json").string()},
        false);
    if (slurp(dir / "mlp_eval_a.json") != slurp(dir / "mlp_eval_c.json"))
      return {false, "report provenance does not re-derive it"};

    // a serial run matches the default one byte for byte
    run({"-j", "1", "preprocess", "-m", manifest, "-o", (dir / "serial.rpds").string()});
    kernels::set_default_exec(kernels::Exec::kParallel);
    if (slurp(dir / "a.rpds") != slurp(dir / "serial.rpds")) return {false, "serial dataset differs"};

    return {true, "gen (" + std::to_string(files) +
                      " files), preprocess, train and eval repeat byte-identically; manifest, dataset, "
                      "checkpoint and report provenance each re-derive their file"};
  } catch (const std::exception& e) {
    return {false, e.what()};
  }
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "range resolution from the radar parameters", range_resolution},
      {2, "DBSCAN equals brute-force reference", dbscan_oracle},
      {3, "pipeline counting invariants", counting_invariants},
      {4, "gradient checks", gradient_checks},
      {5, "separable toy, all classifiers", separable_toy},
      {6, "synthetic end-to-end accuracy", end_to_end},
      {7, "full pipeline vs baseline on high noise", comparison_direction},
      {8, "window sweep sample counts", sweep_shape},
      {9, "determinism and provenance", determinism_and_provenance},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": " << o.detail
              << " (" << fmt("%.1f", secs) << " s)" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
