#include "raypet/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "raypet/classifiers.hpp"
#include "raypet/clip_io.hpp"
#include "raypet/config.hpp"
#include "raypet/dataset_io.hpp"
#include "raypet/error.hpp"
#include "raypet/eval.hpp"
#include "raypet/kernels.hpp"
#include "raypet/radar.hpp"
#include "raypet/synth.hpp"

namespace raypet::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestFormat = "raypet-manifest";
constexpr const char* kDatasetFormat = "raypet-dataset";
constexpr double kPublishedRangeResolutionM = 0.05;

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string seed;
  int jobs = 0;
  std::string out_dir;

  std::string manifest;
  std::string background;
  std::string dataset;
  std::string model;
  std::string output;
  std::string log;
  std::string kind = "tdcnn_bilstm";
  std::vector<std::string> disable;
  std::string pairs = "20:4,25:5,30:10,45:10";
};

class Context {
 public:
  Context(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  void log(const std::string& event, json fields = json::object()) {
    json line = {{"event", event}};
    line.update(fields);
    out_ << line.dump() << '\n';
  }
  std::ostream& human() { return err_; }

  RunConfig config;
  json config_json;  // resolved, without out_dir

 private:
  std::ostream& out_;
  std::ostream& err_;
};

json provenance(const Context& ctx) {
  return {{"config", ctx.config_json}, {"seed", ctx.config.seed}};
}

void ensure_out_dir(const fs::path& dir) {
  if (fs::is_directory(dir)) return;
  const fs::path parent = dir.has_parent_path() ? dir.parent_path() : fs::path(".");
  if (!parent.empty() && !fs::is_directory(parent))
    throw IoError("directory does not exist: " + parent.string());
  std::error_code ec;
  fs::create_directory(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

fs::path out_path(const Context& ctx, const std::string& explicit_path, const std::string& name) {
  if (!explicit_path.empty()) return explicit_path;
  ensure_out_dir(ctx.config.out_dir);
  return fs::path(ctx.config.out_dir) / name;
}

void write_json_file(const fs::path& path, const json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ParseError(path.string() + " is not valid JSON", 1);
  return j;
}

std::uint64_t parse_seed(const std::string& text, const char* source) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used, 10);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string(source) + " must be a non-negative integer, got " + text);
  }
}

void resolve_config(Context& ctx, const Options& o) {
  json j = json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw IoError("cannot open config " + o.config_path);
    j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config " + o.config_path + " is not valid JSON");
  }
  for (const auto& s : o.overrides) apply_override(j, s);
  if (!o.seed.empty())
    j["seed"] = parse_seed(o.seed, "--seed");
  else if (!j.contains("seed"))
    if (const char* env = std::getenv("RAYPET_SEED"); env && *env)
      j["seed"] = parse_seed(env, "RAYPET_SEED");
  if (!o.out_dir.empty()) j["out_dir"] = o.out_dir;
  ctx.config = run_config_from_json(j);
  ctx.config_json = to_json(ctx.config);
  ctx.config_json.erase("out_dir");
}

void require_valid(Context& ctx) {
  const auto problems = validate(ctx.config);
  if (problems.empty()) return;
  std::string all;
  for (const auto& p : problems) {
    ctx.human() << "config error: " << p << '\n';
    all += (all.empty() ? "" : "; ") + p;
  }
  ctx.log("config_invalid", {{"violations", problems}});
  throw ConfigError(all);
}

classifiers::Kind kind_of(const std::string& name) {
  if (auto k = classifiers::parse_kind(name)) return *k;
  throw ConfigError("unknown classifier kind " + name +
                    " (expected svm_pca, mlp, bilstm or tdcnn_bilstm)");
}

// ------------------------------------------------------------------ gen

int cmd_gen(Context& ctx, const Options& o) {
  const RunConfig& c = ctx.config;
  const fs::path root = o.output.empty() ? fs::path(c.out_dir) : fs::path(o.output);
  ensure_out_dir(root);
  const fs::path clip_dir = root / "clips";
  ensure_out_dir(clip_dir);

  auto clips = synth::synthesize_dataset(c.dataset, c.scene, c.animal, c.noise, c.radar);
  synth::SceneConfig bg_scene = c.scene;
  bg_scene.seed = derive_key({c.seed, 0xba59});
  const Clip background =
      synth::synthesize_background(c.background_duration_s, bg_scene, c.noise, c.radar);

  json entries = json::array();
  for (const Clip& clip : clips) {
    const std::string file = "clips/" + clip.session_id + kClipExtension;
    save_clip(clip, root / file);
    entries.push_back({{"file", file},
                       {"session_id", clip.session_id},
                       {"label", label_name(clip.label)},
                       {"seed", clip.meta.value("seed", std::uint64_t{0})},
                       {"frames", clip.frames.size()}});
    ctx.log("clip_written", entries.back());
  }
  const std::string bg_file = std::string("clips/background") + kClipExtension;
  save_clip(background, root / bg_file);
  json manifest = {{"format", kManifestFormat},
                   {"version", 1},
                   {"clips", entries},
                   {"background",
                    {{"file", bg_file},
                     {"session_id", background.session_id},
                     {"seed", background.meta.value("seed", std::uint64_t{0})},
                     {"frames", background.frames.size()}}},
                   {"provenance", provenance(ctx)}};
  write_json_file(root / "manifest.json", manifest);
  ctx.log("manifest_written", {{"path", (root / "manifest.json").string()},
                               {"clips", clips.size()}});
  ctx.human() << "wrote " << clips.size() << " clips + 1 background to " << root.string()
              << "\n";
  return kOk;
}

struct LoadedClips {
  std::vector<Clip> clips;
  std::optional<Clip> background;
};

LoadedClips load_manifest(const fs::path& path, const std::string& background_override) {
  const json m = read_json_file(path);
  if (m.value("format", "") != kManifestFormat)
    throw ParseError(path.string() + " is not a clip manifest", 1);
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const auto& entries = m.at("clips");
  if (!entries.is_array() || entries.empty())
    throw ConfigError("manifest " + path.string() + " lists no clips");
  LoadedClips out;
  out.clips.resize(entries.size());
  kernels::for_each_index(kernels::default_exec(), entries.size(), [&](std::size_t i) {
    out.clips[i] = load_clip(dir / entries[i].at("file").get<std::string>());
  });
  if (!background_override.empty())
    out.background = load_clip(background_override);
  else if (m.contains("background") && m["background"].is_object())
    out.background = load_clip(dir / m["background"].at("file").get<std::string>());
  return out;
}

LoadedClips clips_for(Context& ctx, const Options& o) {
  if (!o.manifest.empty()) return load_manifest(o.manifest, o.background);
  const RunConfig& c = ctx.config;
  LoadedClips out;
  out.clips = synth::synthesize_dataset(c.dataset, c.scene, c.animal, c.noise, c.radar);
  synth::SceneConfig bg_scene = c.scene;
  bg_scene.seed = derive_key({c.seed, 0xba59});
  out.background = synth::synthesize_background(c.background_duration_s, bg_scene, c.noise, c.radar);
  ctx.log("synthesized", {{"clips", out.clips.size()}});
  return out;
}

// ------------------------------------------------------------------ preprocess

preprocess::PipelineConfig apply_disable(preprocess::PipelineConfig p,
                                         const std::vector<std::string>& disable) {
  for (const auto& d : disable) {
    if (d == "noise_removal") {
      p.stages.background_filter = p.stages.static_clutter = p.stages.dbscan = false;
    } else if (d == "background_filter") {
      p.stages.background_filter = false;
    } else if (d == "static_clutter") {
      p.stages.static_clutter = false;
    } else if (d == "dbscan") {
      p.stages.dbscan = false;
    } else if (d == "aggregation") {
      p.stages.aggregation = false;
    } else {
      throw ConfigError("--disable accepts noise_removal, background_filter, static_clutter, "
                        "dbscan, aggregation; got " + d);
    }
  }
  return p;
}

int cmd_preprocess(Context& ctx, const Options& o) {
  if (o.manifest.empty()) throw ConfigError("preprocess needs --manifest");
  const auto loaded = load_manifest(o.manifest, o.background);
  const auto pipeline = apply_disable(ctx.config.pipeline, o.disable);
  if (auto problems = preprocess::validate(pipeline); !problems.empty())
    throw ConfigError("pipeline: " + problems.front());

  std::optional<preprocess::BackgroundReference> ref;
  if (loaded.background && pipeline.stages.background_filter)
    ref.emplace(*loaded.background, pipeline.background_radius);
  std::vector<std::vector<preprocess::WindowSample>> per_clip(loaded.clips.size());
  std::vector<preprocess::PipelineTrace> traces(loaded.clips.size());
  kernels::for_each_index(kernels::default_exec(), loaded.clips.size(), [&](std::size_t i) {
    per_clip[i] = preprocess::run_pipeline(loaded.clips[i], ref ? &*ref : nullptr, pipeline,
                                           &traces[i], kernels::Exec::kSerial);
  });

  Dataset ds;
  ds.window = static_cast<std::size_t>(pipeline.window_size);
  ds.dims = pipeline.voxel_dims;
  json clip_log = json::array();
  for (std::size_t i = 0; i < loaded.clips.size(); ++i) {
    const auto& t = traces[i];
    json entry = {{"session_id", loaded.clips[i].session_id},
                  {"label", label_name(loaded.clips[i].label)},
                  {"input_points", t.input_points},
                  {"after_background", t.after_background},
                  {"after_clutter", t.after_clutter},
                  {"after_dbscan", t.after_dbscan},
                  {"grids", t.grids},
                  {"windows", t.windows}};
    ctx.log("clip_windows", entry);
    clip_log.push_back(entry);
    for (auto& s : per_clip[i]) ds.samples.push_back(std::move(s));
  }
  ds.header = {{"format", kDatasetFormat},
               {"pipeline", pipeline_to_json(pipeline)},
               {"provenance", provenance(ctx)},
               {"source",
                {{"manifest", fs::path(o.manifest).filename().string()},
                 {"background", loaded.background ? loaded.background->session_id : ""},
                 {"clips", clip_log}}}};
  const fs::path path = out_path(ctx, o.output, "dataset.rpds");
  save_dataset(ds, path);
  ctx.log("dataset_written", {{"path", path.string()}, {"samples", ds.samples.size()}});
  ctx.human() << "wrote " << ds.samples.size() << " windows from " << loaded.clips.size()
              << " clips to " << path.string() << "\n";
  return kOk;
}

// ------------------------------------------------------------------ train / eval

eval::SampleSplit split_of(const Context& ctx, const Dataset& ds) {
  return eval::split_dataset(ds.samples, ctx.config.split);
}

int cmd_train(Context& ctx, const Options& o) {
  if (o.dataset.empty()) throw ConfigError("train needs --dataset");
  const auto kind = kind_of(o.kind);
  const Dataset ds = load_dataset(o.dataset);
  const auto split = split_of(ctx, ds);
  ctx.log("split", {{"train_samples", split.train.size()}, {"test_samples", split.test.size()}});

  std::string log_lines;
  auto model = classifiers::train(kind, split.train, ctx.config.classifier, ctx.config.seed,
                                  [&](const classifiers::EpochLog& e) {
                                    json line = {{"epoch", e.epoch},
                                                 {"train_loss", e.train_loss},
                                                 {"validation_loss", e.validation_loss},
                                                 {"seconds", e.seconds}};
                                    log_lines += line.dump() + "\n";
                                    ctx.log("epoch", line);
                                    ctx.human() << "epoch " << e.epoch << " train "
                                                << e.train_loss << " val "
                                                << e.validation_loss << "\n";
                                  });
  json ckpt = model->to_json();
  ckpt["provenance"] = provenance(ctx);
  ckpt["provenance"]["dataset"] = {{"file", fs::path(o.dataset).filename().string()},
                                   {"header", ds.header},
                                   {"train_samples", split.train.size()}};
  const std::string name(classifiers::kind_name(kind));
  const fs::path path = out_path(ctx, o.output, name + ".model.json");
  write_json_file(path, ckpt);
  if (!model->history().empty()) {
    const fs::path log_path = o.log.empty() ? fs::path(path.string() + ".log.jsonl") : fs::path(o.log);
    write_file_atomic(log_path, log_lines);
  }
  ctx.log("model_written", {{"path", path.string()}, {"best_epoch", model->best_epoch()}});
  ctx.human() << "trained " << name << " on " << split.train.size() << " windows -> "
              << path.string() << "\n";
  return kOk;
}

int cmd_eval(Context& ctx, const Options& o) {
  if (o.dataset.empty() || o.model.empty()) throw ConfigError("eval needs --dataset and --model");
  const Dataset ds = load_dataset(o.dataset);
  const json ckpt = read_json_file(o.model);
  const auto model = classifiers::TrainedModel::from_json(ckpt);
  const auto split = split_of(ctx, ds);
  auto report = eval::evaluate(*model, split.test);
  report.config["seed"] = ctx.config.seed;
  report.config["pipeline"] = ds.header.value("pipeline", json::object());
  json out = report.to_json();
  out["provenance"] = provenance(ctx);
  out["provenance"]["dataset"] = fs::path(o.dataset).filename().string();
  out["provenance"]["model"] = fs::path(o.model).filename().string();
  out["reference"] = eval::published_reference();
  const std::string name(classifiers::kind_name(model->kind()));
  const fs::path path = out_path(ctx, o.output, name + ".eval.json");
  write_json_file(path, out);
  write_file_atomic(fs::path(path.string() + ".confusion.csv"), report.confusion_csv());
  ctx.log("report_written", {{"path", path.string()}, {"accuracy", report.accuracy},
                             {"macro_f1", report.macro_f1}});
  ctx.human() << report.table();
  return kOk;
}

int cmd_compare(Context& ctx, const Options& o) {
  const auto kind = kind_of(o.kind);
  const auto loaded = clips_for(ctx, o);
  const auto r = eval::compare_pipelines(loaded.clips, loaded.background ? &*loaded.background : nullptr,
                                         ctx.config.pipeline, kind, ctx.config.classifier,
                                         ctx.config.split, ctx.config.seed);
  json j = r.to_json();
  j["provenance"] = provenance(ctx);
  const fs::path path = out_path(ctx, o.output, "compare.json");
  write_json_file(path, j);
  ctx.log("comparison", {{"path", path.string()},
                         {"full_accuracy", r.full.report.accuracy},
                         {"baseline_accuracy", r.baseline.report.accuracy},
                         {"delta", r.delta}});
  ctx.human() << std::fixed << std::setprecision(3) << "full " << r.full.report.accuracy
              << "  baseline " << r.baseline.report.accuracy << "  delta " << r.delta << "\n";
  return kOk;
}

std::vector<eval::WindowPair> parse_pairs(const std::string& text) {
  std::vector<eval::WindowPair> pairs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument(item);
      pairs.push_back({std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
    } catch (const std::exception&) {
      throw ConfigError("--pairs expects W:SW[,W:SW...], got " + text);
    }
  }
  if (pairs.empty()) throw ConfigError("--pairs is empty");
  return pairs;
}

int cmd_sweep(Context& ctx, const Options& o) {
  const auto kind = kind_of(o.kind);
  const auto pairs = parse_pairs(o.pairs);
  const auto loaded = clips_for(ctx, o);
  const auto entries = eval::window_sweep(
      loaded.clips, loaded.background ? &*loaded.background : nullptr, ctx.config.pipeline,
      pairs, kind, ctx.config.classifier, ctx.config.split, ctx.config.seed);
  json j = {{"kind", classifiers::kind_name(kind)},
            {"entries", eval::sweep_to_json(entries)},
            {"provenance", provenance(ctx)},
            {"reference", eval::published_reference()}};
  const fs::path path = out_path(ctx, o.output, "sweep.json");
  write_json_file(path, j);
  for (const auto& e : entries) {
    ctx.log("sweep_entry", {{"window", e.pair.window},
                            {"slide", e.pair.slide},
                            {"train_samples", e.train_samples},
                            {"test_samples", e.test_samples},
                            {"accuracy", e.report ? json(e.report->accuracy) : json(nullptr)}});
    ctx.human() << "W=" << e.pair.window << " SW=" << e.pair.slide << " train "
                << e.train_samples << " test " << e.test_samples;
    if (e.report) ctx.human() << " accuracy " << e.report->accuracy;
    ctx.human() << "\n";
  }
  return kOk;
}

int cmd_inspect(Context& ctx, const Options&) {
  const auto& r = ctx.config.radar;
  const double dr = radar::range_resolution(r);
  const auto radar_problems = radar::validate_config(r, ctx.config.radar_validation);
  const auto problems = validate(ctx.config);
  json j = {{"range_resolution_m", dr},
            {"published_range_resolution_m", kPublishedRangeResolutionM},
            {"range_resolution_discrepancy_m", dr - kPublishedRangeResolutionM},
            {"chirp_slope_hz_per_s", radar::chirp_slope(r)},
            {"sweep_end_hz", r.start_frequency_hz + r.bandwidth_hz},
            {"frames_per_clip", radar::frames_per_clip(ctx.config.dataset.clip_duration_s, r)},
            {"frames_per_walking_clip",
             radar::frames_per_clip(ctx.config.dataset.walking_duration_s, r)},
            {"round_trip_delay_at_subject_s",
             radar::round_trip_delay(ctx.config.scene.subject_distance_m)},
            {"validation", problems}};
  ctx.log("inspect", j);
  auto& h = ctx.human();
  h << std::setprecision(6) << std::fixed;
  h << "range resolution  " << dr << " m  (c / 2B; the published 0.05 m claim does not follow "
       "from the configured bandwidth)\n";
  h << "chirp slope       " << std::scientific << radar::chirp_slope(r) << " Hz/s\n" << std::fixed;
  h << "frames per clip   " << j["frames_per_clip"] << " (" << ctx.config.dataset.clip_duration_s
    << " s)\n";
  if (radar_problems.empty() && problems.empty())
    h << "validation        ok\n";
  for (const auto& p : problems) h << "validation        " << p << "\n";
  return problems.empty() ? kOk : kUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"RayPet radar activity-recognition pipeline", "raypet"};
  Options o;
  app.add_option("-c,--config", o.config_path, "JSON config file");
  app.add_option("--set", o.overrides, "Override a config key: section.key=value");
  app.add_option("--seed", o.seed, "Seed (falls back to config, then RAYPET_SEED)");
  app.add_option("-j,--jobs", o.jobs, "Worker thread cap; 1 runs every kernel serially");
  app.add_option("--out", o.out_dir, "Output directory (config out_dir)");
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Synthesize labeled clips, a background clip and a manifest");
  gen->add_option("-o,--output", o.output, "Output directory (default out_dir)");

  auto* pre = app.add_subcommand("preprocess", "Run the pipeline over a manifest into a dataset file");
  pre->add_option("-m,--manifest", o.manifest, "Clip manifest")->required();
  pre->add_option("-b,--background", o.background, "Background clip (default from manifest)");
  pre->add_option("--disable", o.disable, "Stages to switch off")->delimiter(',');
  pre->add_option("-o,--output", o.output, "Dataset path");

  auto* tr = app.add_subcommand("train", "Train a classifier on the training split of a dataset");
  tr->add_option("-d,--dataset", o.dataset, "Dataset file")->required();
  tr->add_option("-k,--kind", o.kind, "svm_pca, mlp, bilstm or tdcnn_bilstm");
  tr->add_option("-o,--output", o.output, "Checkpoint path");
  tr->add_option("--log", o.log, "Training log (JSON lines)");

  auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint on the test split of a dataset");
  ev->add_option("-d,--dataset", o.dataset, "Dataset file")->required();
  ev->add_option("-M,--model", o.model, "Checkpoint")->required();
  ev->add_option("-o,--output", o.output, "Report path");

  auto* cmp = app.add_subcommand("compare", "Full pipeline against the voxelize+window baseline");
  cmp->add_option("-m,--manifest", o.manifest, "Clip manifest (default: synthesize from config)");
  cmp->add_option("-b,--background", o.background, "Background clip");
  cmp->add_option("-k,--kind", o.kind, "Classifier kind");
  cmp->add_option("-o,--output", o.output, "Report path");

  auto* sw = app.add_subcommand("sweep", "Window/slide trade-off sweep");
  sw->add_option("-m,--manifest", o.manifest, "Clip manifest (default: synthesize from config)");
  sw->add_option("-b,--background", o.background, "Background clip");
  sw->add_option("-k,--kind", o.kind, "Classifier kind");
  sw->add_option("--pairs", o.pairs, "W:SW list");
  sw->add_option("-o,--output", o.output, "Report path");

  app.add_subcommand("inspect", "Print radar-derived quantities and the validation report");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  Context ctx(out, err);
  try {
    if (o.jobs < 0) throw ConfigError("--jobs must be >= 0");
    if (o.jobs > 0) {
      kernels::set_max_threads(o.jobs);
      if (o.jobs == 1) kernels::set_default_exec(kernels::Exec::kSerial);
    }
    resolve_config(ctx, o);
    const std::string name = app.get_subcommands().front()->get_name();
    ctx.log("config", {{"command", name}, {"config", ctx.config_json}});
    if (name == "inspect") return cmd_inspect(ctx, o);
    require_valid(ctx);
    if (name == "gen") return cmd_gen(ctx, o);
    if (name == "preprocess") return cmd_preprocess(ctx, o);
    if (name == "train") return cmd_train(ctx, o);
    if (name == "eval") return cmd_eval(ctx, o);
    if (name == "compare") return cmd_compare(ctx, o);
    if (name == "sweep") return cmd_sweep(ctx, o);
    err << "unknown command " << name << "\n";
    return kUsage;
  } catch (const DivergenceError& e) {
    err << "training diverged: " << e.what() << "\n";
    ctx.log("error", {{"kind", "divergence"}, {"epoch", e.epoch()}, {"message", e.what()}});
    return kDivergence;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    ctx.log("error", {{"kind", "io"}, {"message", e.what()}});
    return kIo;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    ctx.log("error", {{"kind", "parse"}, {"message", e.what()}});
    return kIo;
  } catch (const ValidationError& e) {
    err << "input error: " << e.what() << "\n";
    ctx.log("error", {{"kind", "validation"}, {"message", e.what()}});
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    ctx.log("error", {{"kind", "usage"}, {"message", e.what()}});
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << "\n";
    ctx.log("error", {{"kind", "io"}, {"message", e.what()}});
    return kIo;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << "\n";
    ctx.log("error", {{"kind", "parse"}, {"message", e.what()}});
    return kIo;
  }
}

}  // namespace raypet::cli
