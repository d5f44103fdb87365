#include "raypet/config.hpp"

#include <fstream>
#include <set>

#include "raypet/error.hpp"

namespace raypet {

using nlohmann::json;

namespace {

// Reads known keys out of one JSON object and rejects the rest.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  void get(const char* key, double& out) {
    if (const json* v = take(key)) {
      if (!v->is_number()) fail(key, "a number");
      out = v->get<double>();
    }
  }
  void get(const char* key, int& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer()) fail(key, "an integer");
      out = v->get<int>();
    }
  }
  void get(const char* key, std::uint64_t& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_unsigned()) fail(key, "a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void get(const char* key, bool& out) {
    if (const json* v = take(key)) {
      if (!v->is_boolean()) fail(key, "true or false");
      out = v->get<bool>();
    }
  }
  void get(const char* key, std::string& out) {
    if (const json* v = take(key)) {
      if (!v->is_string()) fail(key, "a string");
      out = v->get<std::string>();
    }
  }
  void get(const char* key, std::vector<double>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array()) fail(key, "an array of numbers");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number()) fail(key, "an array of numbers");
        out.push_back(e.get<double>());
      }
    }
  }
  void get(const char* key, std::vector<int>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array()) fail(key, "an array of integers");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number_integer()) fail(key, "an array of integers");
        out.push_back(e.get<int>());
      }
    }
  }
  void get(const char* key, Box& out) {
    if (!has(key)) return;
    Section s = sub(key);
    std::vector<double> lo(out.lo.begin(), out.lo.end()), hi(out.hi.begin(), out.hi.end());
    s.get("lo", lo);
    s.get("hi", hi);
    s.finish();
    if (lo.size() != 3 || hi.size() != 3) fail(key, "{\"lo\": [x, y, z], \"hi\": [x, y, z]}");
    std::copy(lo.begin(), lo.end(), out.lo.begin());
    std::copy(hi.begin(), hi.end(), out.hi.begin());
  }

  Section sub(const char* key) {
    seen_.insert(key);
    return Section(j_.at(key), key_path(key));
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigError("unknown config key " + key_path(key));
  }

  const json& raw(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  [[noreturn]] void fail(const char* key, const char* expected) const {
    throw ConfigError(key_path(key) + " must be " + expected);
  }

 private:
  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  std::string where() const { return path_.empty() ? "config" : path_; }
  const json* take(const char* key) {
    if (!j_.contains(key)) return nullptr;
    seen_.insert(key);
    return &j_.at(key);
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

json box_json(const Box& b) { return {{"lo", b.lo}, {"hi", b.hi}}; }

json training_json(const classifiers::NeuralTraining& t) {
  return {{"epochs", t.epochs},
          {"batch_size", t.batch_size},
          {"learning_rate", t.learning_rate},
          {"validation_fraction", t.validation_fraction},
          {"input_scale", t.input_scale}};
}

void read_training(Section& parent, classifiers::NeuralTraining& t) {
  if (!parent.has("training")) return;
  Section s = parent.sub("training");
  s.get("epochs", t.epochs);
  s.get("batch_size", t.batch_size);
  s.get("learning_rate", t.learning_rate);
  s.get("validation_fraction", t.validation_fraction);
  s.get("input_scale", t.input_scale);
  s.finish();
}

void read_pipeline(Section& s, preprocess::PipelineConfig& p) {
  s.get("background_radius", p.background_radius);
  s.get("clutter_window", p.clutter_window);
  s.get("clutter_radius", p.clutter_radius);
  s.get("dbscan_eps", p.dbscan_eps);
  s.get("dbscan_min_points", p.dbscan_min_points);
  s.get("aggregation_factor", p.aggregation_factor);
  if (s.has("voxel_dims")) {
    std::vector<int> d{p.voxel_dims.m, p.voxel_dims.n, p.voxel_dims.p};
    s.get("voxel_dims", d);
    if (d.size() != 3) s.fail("voxel_dims", "[m, n, p]");
    p.voxel_dims = {d[0], d[1], d[2]};
  }
  s.get("voxel_bounds", p.voxel_bounds);
  s.get("binary_occupancy", p.binary_occupancy);
  s.get("window_size", p.window_size);
  s.get("window_slide", p.window_slide);
  if (s.has("stages")) {
    Section st = s.sub("stages");
    st.get("background_filter", p.stages.background_filter);
    st.get("static_clutter", p.stages.static_clutter);
    st.get("dbscan", p.stages.dbscan);
    st.get("aggregation", p.stages.aggregation);
    st.finish();
  }
  s.finish();
}

void read_classifier(Section& s, classifiers::ClassifierConfig& c) {
  if (s.has("svm")) {
    Section v = s.sub("svm");
    v.get("pca_components", c.svm.pca_components);
    v.get("c_grid", c.svm.c_grid);
    v.get("gamma_grid", c.svm.gamma_grid);
    v.get("cv_folds", c.svm.cv_folds);
    v.get("kkt_tolerance", c.svm.kkt_tolerance);
    v.get("max_passes", c.svm.max_passes);
    v.finish();
  }
  if (s.has("mlp")) {
    Section v = s.sub("mlp");
    v.get("hidden", c.mlp.hidden);
    read_training(v, c.mlp.training);
    v.finish();
  }
  if (s.has("bilstm")) {
    Section v = s.sub("bilstm");
    v.get("hidden", c.bilstm.hidden);
    read_training(v, c.bilstm.training);
    v.finish();
  }
  if (s.has("tdcnn")) {
    Section v = s.sub("tdcnn");
    v.get("conv1_channels", c.tdcnn.conv1_channels);
    v.get("conv2_channels", c.tdcnn.conv2_channels);
    v.get("embedding", c.tdcnn.embedding);
    v.get("hidden", c.tdcnn.hidden);
    read_training(v, c.tdcnn.training);
    v.finish();
  }
  s.finish();
}

synth::NoiseModel noise_preset(const std::string& name) {
  if (name == "default") return synth::default_noise();
  if (name == "high") return synth::high_noise();
  if (name == "zero") return synth::zero_noise();
  throw ConfigError("noise.preset must be one of default, high, zero (got " + name + ")");
}

}  // namespace

json pipeline_to_json(const preprocess::PipelineConfig& p) {
  return {{"background_radius", p.background_radius},
          {"clutter_window", p.clutter_window},
          {"clutter_radius", p.clutter_radius},
          {"dbscan_eps", p.dbscan_eps},
          {"dbscan_min_points", p.dbscan_min_points},
          {"aggregation_factor", p.aggregation_factor},
          {"voxel_dims", {p.voxel_dims.m, p.voxel_dims.n, p.voxel_dims.p}},
          {"voxel_bounds", box_json(p.voxel_bounds)},
          {"binary_occupancy", p.binary_occupancy},
          {"window_size", p.window_size},
          {"window_slide", p.window_slide},
          {"stages",
           {{"background_filter", p.stages.background_filter},
            {"static_clutter", p.stages.static_clutter},
            {"dbscan", p.stages.dbscan},
            {"aggregation", p.stages.aggregation}}}};
}

preprocess::PipelineConfig pipeline_from_json(const json& j) {
  preprocess::PipelineConfig p;
  Section s(j, "pipeline");
  read_pipeline(s, p);
  return p;
}

json classifier_to_json(const classifiers::ClassifierConfig& c) {
  return {{"svm",
           {{"pca_components", c.svm.pca_components},
            {"c_grid", c.svm.c_grid},
            {"gamma_grid", c.svm.gamma_grid},
            {"cv_folds", c.svm.cv_folds},
            {"kkt_tolerance", c.svm.kkt_tolerance},
            {"max_passes", c.svm.max_passes}}},
          {"mlp", {{"hidden", c.mlp.hidden}, {"training", training_json(c.mlp.training)}}},
          {"bilstm",
           {{"hidden", c.bilstm.hidden}, {"training", training_json(c.bilstm.training)}}},
          {"tdcnn",
           {{"conv1_channels", c.tdcnn.conv1_channels},
            {"conv2_channels", c.tdcnn.conv2_channels},
            {"embedding", c.tdcnn.embedding},
            {"hidden", c.tdcnn.hidden},
            {"training", training_json(c.tdcnn.training)}}}};
}

classifiers::ClassifierConfig classifier_from_json(const json& j) {
  classifiers::ClassifierConfig c;
  Section s(j, "classifier");
  read_classifier(s, c);
  return c;
}

json to_json(const RunConfig& c) {
  json clutter = json::array();
  for (const Point& p : c.noise.static_clutter_points)
    clutter.push_back({p.x, p.y, p.z, p.velocity, p.intensity});
  json counts = json::object();
  for (ActivityLabel l : kAllLabels)
    counts[std::string(label_name(l))] = c.dataset.counts[label_index(l)];
  return {
      {"seed", c.seed},
      {"out_dir", c.out_dir},
      {"radar",
       {{"samples_per_chirp", c.radar.samples_per_chirp},
        {"chirps_per_frame", c.radar.chirps_per_frame},
        {"start_frequency_hz", c.radar.start_frequency_hz},
        {"frame_duration_s", c.radar.frame_duration_s},
        {"bandwidth_hz", c.radar.bandwidth_hz},
        {"pri_s", c.radar.pri_s},
        {"validate_ti_band", c.radar_validation.ti_band}}},
      {"scene",
       {{"subject_distance_m", c.scene.subject_distance_m},
        {"radar_height_m", c.scene.radar_height_m},
        {"points_per_frame", c.scene.points_per_frame},
        {"lateral_spread_m", c.scene.lateral_spread_m},
        {"distance_spread_m", c.scene.distance_spread_m},
        {"extent", box_json(c.scene.extent)}}},
      {"animal",
       {{"length_m", c.animal.length_m},
        {"shoulder_height_m", c.animal.shoulder_height_m},
        {"scale", c.animal.scale},
        {"size_jitter", c.animal.size_jitter},
        {"parts",
         {{"torso", c.animal.parts.torso},
          {"head", c.animal.parts.head},
          {"legs", c.animal.parts.legs},
          {"tail", c.animal.parts.tail}}}}},
      {"noise",
       {{"static_clutter_points", clutter},
        {"outlier_rate", c.noise.outlier_rate},
        {"jitter_sigma", c.noise.jitter_sigma},
        {"dropout_prob", c.noise.dropout_prob},
        {"tail_wag_rate", c.noise.tail_wag_rate},
        {"outlier_region", box_json(c.noise.outlier_region)}}},
      {"dataset",
       {{"counts", counts},
        {"clip_duration_s", c.dataset.clip_duration_s},
        {"walking_duration_s", c.dataset.walking_duration_s},
        {"background_duration_s", c.background_duration_s}}},
      {"pipeline", pipeline_to_json(c.pipeline)},
      {"classifier", classifier_to_json(c.classifier)},
      {"split", {{"test_fraction", c.split.test_fraction}}}};
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  Section root(j, "");
  root.get("seed", c.seed);
  root.get("out_dir", c.out_dir);
  if (root.has("radar")) {
    Section s = root.sub("radar");
    s.get("samples_per_chirp", c.radar.samples_per_chirp);
    s.get("chirps_per_frame", c.radar.chirps_per_frame);
    s.get("start_frequency_hz", c.radar.start_frequency_hz);
    s.get("frame_duration_s", c.radar.frame_duration_s);
    s.get("bandwidth_hz", c.radar.bandwidth_hz);
    s.get("pri_s", c.radar.pri_s);
    s.get("validate_ti_band", c.radar_validation.ti_band);
    s.finish();
  }
  if (root.has("scene")) {
    Section s = root.sub("scene");
    s.get("subject_distance_m", c.scene.subject_distance_m);
    s.get("radar_height_m", c.scene.radar_height_m);
    s.get("points_per_frame", c.scene.points_per_frame);
    s.get("lateral_spread_m", c.scene.lateral_spread_m);
    s.get("distance_spread_m", c.scene.distance_spread_m);
    s.get("extent", c.scene.extent);
    s.finish();
  }
  if (root.has("animal")) {
    Section s = root.sub("animal");
    s.get("length_m", c.animal.length_m);
    s.get("shoulder_height_m", c.animal.shoulder_height_m);
    s.get("scale", c.animal.scale);
    s.get("size_jitter", c.animal.size_jitter);
    if (s.has("parts")) {
      Section p = s.sub("parts");
      p.get("torso", c.animal.parts.torso);
      p.get("head", c.animal.parts.head);
      p.get("legs", c.animal.parts.legs);
      p.get("tail", c.animal.parts.tail);
      p.finish();
    }
    s.finish();
  }
  if (root.has("noise")) {
    Section s = root.sub("noise");
    std::string preset;
    s.get("preset", preset);
    if (!preset.empty()) c.noise = noise_preset(preset);
    if (s.has("static_clutter_points")) {
      const json& pts = s.raw("static_clutter_points");
      if (!pts.is_array()) s.fail("static_clutter_points", "an array of [x, y, z, v, i]");
      c.noise.static_clutter_points.clear();
      for (const auto& p : pts) {
        if (!p.is_array() || p.size() != 5)
          s.fail("static_clutter_points", "an array of [x, y, z, v, i]");
        for (const auto& v : p)
          if (!v.is_number()) s.fail("static_clutter_points", "an array of [x, y, z, v, i]");
        c.noise.static_clutter_points.push_back(
            {p[0].get<double>(), p[1].get<double>(), p[2].get<double>(), p[3].get<double>(),
             p[4].get<double>()});
      }
    }
    s.get("outlier_rate", c.noise.outlier_rate);
    s.get("jitter_sigma", c.noise.jitter_sigma);
    s.get("dropout_prob", c.noise.dropout_prob);
    s.get("tail_wag_rate", c.noise.tail_wag_rate);
    s.get("outlier_region", c.noise.outlier_region);
    s.finish();
  }
  if (root.has("dataset")) {
    Section s = root.sub("dataset");
    if (s.has("counts")) {
      Section counts = s.sub("counts");
      for (ActivityLabel l : kAllLabels)
        counts.get(std::string(label_name(l)).c_str(), c.dataset.counts[label_index(l)]);
      counts.finish();
    }
    s.get("clip_duration_s", c.dataset.clip_duration_s);
    s.get("walking_duration_s", c.dataset.walking_duration_s);
    s.get("background_duration_s", c.background_duration_s);
    s.finish();
  }
  if (root.has("pipeline")) {
    Section s = root.sub("pipeline");
    read_pipeline(s, c.pipeline);
  }
  if (root.has("classifier")) {
    Section s = root.sub("classifier");
    read_classifier(s, c.classifier);
  }
  if (root.has("split")) {
    Section s = root.sub("split");
    s.get("test_fraction", c.split.test_fraction);
    s.finish();
  }
  root.finish();
  c.dataset.base_seed = c.seed;
  c.split.seed = c.seed;
  c.scene.seed = c.seed;
  return c;
}

void apply_override(json& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("override must look like section.key=value, got " +
                      std::string(assignment));
  const std::string path(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &config;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw ConfigError("empty key in override " + path);
    if (!node->is_object()) throw ConfigError("override " + path + " descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> out;
  auto add = [&](const char* section, const std::vector<std::string>& problems) {
    for (const auto& p : problems) out.push_back(std::string(section) + ": " + p);
  };
  add("radar", radar::validate_config(c.radar, c.radar_validation));
  add("animal", synth::validate(c.animal));
  add("noise", synth::validate(c.noise, c.scene));
  add("scene", synth::validate(c.scene, c.radar));
  add("pipeline", preprocess::validate(c.pipeline));
  add("classifier", classifiers::validate(c.classifier));
  std::vector<std::string> ds;
  for (int n : c.dataset.counts)
    if (n < 0) ds.push_back("counts must be >= 0");
  if (!(c.dataset.clip_duration_s > 0)) ds.push_back("clip_duration_s must be > 0");
  if (!(c.dataset.walking_duration_s > 0)) ds.push_back("walking_duration_s must be > 0");
  if (!(c.background_duration_s > 0)) ds.push_back("background_duration_s must be > 0");
  add("dataset", ds);
  if (!(c.split.test_fraction > 0 && c.split.test_fraction < 1))
    out.push_back("split: test_fraction must be in (0, 1)");
  return out;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config " + path.string() + " is not valid JSON");
  return run_config_from_json(j);
}

}  // namespace raypet
