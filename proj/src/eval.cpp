#include "raypet/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>

#include "raypet/config.hpp"
#include "raypet/error.hpp"
#include "raypet/kernels.hpp"
#include "raypet/rng.hpp"

namespace raypet::eval {

using preprocess::WindowSample;

SessionSplit split_sessions(std::span<const SessionInfo> sessions, const SplitSpec& spec) {
  if (!(spec.test_fraction > 0 && spec.test_fraction < 1))
    throw ConfigError("split test_fraction must be in (0, 1)");
  std::map<std::string, const SessionInfo*> unique;
  for (const auto& s : sessions) {
    auto [it, inserted] = unique.emplace(s.session_id, &s);
    if (!inserted && it->second->label != s.label)
      throw SplitError("session " + s.session_id + " carries two labels");
  }
  std::map<int, std::vector<const SessionInfo*>> by_label;
  for (const auto& [id, s] : unique) by_label[label_index(s->label)].push_back(s);

  SessionSplit out;
  for (auto& [label, group] : by_label) {
    if (group.size() < 2)
      throw SplitError("label " + std::string(label_name(label_from_index(label))) +
                       " has " + std::to_string(group.size()) +
                       " session; at least 2 are needed for a leak-free split");
    std::stable_sort(group.begin(), group.end(), [&](const SessionInfo* a, const SessionInfo* b) {
      const auto ha = derive_key({spec.seed, 0x5b117, hash_string(a->session_id)});
      const auto hb = derive_key({spec.seed, 0x5b117, hash_string(b->session_id)});
      return ha != hb ? ha < hb : a->session_id < b->session_id;
    });
    double total = 0;
    for (const auto* s : group) total += s->weight;
    const double target = spec.test_fraction * total;
    double taken = 0;
    std::size_t moved = 0;
    for (const auto* s : group) {
      const bool reached = taken >= target - 1e-9 * total;
      if (reached || moved + 1 >= group.size()) {
        out.train.insert(s->session_id);
        continue;
      }
      out.test.insert(s->session_id);
      taken += s->weight;
      ++moved;
    }
  }
  return out;
}

SampleSplit apply_split(std::span<const WindowSample> samples, const SessionSplit& split) {
  for (const auto& id : split.test)
    if (split.train.count(id)) throw SplitError("session " + id + " is on both sides");
  SampleSplit out;
  for (const auto& s : samples) {
    if (split.test.count(s.session_id))
      out.test.push_back(s);
    else if (split.train.count(s.session_id))
      out.train.push_back(s);
    else
      throw SplitError("session " + s.session_id + " is not in the split");
  }
  return out;
}

SampleSplit split_dataset(std::span<const WindowSample> samples, const SplitSpec& spec) {
  const auto sessions = sessions_of(samples);
  return apply_split(samples, split_sessions(sessions, spec));
}

std::vector<SessionInfo> sessions_of(std::span<const WindowSample> samples) {
  std::map<std::string, SessionInfo> m;
  for (const auto& s : samples) {
    auto [it, inserted] = m.emplace(s.session_id, SessionInfo{s.session_id, s.label, 0});
    if (it->second.label != s.label)
      throw SplitError("session " + s.session_id + " carries two labels");
    it->second.weight += 1;
  }
  std::vector<SessionInfo> out;
  for (auto& [id, info] : m) out.push_back(info);
  return out;
}

std::vector<SessionInfo> sessions_of(std::span<const Clip> clips) {
  std::vector<SessionInfo> out;
  for (const auto& c : clips)
    if (!c.is_background())
      out.push_back({c.session_id, c.label, static_cast<double>(c.frames.size())});
  return out;
}

EvalReport evaluate_labels(std::span<const ActivityLabel> truth,
                           std::span<const ActivityLabel> predicted) {
  if (truth.size() != predicted.size())
    throw ShapeError("evaluate: " + std::to_string(truth.size()) + " labels but " +
                     std::to_string(predicted.size()) + " predictions");
  if (truth.empty()) throw Error("evaluate: empty test set");
  EvalReport r;
  r.total = truth.size();
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = label_index(truth[i]), p = label_index(predicted[i]);
    ++r.confusion[t][p];
    r.correct += t == p;
  }
  r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.total);
  double f1_sum = 0;
  int present = 0;
  for (int c = 0; c < kNumLabels; ++c) {
    std::size_t row = 0, col = 0;
    for (int k = 0; k < kNumLabels; ++k) {
      row += r.confusion[c][k];
      col += r.confusion[k][c];
    }
    const double tp = static_cast<double>(r.confusion[c][c]);
    auto& m = r.per_class[c];
    m.support = row;
    m.precision = col ? tp / static_cast<double>(col) : 0.0;
    m.recall = row ? tp / static_cast<double>(row) : 0.0;
    m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    if (row || col) {
      f1_sum += m.f1;
      ++present;
    }
  }
  r.macro_f1 = present ? f1_sum / present : 0.0;
  return r;
}

EvalReport evaluate(const std::function<ActivityLabel(const WindowSample&)>& predict,
                    std::span<const WindowSample> test) {
  std::vector<ActivityLabel> truth, pred;
  for (const auto& s : test) {
    truth.push_back(s.label);
    pred.push_back(predict(s));
  }
  return evaluate_labels(truth, pred);
}

EvalReport evaluate(const classifiers::TrainedModel& model, std::span<const WindowSample> test) {
  std::vector<ActivityLabel> truth(test.size()), pred(test.size());
  kernels::for_each_index(kernels::default_exec(), test.size(), [&](std::size_t i) {
    truth[i] = test[i].label;
    pred[i] = model.predict(test[i]).label;
  });
  EvalReport r = evaluate_labels(truth, pred);
  r.config["model"] = classifiers::kind_name(model.kind());
  return r;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json labels = nlohmann::json::array(), per = nlohmann::json::object(),
                 matrix = nlohmann::json::array();
  for (ActivityLabel l : kAllLabels) {
    const auto& m = per_class[label_index(l)];
    labels.push_back(label_name(l));
    per[std::string(label_name(l))] = {
        {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
  }
  for (const auto& row : confusion) matrix.push_back(row);
  return {{"total", total},       {"correct", correct},    {"accuracy", accuracy},
          {"macro_f1", macro_f1}, {"labels", labels},      {"per_class", per},
          {"confusion", matrix},  {"config", config}};
}

std::string EvalReport::confusion_csv() const {
  std::ostringstream out;
  out << "true\\predicted";
  for (ActivityLabel l : kAllLabels) out << ',' << label_name(l);
  out << '\n';
  for (ActivityLabel t : kAllLabels) {
    out << label_name(t);
    for (int p = 0; p < kNumLabels; ++p) out << ',' << confusion[label_index(t)][p];
    out << '\n';
  }
  return out.str();
}

std::string EvalReport::table() const {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3);
  out << "accuracy " << accuracy << " (" << correct << "/" << total << ")  macro-F1 "
      << macro_f1 << "\n";
  out << std::left << std::setw(10) << "class" << std::right << std::setw(10) << "precision"
      << std::setw(8) << "recall" << std::setw(8) << "f1" << std::setw(9) << "support" << "\n";
  for (ActivityLabel l : kAllLabels) {
    const auto& m = per_class[label_index(l)];
    out << std::left << std::setw(10) << label_name(l) << std::right << std::setw(10)
        << m.precision << std::setw(8) << m.recall << std::setw(8) << m.f1 << std::setw(9)
        << m.support << "\n";
  }
  out << "confusion (rows true, columns predicted)\n";
  for (ActivityLabel t : kAllLabels) {
    out << std::left << std::setw(10) << label_name(t) << std::right;
    for (int p = 0; p < kNumLabels; ++p) out << std::setw(6) << confusion[label_index(t)][p];
    out << "\n";
  }
  return out.str();
}

nlohmann::json published_reference() {
  return {{"status", "published on real dog recordings; not reproducible on synthetic data"},
          {"overall_accuracy",
           {{"svm_pca", 0.41}, {"mlp", 0.78}, {"bilstm", 0.79}, {"tdcnn_bilstm", 0.89}}},
          {"tdcnn_bilstm_confusion_matrix_accuracy", 0.85},
          {"note", "the 0.89 overall and 0.85 confusion-matrix figures for tdcnn_bilstm "
                   "disagree in the source and are kept verbatim"},
          {"full_vs_baseline_gain", "up to 0.12 overall accuracy"}};
}

std::vector<WindowSample> preprocess_clips(std::span<const Clip> clips, const Clip* background,
                                           const preprocess::PipelineConfig& config) {
  if (auto problems = preprocess::validate(config); !problems.empty())
    throw ConfigError("pipeline: " + problems.front());
  std::optional<preprocess::BackgroundReference> ref;
  if (background && config.stages.background_filter)
    ref.emplace(*background, config.background_radius);
  std::vector<std::vector<WindowSample>> per_clip(clips.size());
  kernels::for_each_index(kernels::default_exec(), clips.size(), [&](std::size_t i) {
    if (clips[i].is_background()) return;
    per_clip[i] = preprocess::run_pipeline(clips[i], ref ? &*ref : nullptr, config, nullptr,
                                           kernels::Exec::kSerial);
  });
  std::vector<WindowSample> out;
  for (auto& v : per_clip)
    for (auto& s : v) out.push_back(std::move(s));
  return out;
}

namespace {

nlohmann::json split_json(const SplitSpec& s) {
  return {{"test_fraction", s.test_fraction}, {"seed", s.seed}};
}

ArmResult run_arm(const std::string& name, std::span<const Clip> clips, const Clip* background,
                  const preprocess::PipelineConfig& pipeline, classifiers::Kind kind,
                  const classifiers::ClassifierConfig& cls, const SessionSplit& sessions,
                  std::uint64_t seed) {
  ArmResult arm;
  arm.name = name;
  arm.pipeline = pipeline;
  const auto samples = preprocess_clips(clips, background, pipeline);
  const auto split = apply_split(samples, sessions);
  arm.train_samples = split.train.size();
  arm.test_samples = split.test.size();
  if (split.train.empty() || split.test.empty())
    throw TrainingError(name + " pipeline produced no " +
                        (split.train.empty() ? "training" : "test") + " windows");
  const auto model = classifiers::train(kind, split.train, cls, seed);
  arm.report = evaluate(*model, split.test);
  arm.report.config["pipeline"] = pipeline_to_json(pipeline);
  arm.report.config["seed"] = seed;
  return arm;
}

nlohmann::json arm_json(const ArmResult& a) {
  return {{"name", a.name},
          {"pipeline", pipeline_to_json(a.pipeline)},
          {"train_samples", a.train_samples},
          {"test_samples", a.test_samples},
          {"report", a.report.to_json()}};
}

}  // namespace

nlohmann::json ComparisonReport::to_json() const {
  return {{"kind", classifiers::kind_name(kind)},
          {"seed", seed},
          {"split", split_json(split)},
          {"sessions",
           {{"train", std::vector<std::string>(sessions.train.begin(), sessions.train.end())},
            {"test", std::vector<std::string>(sessions.test.begin(), sessions.test.end())}}},
          {"full", arm_json(full)},
          {"baseline", arm_json(baseline)},
          {"delta", delta},
          {"reference", published_reference()}};
}

ComparisonReport compare_pipelines(std::span<const Clip> clips, const Clip* background,
                                   const preprocess::PipelineConfig& config,
                                   classifiers::Kind kind,
                                   const classifiers::ClassifierConfig& cls,
                                   const SplitSpec& split, std::uint64_t seed) {
  ComparisonReport r;
  r.kind = kind;
  r.seed = seed;
  r.split = split;
  r.sessions = split_sessions(sessions_of(clips), split);
  r.full = run_arm("full", clips, background, config, kind, cls, r.sessions, seed);
  r.baseline = run_arm("baseline", clips, background, preprocess::baseline_config(config), kind,
                       cls, r.sessions, seed);
  r.delta = r.full.report.accuracy - r.baseline.report.accuracy;
  return r;
}

std::vector<SweepEntry> window_sweep(std::span<const Clip> clips, const Clip* background,
                                     const preprocess::PipelineConfig& config,
                                     std::span<const WindowPair> pairs, classifiers::Kind kind,
                                     const classifiers::ClassifierConfig& cls,
                                     const SplitSpec& split, std::uint64_t seed) {
  const SessionSplit sessions = split_sessions(sessions_of(clips), split);
  std::vector<SweepEntry> out;
  for (const WindowPair& pair : pairs) {
    SweepEntry e;
    e.pair = pair;
    preprocess::PipelineConfig cfg = config;
    cfg.window_size = pair.window;
    cfg.window_slide = pair.slide;
    if (pair.slide < 1 || pair.window < 1 || pair.slide > pair.window)
      throw ConfigError("window pair W=" + std::to_string(pair.window) +
                        " SW=" + std::to_string(pair.slide) + " needs 1 <= SW <= W");
    const auto samples = preprocess_clips(clips, background, cfg);
    const auto s = apply_split(samples, sessions);
    e.train_samples = s.train.size();
    e.test_samples = s.test.size();
    std::set<int> classes;
    for (const auto& w : s.train) classes.insert(label_index(w.label));
    if (s.train.empty() || s.test.empty()) {
      e.note = "no windows on one side of the split";
    } else if (classes.size() < 2) {
      e.note = "training windows cover fewer than two classes";
    } else {
      const auto model = classifiers::train(kind, s.train, cls, seed);
      e.report = evaluate(*model, s.test);
      e.report->config["pipeline"] = pipeline_to_json(cfg);
      e.report->config["seed"] = seed;
    }
    out.push_back(std::move(e));
  }
  return out;
}

nlohmann::json sweep_to_json(std::span<const SweepEntry> entries) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json j = {{"window", e.pair.window},
                        {"slide", e.pair.slide},
                        {"train_samples", e.train_samples},
                        {"test_samples", e.test_samples}};
    j["report"] = e.report ? e.report->to_json() : nlohmann::json(nullptr);
    if (!e.note.empty()) j["note"] = e.note;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace raypet::eval
