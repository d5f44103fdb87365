#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "raypet/classifiers.hpp"
#include "raypet/point_cloud.hpp"
#include "raypet/preprocess.hpp"

namespace raypet::eval {

struct SplitSpec {
  double test_fraction = 0.30;
  std::uint64_t seed = 0;
};

struct SessionInfo {
  std::string session_id;
  ActivityLabel label = ActivityLabel::kEating;
  double weight = 1;  // sample count (or any size proxy) of the session
};

struct SessionSplit {
  std::set<std::string> train;
  std::set<std::string> test;
};

// Per label, sessions are shuffled by seed and moved to the test side until
// the test share of that label's weight first reaches test_fraction. At least
// one session per label stays in training. Throws SplitError when a label has
// fewer than two sessions.
SessionSplit split_sessions(std::span<const SessionInfo> sessions,
                            const SplitSpec& spec);

struct SampleSplit {
  std::vector<preprocess::WindowSample> train;
  std::vector<preprocess::WindowSample> test;
};

// Throws SplitError when a sample's session is on neither side.
SampleSplit apply_split(std::span<const preprocess::WindowSample> samples,
                        const SessionSplit& split);
SampleSplit split_dataset(std::span<const preprocess::WindowSample> samples,
                          const SplitSpec& spec);

std::vector<SessionInfo> sessions_of(
    std::span<const preprocess::WindowSample> samples);
std::vector<SessionInfo> sessions_of(std::span<const Clip> clips);

struct ClassMetrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t support = 0;
};

struct EvalReport {
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy = 0;
  double macro_f1 = 0;
  std::array<ClassMetrics, kNumLabels> per_class{};
  // confusion[true][predicted]
  std::array<std::array<std::size_t, kNumLabels>, kNumLabels> confusion{};
  nlohmann::json config = nlohmann::json::object();

  nlohmann::json to_json() const;
  std::string confusion_csv() const;
  std::string table() const;
};

EvalReport evaluate_labels(std::span<const ActivityLabel> truth,
                           std::span<const ActivityLabel> predicted);
EvalReport evaluate(
    const std::function<ActivityLabel(const preprocess::WindowSample&)>& predict,
    std::span<const preprocess::WindowSample> test);
EvalReport evaluate(const classifiers::TrainedModel& model,
                    std::span<const preprocess::WindowSample> test);

// Accuracies published for the original dog recordings. They cannot be
// reproduced on synthetic data and are echoed for reference only.
nlohmann::json published_reference();

// Preprocesses every clip (in parallel across clips) and concatenates the
// windows in clip order.
std::vector<preprocess::WindowSample> preprocess_clips(
    std::span<const Clip> clips, const Clip* background,
    const preprocess::PipelineConfig& config);

struct ArmResult {
  std::string name;
  preprocess::PipelineConfig pipeline;
  std::size_t train_samples = 0;
  std::size_t test_samples = 0;
  EvalReport report;
};

struct ComparisonReport {
  ArmResult full;
  ArmResult baseline;
  double delta = 0;  // full accuracy - baseline accuracy
  classifiers::Kind kind = classifiers::Kind::kTdCnnBiLstm;
  std::uint64_t seed = 0;
  SplitSpec split;
  SessionSplit sessions;

  nlohmann::json to_json() const;
};

// Trains the same classifier with the same seed and the same session split
// on the full pipeline and on its voxelize+window baseline.
ComparisonReport compare_pipelines(std::span<const Clip> clips,
                                   const Clip* background,
                                   const preprocess::PipelineConfig& config,
                                   classifiers::Kind kind,
                                   const classifiers::ClassifierConfig& cls,
                                   const SplitSpec& split, std::uint64_t seed);

struct WindowPair {
  int window = 0;
  int slide = 0;
};

struct SweepEntry {
  WindowPair pair;
  std::size_t train_samples = 0;
  std::size_t test_samples = 0;
  std::optional<EvalReport> report;  // empty when no window could be formed
  std::string note;
};

std::vector<SweepEntry> window_sweep(std::span<const Clip> clips,
                                     const Clip* background,
                                     const preprocess::PipelineConfig& config,
                                     std::span<const WindowPair> pairs,
                                     classifiers::Kind kind,
                                     const classifiers::ClassifierConfig& cls,
                                     const SplitSpec& split,
                                     std::uint64_t seed);

nlohmann::json sweep_to_json(std::span<const SweepEntry> entries);

}  // namespace raypet::eval
