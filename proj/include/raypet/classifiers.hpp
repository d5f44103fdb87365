#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "raypet/learn/layers.hpp"
#include "raypet/point_cloud.hpp"
#include "raypet/preprocess.hpp"

namespace raypet::classifiers {

enum class Kind { kSvmPca, kMlp, kBiLstm, kTdCnnBiLstm };

inline constexpr std::array<Kind, 4> kAllKinds = {
    Kind::kSvmPca, Kind::kMlp, Kind::kBiLstm, Kind::kTdCnnBiLstm};

std::string_view kind_name(Kind kind);
std::optional<Kind> parse_kind(std::string_view name);

// Shared settings of the three networks.
struct NeuralTraining {
  int epochs = 40;
  int batch_size = 16;
  double learning_rate = 0.001;
  double validation_fraction = 0.15;  // of training sessions, per class
  double input_scale = 1.0;           // multiplies voxel counts
};

struct SvmPcaConfig {
  int pca_components = 3000;  // capped at n_train - 1
  std::vector<double> c_grid{0.1, 1.0, 10.0};
  // A value of 0 stands for 1 / d', d' the number of PCA components.
  std::vector<double> gamma_grid{0.0, 0.01, 0.001};
  int cv_folds = 3;
  double kkt_tolerance = 1e-3;
  int max_passes = 2000;
};

struct MlpConfig {
  std::vector<int> hidden{256, 128, 64};
  NeuralTraining training;
};

struct BiLstmConfig {
  int hidden = 64;
  NeuralTraining training;
};

struct TdCnnBiLstmConfig {
  int conv1_channels = 8;
  int conv2_channels = 16;
  int embedding = 64;
  int hidden = 64;
  NeuralTraining training;
};

struct ClassifierConfig {
  SvmPcaConfig svm;
  MlpConfig mlp;
  BiLstmConfig bilstm;
  TdCnnBiLstmConfig tdcnn;
};

std::vector<std::string> validate(const ClassifierConfig& config);

struct SampleShape {
  std::size_t window = 0;
  preprocess::VoxelDims dims;

  std::size_t feature_size() const { return window * dims.size(); }
  bool operator==(const SampleShape&) const = default;
};

SampleShape shape_of(const preprocess::WindowSample& sample);

struct Prediction {
  ActivityLabel label = ActivityLabel::kEating;
  std::vector<double> scores;  // one per class
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0;
  double validation_loss = 0;
  double seconds = 0;
};

class TrainedModel {
 public:
  virtual ~TrainedModel() = default;

  virtual Kind kind() const = 0;
  // Throws ShapeError when the sample does not match the trained shape.
  virtual Prediction predict(const preprocess::WindowSample& sample) const = 0;

  const SampleShape& shape() const { return shape_; }
  const std::vector<EpochLog>& history() const { return history_; }
  // 1-based epoch whose parameters were kept; 0 for the SVM.
  int best_epoch() const { return best_epoch_; }
  double best_validation_loss() const { return best_loss_; }

  // Self-describing checkpoint with a versioned header.
  nlohmann::json to_json() const;
  static std::unique_ptr<TrainedModel> from_json(const nlohmann::json& j);

 protected:
  virtual nlohmann::json body_json() const = 0;

  SampleShape shape_;
  std::vector<EpochLog> history_;
  int best_epoch_ = 0;
  double best_loss_ = 0;
  friend class ModelAccess;
};

using EpochCallback = std::function<void(const EpochLog&)>;

// Deterministic for a given seed and sample multiset: samples are put into
// canonical (session_id, start_frame) order first. Throws TrainingError for
// an empty or single-class dataset, DivergenceError on non-finite loss.
std::unique_ptr<TrainedModel> train(
    Kind kind, std::span<const preprocess::WindowSample> samples,
    const ClassifierConfig& config, std::uint64_t seed,
    const EpochCallback& on_epoch = {});

// Row-major over (window, z, x, y); length W * m * n * p.
std::vector<double> flatten_features(const preprocess::WindowSample& sample);
std::vector<preprocess::VoxelGrid> unflatten_features(
    std::span<const double> features, std::size_t window,
    const preprocess::VoxelDims& dims);

// Network topology for a neural kind, with freshly initialized weights.
learn::Sequential build_network(Kind kind, const SampleShape& shape,
                                const ClassifierConfig& config,
                                std::uint64_t seed);
// Input tensor fed to that network.
learn::Tensor network_input(Kind kind, const preprocess::WindowSample& sample,
                            double input_scale);

// Neural models expose their network for inspection.
const learn::Sequential* network_of(const TrainedModel& model);

}  // namespace raypet::classifiers
