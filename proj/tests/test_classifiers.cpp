#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "raypet/classifiers.hpp"
#include "raypet/error.hpp"
#include "support.hpp"

using namespace raypet;
using namespace raypet::classifiers;
using preprocess::WindowSample;

namespace {

double accuracy(const TrainedModel& m, const std::vector<WindowSample>& samples) {
  std::size_t right = 0;
  for (const auto& s : samples) right += m.predict(s).label == s.label;
  return static_cast<double>(right) / static_cast<double>(samples.size());
}

// One trained model per kind on the toy set, shared by several tests.
const TrainedModel& toy_model(Kind kind) {
  static std::map<Kind, std::unique_ptr<TrainedModel>> cache;
  auto& slot = cache[kind];
  if (!slot) {
    const auto toy = support::separable_toy();
    slot = train(kind, toy, ClassifierConfig{}, 7);
  }
  return *slot;
}

WindowSample zero_window(std::size_t window, preprocess::VoxelDims dims) {
  std::vector<preprocess::VoxelGrid> grids(window);
  for (auto& g : grids) {
    g.dims = dims;
    g.counts.assign(dims.size(), 0);
  }
  return support::make_sample(std::move(grids), ActivityLabel::kEating, "zero");
}

class PerKind : public ::testing::TestWithParam<Kind> {};

std::string kind_label(const ::testing::TestParamInfo<Kind>& info) {
  return std::string(kind_name(info.param));
}

}  // namespace

TEST(Kinds, NamesRoundTrip) {
  for (Kind k : kAllKinds) EXPECT_EQ(parse_kind(kind_name(k)), k);
  EXPECT_FALSE(parse_kind("cnn").has_value());
}

TEST_P(PerKind, SeparableToyTrainsToNinetyNinePercent) {
  const auto toy = support::separable_toy();
  const TrainedModel& m = toy_model(GetParam());
  EXPECT_GE(accuracy(m, toy), 0.99);
  EXPECT_EQ(m.kind(), GetParam());
  EXPECT_EQ(m.shape(), (SampleShape{5, {2, 4, 4}}));
}

TEST_P(PerKind, SameSeedSameModel) {
  const auto toy = support::separable_toy();
  const auto again = train(GetParam(), toy, ClassifierConfig{}, 7);
  auto a = toy_model(GetParam()).to_json();
  auto b = again->to_json();
  EXPECT_EQ(a, b);
}

TEST_P(PerKind, InputOrderDoesNotMatter) {
  auto toy = support::separable_toy();
  std::reverse(toy.begin(), toy.end());
  std::rotate(toy.begin(), toy.begin() + 37, toy.end());
  const auto shuffled = train(GetParam(), toy, ClassifierConfig{}, 7);
  EXPECT_EQ(shuffled->to_json(), toy_model(GetParam()).to_json());
  const auto held_out = support::separable_toy(6, 99);
  for (const auto& s : held_out)
    EXPECT_EQ(shuffled->predict(s).label, toy_model(GetParam()).predict(s).label);
}

TEST_P(PerKind, ZeroWindowGivesFiniteScores) {
  const Prediction p = toy_model(GetParam()).predict(zero_window(5, {2, 4, 4}));
  ASSERT_EQ(p.scores.size(), 5u);
  for (double s : p.scores) EXPECT_TRUE(std::isfinite(s));
  const auto best = std::max_element(p.scores.begin(), p.scores.end()) - p.scores.begin();
  EXPECT_EQ(label_index(p.label), best);
}

TEST_P(PerKind, ShapeMismatchRejected) {
  EXPECT_THROW(toy_model(GetParam()).predict(zero_window(4, {2, 4, 4})), ShapeError);
  EXPECT_THROW(toy_model(GetParam()).predict(zero_window(5, {2, 4, 3})), ShapeError);
}

TEST_P(PerKind, SingleClassIsTrainingError) {
  auto toy = support::separable_toy(4);
  std::vector<WindowSample> one(toy.begin(), toy.begin() + 4);
  EXPECT_THROW(train(GetParam(), one, ClassifierConfig{}, 1), TrainingError);
  EXPECT_THROW(train(GetParam(), std::vector<WindowSample>{}, ClassifierConfig{}, 1), TrainingError);
}

TEST_P(PerKind, CheckpointRoundTrip) {
  const TrainedModel& m = toy_model(GetParam());
  const auto j = m.to_json();
  const auto back = TrainedModel::from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back->to_json(), j);
  for (const auto& s : support::separable_toy(3, 5)) {
    const auto a = m.predict(s), b = back->predict(s);
    EXPECT_EQ(a.label, b.label);
    EXPECT_EQ(a.scores, b.scores);
  }
}

TEST_P(PerKind, LabelPermutationEquivariance) {
  // Swap eating <-> walking and lying -> sitting -> standing -> lying.
  const std::array<int, 5> perm = {4, 2, 3, 1, 0};
  auto toy = support::separable_toy();
  auto permuted = toy;
  for (auto& s : permuted) s.label = label_from_index(perm[static_cast<std::size_t>(label_index(s.label))]);
  const auto m = train(GetParam(), permuted, ClassifierConfig{}, 7);
  for (const auto& s : support::separable_toy(4, 123)) {
    const auto orig = toy_model(GetParam()).predict(s).label;
    EXPECT_EQ(m->predict(s).label, label_from_index(perm[static_cast<std::size_t>(label_index(orig))]));
  }
}

INSTANTIATE_TEST_SUITE_P(All, PerKind, ::testing::ValuesIn(kAllKinds), kind_label);

TEST(Neural, ScoresSumToOne) {
  for (Kind k : {Kind::kMlp, Kind::kBiLstm, Kind::kTdCnnBiLstm})
    for (const auto& s : support::separable_toy(2, 77)) {
      const auto p = toy_model(k).predict(s);
      double sum = 0;
      for (double v : p.scores) {
        EXPECT_GE(v, 0);
        sum += v;
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
}

TEST(Neural, BestCheckpointHasLowestValidationLoss) {
  for (Kind k : {Kind::kMlp, Kind::kBiLstm, Kind::kTdCnnBiLstm}) {
    const TrainedModel& m = toy_model(k);
    ASSERT_EQ(m.history().size(), 40u);
    ASSERT_GE(m.best_epoch(), 1);
    EXPECT_EQ(m.history()[static_cast<std::size_t>(m.best_epoch() - 1)].validation_loss,
              m.best_validation_loss());
    for (const auto& e : m.history()) EXPECT_LE(m.best_validation_loss(), e.validation_loss);
  }
}

TEST(Neural, EpochCallbackSeesEveryEpoch) {
  ClassifierConfig cfg;
  cfg.mlp.training.epochs = 3;
  std::vector<int> seen;
  train(Kind::kMlp, support::separable_toy(5), cfg, 1, [&](const EpochLog& e) { seen.push_back(e.epoch); });
  EXPECT_EQ(seen, (std::vector<int>{1, 2, 3}));
}

TEST(Neural, DivergenceReportsEpoch) {
  ClassifierConfig cfg;
  cfg.mlp.training.epochs = 3;
  cfg.mlp.training.learning_rate = 1e300;
  cfg.mlp.training.input_scale = 1e300;
  try {
    train(Kind::kMlp, support::separable_toy(), cfg, 1);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.epoch(), 1);
  }
}

TEST(Neural, NetworkShapes) {
  ClassifierConfig cfg;
  const SampleShape shape{30, {10, 32, 32}};
  const auto mlp = build_network(Kind::kMlp, shape, cfg, 1);
  EXPECT_EQ(mlp.output_shape({307200}), (learn::Shape{5}));
  EXPECT_EQ(mlp.size(), 4u);  // four fully connected layers
  const auto bilstm = build_network(Kind::kBiLstm, shape, cfg, 1);
  EXPECT_EQ(bilstm.output_shape({30, 10240}), (learn::Shape{5}));
  const auto td = build_network(Kind::kTdCnnBiLstm, {10, {4, 8, 8}}, cfg, 1);
  EXPECT_EQ(td.output_shape({10, 1, 4, 8, 8}), (learn::Shape{5}));
  EXPECT_THROW(build_network(Kind::kSvmPca, shape, cfg, 1), ConfigError);
}

TEST(Neural, TimeDistributedStepsAreIndependent) {
  ClassifierConfig cfg;
  auto net = build_network(Kind::kTdCnnBiLstm, {4, {2, 4, 4}}, cfg, 3);
  const learn::Layer& td = net.at(0);
  ASSERT_EQ(td.kind(), "time_distributed");
  // parameters do not grow with the number of steps
  auto wider = build_network(Kind::kTdCnnBiLstm, {9, {2, 4, 4}}, cfg, 3);
  EXPECT_EQ(wider.at(0).param_count(), td.param_count());

  CounterRng rng{4};
  learn::Tensor x({4, 1, 2, 4, 4});
  for (double& v : x.values()) v = rng.uniform(0, 3);
  const learn::Tensor y = td.forward(x);
  const std::size_t per_in = 32, per_out = y.size() / 4;
  for (std::size_t t = 0; t < 4; ++t) {
    learn::Tensor x2 = x;
    for (std::size_t i = 0; i < per_in; ++i) x2[t * per_in + i] += rng.uniform(0.5, 1.0);
    const learn::Tensor y2 = td.forward(x2);
    bool changed = false;
    for (std::size_t s = 0; s < 4; ++s)
      for (std::size_t j = 0; j < per_out; ++j) {
        const bool diff = y2[s * per_out + j] != y[s * per_out + j];
        if (s != t) ASSERT_FALSE(diff) << "step " << s << " moved when " << t << " was perturbed";
        changed = changed || diff;
      }
    EXPECT_TRUE(changed);
  }
}

TEST(Features, FlattenLengths) {
  const auto toy = support::separable_toy(1);
  EXPECT_EQ(flatten_features(toy[0]).size(), 160u);
  const auto big = zero_window(30, {10, 32, 32});
  EXPECT_EQ(flatten_features(big).size(), 307200u);
}

TEST(Features, FlattenOrderAndInverse) {
  const auto toy = support::separable_toy(2, 9, 3, {2, 3, 4});
  for (const auto& s : toy) {
    const auto f = flatten_features(s);
    const auto grids = s.grids();
    for (std::size_t w = 0; w < 3; ++w)
      for (int z = 0; z < 2; ++z)
        for (int x = 0; x < 3; ++x)
          for (int y = 0; y < 4; ++y)
            ASSERT_EQ(f[((w * 2 + z) * 3 + x) * 4 + y], grids[w].counts[grids[w].offset(z, x, y)]);
    const auto back = unflatten_features(f, 3, {2, 3, 4});
    ASSERT_EQ(back.size(), 3u);
    for (std::size_t w = 0; w < 3; ++w) EXPECT_EQ(back[w].counts, grids[w].counts);
  }
  EXPECT_THROW(unflatten_features(std::vector<double>(5), 3, {2, 3, 4}), ShapeError);
}

TEST(Config, Validation) {
  EXPECT_TRUE(validate(ClassifierConfig{}).empty());
  ClassifierConfig c;
  c.mlp.hidden = {10, 10};
  c.svm.c_grid.clear();
  c.svm.cv_folds = 1;
  EXPECT_GE(validate(c).size(), 3u);
  EXPECT_THROW(train(Kind::kMlp, support::separable_toy(3), c, 1), ConfigError);
}

TEST(Checkpoint, RejectsForeignJson) {
  EXPECT_THROW(TrainedModel::from_json(nlohmann::json{{"format", "other"}}), Error);
  EXPECT_THROW(TrainedModel::from_json(nlohmann::json::array()), Error);
}
