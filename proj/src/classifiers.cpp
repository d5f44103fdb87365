#include "raypet/classifiers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "raypet/error.hpp"
#include "raypet/kernels.hpp"
#include "raypet/learn/adam.hpp"
#include "raypet/learn/loss.hpp"
#include "raypet/learn/pca.hpp"
#include "raypet/rng.hpp"
#include "raypet/svm.hpp"

namespace raypet::classifiers {

using learn::Tensor;
using preprocess::VoxelDims;
using preprocess::VoxelGrid;
using preprocess::WindowSample;

class ModelAccess {
 public:
  static void set(TrainedModel& m, const SampleShape& shape, std::vector<EpochLog> history,
                  int best_epoch, double best_loss) {
    m.shape_ = shape;
    m.history_ = std::move(history);
    m.best_epoch_ = best_epoch;
    m.best_loss_ = best_loss;
  }
  static nlohmann::json body(const TrainedModel& m) { return m.body_json(); }
};

namespace {

constexpr const char* kModelFormat = "raypet-model";
constexpr int kModelVersion = 1;

constexpr std::array<std::string_view, 4> kKindNames = {"svm_pca", "mlp",
                                                        "bilstm", "tdcnn_bilstm"};

std::size_t argmax_lowest(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

void check_shape(const SampleShape& expected, const WindowSample& sample) {
  const SampleShape got = shape_of(sample);
  if (!(got == expected))
    throw ShapeError("sample shape W=" + std::to_string(got.window) + " " +
                     std::to_string(got.dims.m) + "x" + std::to_string(got.dims.n) +
                     "x" + std::to_string(got.dims.p) + " does not match the model's W=" +
                     std::to_string(expected.window) + " " +
                     std::to_string(expected.dims.m) + "x" +
                     std::to_string(expected.dims.n) + "x" +
                     std::to_string(expected.dims.p));
}

nlohmann::json shape_json(const SampleShape& s) {
  return {{"window", s.window}, {"m", s.dims.m}, {"n", s.dims.n}, {"p", s.dims.p}};
}

SampleShape shape_from_json(const nlohmann::json& j) {
  SampleShape s;
  s.window = j.at("window").get<std::size_t>();
  s.dims = {j.at("m").get<int>(), j.at("n").get<int>(), j.at("p").get<int>()};
  return s;
}

const NeuralTraining& training_of(Kind kind, const ClassifierConfig& config) {
  switch (kind) {
    case Kind::kMlp:
      return config.mlp.training;
    case Kind::kBiLstm:
      return config.bilstm.training;
    case Kind::kTdCnnBiLstm:
      return config.tdcnn.training;
    case Kind::kSvmPca:
      break;
  }
  throw ConfigError("svm_pca has no neural training settings");
}

// Canonical (session_id, start_frame, label) order, independent of the
// order samples were handed in.
std::vector<const WindowSample*> canonical_order(
    std::span<const WindowSample> samples) {
  std::vector<const WindowSample*> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(&s);
  std::stable_sort(out.begin(), out.end(), [](const WindowSample* a, const WindowSample* b) {
    if (a->session_id != b->session_id) return a->session_id < b->session_id;
    if (a->start_frame() != b->start_frame()) return a->start_frame() < b->start_frame();
    return label_index(a->label) < label_index(b->label);
  });
  return out;
}

// Sessions of each class in a seed-dependent but label-independent order.
std::map<int, std::vector<std::string>> sessions_by_class(
    const std::vector<const WindowSample*>& samples, std::uint64_t seed,
    std::uint64_t purpose) {
  std::map<int, std::set<std::string>> sets;
  for (const auto* s : samples) sets[label_index(s->label)].insert(s->session_id);
  std::map<int, std::vector<std::string>> out;
  for (auto& [label, set] : sets) {
    std::vector<std::string> v(set.begin(), set.end());
    std::stable_sort(v.begin(), v.end(), [&](const std::string& a, const std::string& b) {
      const auto ha = derive_key({seed, purpose, hash_string(a)});
      const auto hb = derive_key({seed, purpose, hash_string(b)});
      return ha != hb ? ha < hb : a < b;
    });
    out[label] = std::move(v);
  }
  return out;
}

// Holds out round(fraction * sessions) sessions of each class, keeping at
// least one session of the class for training.
std::set<std::string> validation_sessions(
    const std::vector<const WindowSample*>& samples, double fraction,
    std::uint64_t seed) {
  std::set<std::string> out;
  if (fraction <= 0) return out;
  for (const auto& [label, sessions] : sessions_by_class(samples, seed, 0x7a11d)) {
    if (sessions.size() < 2) continue;
    auto take = static_cast<std::size_t>(std::llround(fraction * sessions.size()));
    take = std::clamp<std::size_t>(take, 1, sessions.size() - 1);
    out.insert(sessions.begin(), sessions.begin() + static_cast<long>(take));
  }
  return out;
}

void require_two_classes(const std::vector<const WindowSample*>& samples) {
  if (samples.empty()) throw TrainingError("training set is empty");
  std::set<int> labels;
  for (const auto* s : samples) labels.insert(label_index(s->label));
  if (labels.size() < 2)
    throw TrainingError("training set has a single class (" +
                        std::string(label_name(samples.front()->label)) +
                        "); at least two are required");
}

SampleShape common_shape(const std::vector<const WindowSample*>& samples) {
  const SampleShape shape = shape_of(*samples.front());
  for (const auto* s : samples) check_shape(shape, *s);
  return shape;
}

// ------------------------------------------------------------- neural model

class NeuralModel : public TrainedModel {
 public:
  NeuralModel(Kind kind, learn::Sequential net, double input_scale)
      : kind_(kind), net_(std::move(net)), input_scale_(input_scale) {}

  Kind kind() const override { return kind_; }

  Prediction predict(const WindowSample& sample) const override {
    check_shape(shape_, sample);
    const Tensor logits = net_.forward(network_input(kind_, sample, input_scale_));
    Prediction p;
    p.scores = learn::softmax(logits.values());
    p.label = label_from_index(static_cast<int>(argmax_lowest(p.scores)));
    return p;
  }

  const learn::Sequential& network() const { return net_; }

 protected:
  nlohmann::json body_json() const override {
    return {{"input_scale", input_scale_},
            {"network", net_.spec()},
            {"params", learn::params_to_json(net_)}};
  }

 private:
  Kind kind_;
  learn::Sequential net_;
  double input_scale_;
  friend class raypet::classifiers::ModelAccess;
};

// ---------------------------------------------------------------- SVM model

class SvmModel : public TrainedModel {
 public:
  Kind kind() const override { return Kind::kSvmPca; }

  std::vector<double> reduce(const WindowSample& sample) const {
    auto z = pca.transform(flatten_features(sample));
    for (double& v : z) v *= feature_scale;
    return z;
  }

  Prediction predict(const WindowSample& sample) const override {
    check_shape(shape_, sample);
    const auto z = reduce(sample);
    const std::size_t k = z.size();
    const std::size_t n_sv = support.size() / std::max<std::size_t>(k, 1);
    std::vector<double> kv(n_sv);
    kernels::rbf_kernel(kernels::Exec::kSerial, z, 1, support, n_sv, k, gamma, kv);
    Prediction p;
    p.scores.assign(kNumLabels, 0.0);
    for (int c = 0; c < kNumLabels; ++c) {
      const double* coef = coefs.data() + static_cast<std::size_t>(c) * n_sv;
      double f = 0;
      for (std::size_t i = 0; i < n_sv; ++i) f += coef[i] * (kv[i] + 1.0);
      p.scores[c] = f;
    }
    p.label = label_from_index(static_cast<int>(argmax_lowest(p.scores)));
    return p;
  }

  learn::PcaModel pca;
  double feature_scale = 1.0;
  double gamma = 1.0;
  double c = 1.0;
  std::vector<double> support;  // [n_sv, k] scaled PCA coordinates
  std::vector<double> coefs;    // [5, n_sv] alpha_i * y_i per class
  nlohmann::json grid = nlohmann::json::array();

 protected:
  nlohmann::json body_json() const override {
    return {{"pca", pca.to_json()},     {"feature_scale", feature_scale},
            {"gamma", gamma},           {"c", c},
            {"support", support},       {"coefs", coefs},
            {"grid_search", grid}};
  }
  friend class raypet::classifiers::ModelAccess;
};

// One-vs-rest coefficients on a kernel restricted to `rows`.
std::vector<double> one_vs_rest(std::span<const double> kernel, std::size_t n_all,
                                const std::vector<std::size_t>& rows,
                                const std::vector<int>& labels, double c,
                                const SvmPcaConfig& cfg) {
  const std::size_t n = rows.size();
  std::vector<double> sub(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sub[i * n + j] = kernel[rows[i] * n_all + rows[j]];
  std::vector<double> coefs(static_cast<std::size_t>(kNumLabels) * n, 0.0);
  std::vector<int> y(n);
  for (int cls = 0; cls < kNumLabels; ++cls) {
    for (std::size_t i = 0; i < n; ++i) y[i] = labels[rows[i]] == cls ? 1 : -1;
    const auto r = solve_svm_dual(sub, y, c, cfg.kkt_tolerance, cfg.max_passes);
    for (std::size_t i = 0; i < n; ++i)
      coefs[static_cast<std::size_t>(cls) * n + i] = r.alpha[i] * y[i];
  }
  return coefs;
}

std::unique_ptr<TrainedModel> train_svm(const std::vector<const WindowSample*>& samples,
                                        const SvmPcaConfig& cfg, std::uint64_t seed) {
  const SampleShape shape = common_shape(samples);
  const std::size_t n = samples.size();
  const std::size_t d = shape.feature_size();
  if (n < 2) throw TrainingError("svm_pca needs at least 2 training windows");

  std::vector<double> x(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = flatten_features(*samples[i]);
    std::copy(f.begin(), f.end(), x.begin() + static_cast<long>(i * d));
  }
  const std::size_t k = std::min({static_cast<std::size_t>(cfg.pca_components), n - 1, d});
  auto model = std::make_unique<SvmModel>();
  model->pca = learn::pca_fit(x, n, d, k);
  const std::size_t kk = model->pca.k();
  if (kk == 0) throw TrainingError("training windows have no variance");
  const double mean_var =
      std::accumulate(model->pca.explained_variance.begin(),
                      model->pca.explained_variance.end(), 0.0) /
      static_cast<double>(kk);
  model->feature_scale = 1.0 / std::sqrt(mean_var);

  std::vector<double> z(n * kk);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto zi = model->reduce(*samples[i]);
    std::copy(zi.begin(), zi.end(), z.begin() + static_cast<long>(i * kk));
    labels[i] = label_index(samples[i]->label);
  }

  // Session-level folds, dealt per class.
  const int folds = std::max(cfg.cv_folds, 2);
  std::map<std::string, int> fold_of_session;
  for (const auto& [label, sessions] : sessions_by_class(samples, seed, 0xf01d))
    for (std::size_t i = 0; i < sessions.size(); ++i)
      fold_of_session[sessions[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
  std::vector<int> fold(n);
  for (std::size_t i = 0; i < n; ++i) fold[i] = fold_of_session.at(samples[i]->session_id);

  std::vector<double> gammas;
  for (double g : cfg.gamma_grid) gammas.push_back(g == 0.0 ? 1.0 / static_cast<double>(kk) : g);

  std::vector<std::vector<double>> kernel_of_gamma(gammas.size());
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    kernel_of_gamma[g].resize(n * n);
    kernels::rbf_kernel(kernels::default_exec(), z, n, z, n, kk, gammas[g],
                        kernel_of_gamma[g]);
  }

  struct Job {
    std::size_t ci, gi;
    int fold;
  };
  std::vector<Job> jobs;
  for (std::size_t ci = 0; ci < cfg.c_grid.size(); ++ci)
    for (std::size_t gi = 0; gi < gammas.size(); ++gi)
      for (int f = 0; f < folds; ++f) jobs.push_back({ci, gi, f});
  std::vector<std::size_t> correct(jobs.size(), 0), tested(jobs.size(), 0);

  kernels::for_each_index(kernels::default_exec(), jobs.size(), [&](std::size_t j) {
    const Job& job = jobs[j];
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < n; ++i) (fold[i] == job.fold ? test_rows : train_rows).push_back(i);
    if (train_rows.empty() || test_rows.empty()) return;
    std::set<int> present;
    for (auto r : train_rows) present.insert(labels[r]);
    if (present.size() < 2) return;
    const auto& kernel = kernel_of_gamma[job.gi];
    const auto coefs = one_vs_rest(kernel, n, train_rows, labels, cfg.c_grid[job.ci], cfg);
    const std::size_t nt = train_rows.size();
    for (auto t : test_rows) {
      std::vector<double> scores(kNumLabels, 0.0);
      for (int cls = 0; cls < kNumLabels; ++cls)
        for (std::size_t i = 0; i < nt; ++i)
          scores[cls] += coefs[static_cast<std::size_t>(cls) * nt + i] *
                         (kernel[t * n + train_rows[i]] + 1.0);
      correct[j] += static_cast<int>(argmax_lowest(scores)) == labels[t];
      ++tested[j];
    }
  });

  std::size_t best_ci = 0, best_gi = 0;
  double best_acc = -1;
  for (std::size_t ci = 0; ci < cfg.c_grid.size(); ++ci)
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
      std::size_t right = 0, total = 0;
      for (std::size_t j = 0; j < jobs.size(); ++j)
        if (jobs[j].ci == ci && jobs[j].gi == gi) {
          right += correct[j];
          total += tested[j];
        }
      const double acc = total ? static_cast<double>(right) / static_cast<double>(total) : 0.0;
      model->grid.push_back({{"c", cfg.c_grid[ci]}, {"gamma", gammas[gi]}, {"cv_accuracy", acc},
                             {"cv_samples", total}});
      if (acc > best_acc) {
        best_acc = acc;
        best_ci = ci;
        best_gi = gi;
      }
    }
  model->c = cfg.c_grid[best_ci];
  model->gamma = gammas[best_gi];

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  const auto coefs = one_vs_rest(kernel_of_gamma[best_gi], n, all, labels, model->c, cfg);
  std::vector<std::size_t> sv;
  for (std::size_t i = 0; i < n; ++i) {
    bool used = false;
    for (int cls = 0; cls < kNumLabels; ++cls)
      used = used || coefs[static_cast<std::size_t>(cls) * n + i] != 0.0;
    if (used) sv.push_back(i);
  }
  model->coefs.assign(static_cast<std::size_t>(kNumLabels) * sv.size(), 0.0);
  for (std::size_t s = 0; s < sv.size(); ++s) {
    model->support.insert(model->support.end(), z.begin() + static_cast<long>(sv[s] * kk),
                          z.begin() + static_cast<long>((sv[s] + 1) * kk));
    for (int cls = 0; cls < kNumLabels; ++cls)
      model->coefs[static_cast<std::size_t>(cls) * sv.size() + s] =
          coefs[static_cast<std::size_t>(cls) * n + sv[s]];
  }
  ModelAccess::set(*model, shape, {}, 0, 0.0);
  return model;
}

double mean_loss(const learn::Sequential& net, Kind kind,
                 const std::vector<const WindowSample*>& samples,
                 const std::vector<std::size_t>& idx, double scale) {
  double total = 0;
  for (auto i : idx) {
    const Tensor logits = net.forward(network_input(kind, *samples[i], scale));
    total += learn::softmax_cross_entropy(logits.values(),
                                          static_cast<std::size_t>(label_index(samples[i]->label)))
                 .loss;
  }
  return total / static_cast<double>(idx.size());
}

std::unique_ptr<TrainedModel> train_neural(Kind kind,
                                           const std::vector<const WindowSample*>& samples,
                                           const ClassifierConfig& config, std::uint64_t seed,
                                           const EpochCallback& on_epoch) {
  const NeuralTraining& t = training_of(kind, config);
  const SampleShape shape = common_shape(samples);
  learn::Sequential net = build_network(kind, shape, config, seed);

  const auto held_out = validation_sessions(samples, t.validation_fraction, seed);
  std::vector<std::size_t> train_idx, val_idx;
  for (std::size_t i = 0; i < samples.size(); ++i)
    (held_out.count(samples[i]->session_id) ? val_idx : train_idx).push_back(i);

  learn::Adam adam({.learning_rate = t.learning_rate});
  std::vector<Tensor> grads = learn::zero_grads(net);
  auto params = net.params();
  const auto batch = static_cast<std::size_t>(t.batch_size);

  std::vector<EpochLog> history;
  learn::Sequential best = net;
  int best_epoch = 0;
  double best_loss = std::numeric_limits<double>::infinity();

  for (int epoch = 1; epoch <= t.epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    std::vector<std::size_t> order = train_idx;
    CounterRng rng{seed, 0x5eed0e, static_cast<std::uint64_t>(epoch)};
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.below(i)]);

    double total = 0;
    for (std::size_t b = 0; b < order.size(); b += batch) {
      const std::size_t end = std::min(order.size(), b + batch);
      for (Tensor& g : grads) g.fill(0.0);
      for (std::size_t j = b; j < end; ++j) {
        const WindowSample& s = *samples[order[j]];
        learn::Cache cache;
        const Tensor logits = net.forward(network_input(kind, s, t.input_scale), cache);
        auto loss = learn::softmax_cross_entropy(
            logits.values(), static_cast<std::size_t>(label_index(s.label)));
        if (!std::isfinite(loss.loss)) throw DivergenceError(epoch);
        total += loss.loss;
        net.backward(cache, Tensor(logits.shape(), std::move(loss.gradient)), grads);
      }
      const double inv = 1.0 / static_cast<double>(end - b);
      for (Tensor& g : grads)
        for (double& v : g.values()) v *= inv;
      adam.step(params, grads);
    }

    EpochLog log;
    log.epoch = epoch;
    log.train_loss = total / static_cast<double>(order.size());
    log.validation_loss = val_idx.empty()
                              ? mean_loss(net, kind, samples, train_idx, t.input_scale)
                              : mean_loss(net, kind, samples, val_idx, t.input_scale);
    if (!std::isfinite(log.train_loss) || !std::isfinite(log.validation_loss))
      throw DivergenceError(epoch);
    log.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (log.validation_loss < best_loss) {
      best_loss = log.validation_loss;
      best_epoch = epoch;
      best = net;
    }
    history.push_back(log);
    if (on_epoch) on_epoch(log);
  }

  auto model = std::make_unique<NeuralModel>(kind, std::move(best), t.input_scale);
  ModelAccess::set(*model, shape, std::move(history), best_epoch, best_loss);
  return model;
}

}  // namespace


std::string_view kind_name(Kind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<Kind> parse_kind(std::string_view name) {
  for (Kind k : kAllKinds)
    if (kind_name(k) == name) return k;
  return std::nullopt;
}

std::vector<std::string> validate(const ClassifierConfig& c) {
  std::vector<std::string> out;
  if (c.svm.pca_components < 1) out.push_back("svm.pca_components must be >= 1");
  if (c.svm.c_grid.empty()) out.push_back("svm.c_grid must not be empty");
  for (double v : c.svm.c_grid)
    if (!(v > 0)) out.push_back("svm.c_grid values must be > 0");
  if (c.svm.gamma_grid.empty()) out.push_back("svm.gamma_grid must not be empty");
  for (double v : c.svm.gamma_grid)
    if (!(v >= 0)) out.push_back("svm.gamma_grid values must be > 0 (0 selects 1/d')");
  if (c.svm.cv_folds < 2) out.push_back("svm.cv_folds must be >= 2");
  if (!(c.svm.kkt_tolerance > 0)) out.push_back("svm.kkt_tolerance must be > 0");
  if (c.svm.max_passes < 1) out.push_back("svm.max_passes must be >= 1");
  if (c.mlp.hidden.size() != 3)
    out.push_back("mlp.hidden must list 3 widths (4 fully connected layers)");
  for (int h : c.mlp.hidden)
    if (h < 1) out.push_back("mlp.hidden widths must be >= 1");
  if (c.bilstm.hidden < 1) out.push_back("bilstm.hidden must be >= 1");
  if (c.tdcnn.conv1_channels < 1 || c.tdcnn.conv2_channels < 1 || c.tdcnn.embedding < 1 ||
      c.tdcnn.hidden < 1)
    out.push_back("tdcnn widths must be >= 1");
  const std::pair<const char*, const NeuralTraining*> trainings[] = {
      {"mlp", &c.mlp.training}, {"bilstm", &c.bilstm.training}, {"tdcnn", &c.tdcnn.training}};
  for (const auto& [name, t] : trainings) {
    const std::string p = std::string(name) + ".training.";
    if (t->epochs < 1) out.push_back(p + "epochs must be >= 1");
    if (t->batch_size < 1) out.push_back(p + "batch_size must be >= 1");
    if (!(t->learning_rate > 0)) out.push_back(p + "learning_rate must be > 0");
    if (!(t->validation_fraction >= 0 && t->validation_fraction < 1))
      out.push_back(p + "validation_fraction must be in [0, 1)");
    if (!(t->input_scale > 0)) out.push_back(p + "input_scale must be > 0");
  }
  return out;
}

SampleShape shape_of(const WindowSample& sample) {
  return {sample.window(), sample.window() ? sample.dims() : VoxelDims{}};
}

std::vector<double> flatten_features(const WindowSample& sample) {
  std::vector<double> out;
  out.reserve(shape_of(sample).feature_size());
  for (const VoxelGrid& g : sample.grids())
    for (std::int32_t c : g.counts) out.push_back(static_cast<double>(c));
  return out;
}

std::vector<VoxelGrid> unflatten_features(std::span<const double> features,
                                          std::size_t window, const VoxelDims& dims) {
  const std::size_t per = dims.size();
  if (features.size() != window * per)
    throw ShapeError("expected " + std::to_string(window * per) + " features, got " +
                     std::to_string(features.size()));
  std::vector<VoxelGrid> out(window);
  for (std::size_t w = 0; w < window; ++w) {
    out[w].dims = dims;
    out[w].source_frame_index = w;
    out[w].counts.resize(per);
    for (std::size_t i = 0; i < per; ++i)
      out[w].counts[i] = static_cast<std::int32_t>(std::llround(features[w * per + i]));
  }
  return out;
}

learn::Sequential build_network(Kind kind, const SampleShape& shape,
                                const ClassifierConfig& config, std::uint64_t seed) {
  using namespace learn;
  const std::size_t grid = shape.dims.size();
  Sequential net;
  auto head = [](std::size_t in) {
    auto d = std::make_unique<Dense>(in, kNumLabels, Activation::kLinear);
    d->set_zero_init(true);
    return d;
  };
  switch (kind) {
    case Kind::kMlp: {
      std::size_t in = shape.feature_size();
      for (int h : config.mlp.hidden) {
        net.add(std::make_unique<Dense>(in, static_cast<std::size_t>(h), Activation::kRelu));
        in = static_cast<std::size_t>(h);
      }
      net.add(head(in));
      break;
    }
    case Kind::kBiLstm: {
      const auto h = static_cast<std::size_t>(config.bilstm.hidden);
      net.add(std::make_unique<Bidirectional>(grid, h));
      net.add(head(2 * h));
      break;
    }
    case Kind::kTdCnnBiLstm: {
      const auto& c = config.tdcnn;
      const auto c1 = static_cast<std::size_t>(c.conv1_channels);
      const auto c2 = static_cast<std::size_t>(c.conv2_channels);
      const auto emb = static_cast<std::size_t>(c.embedding);
      auto cnn = std::make_unique<Sequential>();
      cnn->add(std::make_unique<Conv3D>(1, c1, Activation::kRelu));
      cnn->add(std::make_unique<MaxPool3D>());
      cnn->add(std::make_unique<Conv3D>(c1, c2, Activation::kRelu));
      cnn->add(std::make_unique<MaxPool3D>());
      const Shape pooled = cnn->output_shape(
          {1, static_cast<std::size_t>(shape.dims.m), static_cast<std::size_t>(shape.dims.n),
           static_cast<std::size_t>(shape.dims.p)});
      cnn->add(std::make_unique<Dense>(shape_size(pooled), emb, Activation::kRelu));
      net.add(std::make_unique<TimeDistributed>(std::move(cnn)));
      const auto h = static_cast<std::size_t>(c.hidden);
      net.add(std::make_unique<Bidirectional>(emb, h));
      net.add(head(2 * h));
      break;
    }
    case Kind::kSvmPca:
      throw ConfigError("svm_pca is not a neural network");
  }
  CounterRng rng{seed, 0x1a7e5, static_cast<std::uint64_t>(kind)};
  net.init(rng);
  return net;
}

Tensor network_input(Kind kind, const WindowSample& sample, double input_scale) {
  const SampleShape s = shape_of(sample);
  std::vector<double> values = flatten_features(sample);
  if (input_scale != 1.0)
    for (double& v : values) v *= input_scale;
  switch (kind) {
    case Kind::kMlp: {
      const std::size_t n = values.size();
      return Tensor({n}, std::move(values));
    }
    case Kind::kBiLstm:
      return Tensor({s.window, s.dims.size()}, std::move(values));
    case Kind::kTdCnnBiLstm:
      return Tensor({s.window, 1, static_cast<std::size_t>(s.dims.m),
                     static_cast<std::size_t>(s.dims.n), static_cast<std::size_t>(s.dims.p)},
                    std::move(values));
    case Kind::kSvmPca:
      break;
  }
  throw ConfigError("svm_pca is not a neural network");
}

const learn::Sequential* network_of(const TrainedModel& model) {
  const auto* n = dynamic_cast<const NeuralModel*>(&model);
  return n ? &n->network() : nullptr;
}

std::unique_ptr<TrainedModel> train(Kind kind, std::span<const WindowSample> samples,
                                    const ClassifierConfig& config, std::uint64_t seed,
                                    const EpochCallback& on_epoch) {
  if (auto problems = validate(config); !problems.empty())
    throw ConfigError("classifier config: " + problems.front());
  const auto ordered = canonical_order(samples);
  require_two_classes(ordered);
  if (kind == Kind::kSvmPca) return train_svm(ordered, config.svm, seed);
  return train_neural(kind, ordered, config, seed, on_epoch);
}

nlohmann::json TrainedModel::to_json() const {
  nlohmann::json history = nlohmann::json::array();
  for (const EpochLog& e : history_)
    history.push_back({{"epoch", e.epoch},
                       {"train_loss", e.train_loss},
                       {"validation_loss", e.validation_loss}});
  return {{"format", kModelFormat},
          {"version", kModelVersion},
          {"kind", kind_name(kind())},
          {"shape", shape_json(shape_)},
          {"best_epoch", best_epoch_},
          {"best_validation_loss", best_loss_},
          {"history", history},
          {"body", ModelAccess::body(*this)}};
}

std::unique_ptr<TrainedModel> TrainedModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != kModelFormat)
      throw ParseError("not a model checkpoint", 1);
    if (j.at("version").get<int>() != kModelVersion)
      throw ParseError("unsupported checkpoint version " +
                           std::to_string(j.at("version").get<int>()),
                       1);
    const auto kind = parse_kind(j.at("kind").get<std::string>());
    if (!kind) throw ParseError("unknown model kind " + j.at("kind").dump(), 1);
    const SampleShape shape = shape_from_json(j.at("shape"));
    std::vector<EpochLog> history;
    for (const auto& e : j.at("history"))
      history.push_back({e.at("epoch").get<int>(), e.at("train_loss").get<double>(),
                         e.at("validation_loss").get<double>(), 0.0});
    const auto& body = j.at("body");
    std::unique_ptr<TrainedModel> model;
    if (*kind == Kind::kSvmPca) {
      auto svm = std::make_unique<SvmModel>();
      svm->pca = learn::PcaModel::from_json(body.at("pca"));
      svm->feature_scale = body.at("feature_scale").get<double>();
      svm->gamma = body.at("gamma").get<double>();
      svm->c = body.at("c").get<double>();
      svm->support = body.at("support").get<std::vector<double>>();
      svm->coefs = body.at("coefs").get<std::vector<double>>();
      svm->grid = body.value("grid_search", nlohmann::json::array());
      const std::size_t k = std::max<std::size_t>(svm->pca.k(), 1);
      if (svm->support.size() % k != 0 ||
          svm->coefs.size() != kNumLabels * (svm->support.size() / k))
        throw ShapeError("svm support vectors and coefficients disagree");
      model = std::move(svm);
    } else {
      auto layer = learn::layer_from_spec(body.at("network"));
      auto* seq = dynamic_cast<learn::Sequential*>(layer.get());
      if (!seq) throw ParseError("network spec is not a sequential model", 1);
      learn::params_from_json(*seq, body.at("params"));
      model = std::make_unique<NeuralModel>(*kind, std::move(*seq),
                                            body.at("input_scale").get<double>());
    }
    ModelAccess::set(*model, shape, std::move(history), j.at("best_epoch").get<int>(),
                     j.at("best_validation_loss").get<double>());
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed checkpoint: ") + e.what(), 1);
  }
}

}  // namespace raypet::classifiers
