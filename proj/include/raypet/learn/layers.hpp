#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "raypet/learn/tensor.hpp"
#include "raypet/rng.hpp"

namespace raypet::learn {

enum class Activation { kLinear, kRelu, kTanh };

std::string activation_name(Activation a);
Activation parse_activation(const std::string& name);

// Intermediate values a layer keeps from forward for its backward pass.
struct Cache {
  std::vector<Tensor> tensors;
  std::vector<Cache> children;
};

// A differentiable layer with hand-derived gradients. Layers operate on one
// example at a time; batching is the trainer's job.
class Layer {
 public:
  virtual ~Layer() = default;

  virtual std::string kind() const = 0;
  // Throws ShapeError when the input shape breaks the layer contract.
  virtual Shape output_shape(const Shape& input) const = 0;
  virtual Tensor forward(const Tensor& input, Cache& cache) const = 0;
  // Returns the input gradient and adds parameter gradients into
  // param_grads, which is laid out like params().
  virtual Tensor backward(const Cache& cache, const Tensor& upstream,
                          std::span<Tensor> param_grads) const = 0;

  virtual std::vector<Tensor*> params() { return {}; }
  std::vector<const Tensor*> params() const;
  std::size_t param_count() const;

  // Deterministic initialization from a counter-based stream.
  virtual void init(CounterRng& rng) { (void)rng; }

  // Layer spec without parameter values.
  virtual nlohmann::json spec() const = 0;
  virtual std::unique_ptr<Layer> clone() const = 0;

  Tensor forward(const Tensor& input) const {
    Cache cache;
    return forward(input, cache);
  }
};

using LayerPtr = std::unique_ptr<Layer>;

// y = act(W x + b); x may have any shape with `in` elements.
class Dense : public Layer {
 public:
  Dense(std::size_t in, std::size_t out, Activation activation);

  using Layer::forward;
  std::string kind() const override { return "dense"; }
  Shape output_shape(const Shape& input) const override;
  Tensor forward(const Tensor& input, Cache& cache) const override;
  Tensor backward(const Cache& cache, const Tensor& upstream,
                  std::span<Tensor> param_grads) const override;
  std::vector<Tensor*> params() override { return {&weight_, &bias_}; }
  void init(CounterRng& rng) override;
  nlohmann::json spec() const override;
  std::unique_ptr<Layer> clone() const override;

  Tensor& weight() { return weight_; }  // [out, in]
  Tensor& bias() { return bias_; }
  // Zero weights at init instead of fan-in scaling (used for output heads).
  void set_zero_init(bool zero) { zero_init_ = zero; }

 private:
  std::size_t in_, out_;
  Activation activation_;
  bool zero_init_ = false;
  Tensor weight_, bias_;
};

// [cin, D, H, W] -> [cout, D, H, W]; 3x3x3 kernel, stride 1, zero padding 1.
class Conv3D : public Layer {
 public:
  Conv3D(std::size_t in_channels, std::size_t out_channels,
         Activation activation);

  using Layer::forward;
  std::string kind() const override { return "conv3d"; }
  Shape output_shape(const Shape& input) const override;
  Tensor forward(const Tensor& input, Cache& cache) const override;
  Tensor backward(const Cache& cache, const Tensor& upstream,
                  std::span<Tensor> param_grads) const override;
  std::vector<Tensor*> params() override { return {&weight_, &bias_}; }
  void init(CounterRng& rng) override;
  nlohmann::json spec() const override;
  std::unique_ptr<Layer> clone() const override;

  Tensor& weight() { return weight_; }  // [cout, cin, 3, 3, 3]
  Tensor& bias() { return bias_; }

 private:
  std::size_t cin_, cout_;
  Activation activation_;
  Tensor weight_, bias_;
};

// 2x2x2 max pooling over [C, D, H, W]. Output extent is ceil(extent / 2);
// a window hanging over the edge pools the cells that exist. Ties go to the
// first cell in scan order.
class MaxPool3D : public Layer {
 public:
  using Layer::forward;
  std::string kind() const override { return "maxpool3d"; }
  Shape output_shape(const Shape& input) const override;
  Tensor forward(const Tensor& input, Cache& cache) const override;
  Tensor backward(const Cache& cache, const Tensor& upstream,
                  std::span<Tensor> param_grads) const override;
  nlohmann::json spec() const override;
  std::unique_ptr<Layer> clone() const override;
};

// Four-gate LSTM over [T, in] returning every hidden state, [T, hidden].
// Gate order in the stacked weights is input, forget, cell, output.
class Lstm : public Layer {
 public:
  Lstm(std::size_t in, std::size_t hidden, bool reverse = false);

  using Layer::forward;
  std::string kind() const override { return "lstm"; }
  Shape output_shape(const Shape& input) const override;
  Tensor forward(const Tensor& input, Cache& cache) const override;
  Tensor backward(const Cache& cache, const Tensor& upstream,
                  std::span<Tensor> param_grads) const override;
  std::vector<Tensor*> params() override {
    return {&w_input_, &w_hidden_, &bias_};
  }
  void init(CounterRng& rng) override;
  nlohmann::json spec() const override;
  std::unique_ptr<Layer> clone() const override;

  std::size_t in() const { return in_; }
  std::size_t hidden() const { return hidden_; }
  bool reverse() const { return reverse_; }

 private:
  std::size_t in_, hidden_;
  bool reverse_;
  Tensor w_input_;   // [4H, in]
  Tensor w_hidden_;  // [4H, H]
  Tensor bias_;      // [4H]
};

// Runs a forward and a time-reversed LSTM over [T, in] and returns
// [last forward state ; last backward state], shape [2 * hidden].
class Bidirectional : public Layer {
 public:
  Bidirectional(std::size_t in, std::size_t hidden);

  using Layer::forward;
  std::string kind() const override { return "bidirectional"; }
  Shape output_shape(const Shape& input) const override;
  Tensor forward(const Tensor& input, Cache& cache) const override;
  Tensor backward(const Cache& cache, const Tensor& upstream,
                  std::span<Tensor> param_grads) const override;
  std::vector<Tensor*> params() override;
  void init(CounterRng& rng) override;
  nlohmann::json spec() const override;
  std::unique_ptr<Layer> clone() const override;

  Lstm& forward_cell() { return forward_; }
  Lstm& backward_cell() { return backward_; }

 private:
  Lstm forward_, backward_;
};

// Chain of layers.
class Sequential : public Layer {
 public:
  Sequential() = default;
  Sequential(const Sequential& other);
  Sequential& operator=(const Sequential& other);
  Sequential(Sequential&&) = default;
  Sequential& operator=(Sequential&&) = default;

  Sequential& add(LayerPtr layer);
  std::size_t size() const { return layers_.size(); }
  Layer& at(std::size_t i) { return *layers_.at(i); }
  const Layer& at(std::size_t i) const { return *layers_.at(i); }

  using Layer::forward;
  std::string kind() const override { return "sequential"; }
  Shape output_shape(const Shape& input) const override;
  Tensor forward(const Tensor& input, Cache& cache) const override;
  Tensor backward(const Cache& cache, const Tensor& upstream,
                  std::span<Tensor> param_grads) const override;
  std::vector<Tensor*> params() override;
  void init(CounterRng& rng) override;
  nlohmann::json spec() const override;
  std::unique_ptr<Layer> clone() const override;

 private:
  std::vector<LayerPtr> layers_;
};

// Applies one inner layer to every step of [T, ...] with shared weights.
class TimeDistributed : public Layer {
 public:
  explicit TimeDistributed(LayerPtr inner);
  TimeDistributed(const TimeDistributed& other);

  using Layer::forward;
  std::string kind() const override { return "time_distributed"; }
  Shape output_shape(const Shape& input) const override;
  Tensor forward(const Tensor& input, Cache& cache) const override;
  Tensor backward(const Cache& cache, const Tensor& upstream,
                  std::span<Tensor> param_grads) const override;
  std::vector<Tensor*> params() override { return inner_->params(); }
  void init(CounterRng& rng) override { inner_->init(rng); }
  nlohmann::json spec() const override;
  std::unique_ptr<Layer> clone() const override;

  Layer& inner() { return *inner_; }
  const Layer& inner() const { return *inner_; }

 private:
  LayerPtr inner_;
};

// Softmax over a 1-D input.
class Softmax : public Layer {
 public:
  using Layer::forward;
  std::string kind() const override { return "softmax"; }
  Shape output_shape(const Shape& input) const override;
  Tensor forward(const Tensor& input, Cache& cache) const override;
  Tensor backward(const Cache& cache, const Tensor& upstream,
                  std::span<Tensor> param_grads) const override;
  nlohmann::json spec() const override;
  std::unique_ptr<Layer> clone() const override;
};

// Rebuilds a layer (with freshly zeroed parameters) from spec().
LayerPtr layer_from_spec(const nlohmann::json& spec);

// Parameter values in params() order, for checkpoints.
nlohmann::json params_to_json(const Layer& layer);
void params_from_json(Layer& layer, const nlohmann::json& values);

// Zero tensors laid out like layer.params().
std::vector<Tensor> zero_grads(const Layer& layer);

}  // namespace raypet::learn
