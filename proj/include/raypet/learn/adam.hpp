#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "raypet/learn/tensor.hpp"

namespace raypet::learn {

struct AdamOptions {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction. Moments are created lazily on the first step
// to match the parameter shapes.
class Adam {
 public:
  explicit Adam(AdamOptions options = {}) : options_(options) {}

  // Throws ShapeError when params and grads disagree in count or shape.
  void step(std::span<Tensor* const> params, std::span<const Tensor> grads);

  std::uint64_t steps() const { return step_; }
  const AdamOptions& options() const { return options_; }
  const std::vector<Tensor>& first_moment() const { return m_; }
  const std::vector<Tensor>& second_moment() const { return v_; }

 private:
  AdamOptions options_;
  std::uint64_t step_ = 0;
  std::vector<Tensor> m_, v_;
};

}  // namespace raypet::learn
