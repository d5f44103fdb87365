#pragma once

#include <functional>
#include <vector>

#include "raypet/learn/layers.hpp"

namespace raypet::learn {

struct GradCheckResult {
  double max_input_error = 0;
  double max_param_error = 0;
  double max_error() const {
    return max_input_error > max_param_error ? max_input_error
                                             : max_param_error;
  }
};

// |a - n| / max(|a|, |n|, floor).
double relative_error(double analytic, double numeric, double floor = 1e-6);

// Compares Layer::backward against central differences of the scalar
// L = sum(forward(x) * probe) for a fixed random probe.
GradCheckResult check_layer_gradients(const Layer& layer, const Tensor& input,
                                      std::uint64_t seed, double h = 1e-5);

// Central differences of an arbitrary scalar loss f over a set of tensors,
// compared with the given analytic gradients.
double check_gradients(const std::function<double()>& loss,
                       std::span<Tensor* const> wrt,
                       std::span<const Tensor> analytic, double h = 1e-5);

}  // namespace raypet::learn
