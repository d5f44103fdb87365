#pragma once

#include <span>
#include <vector>

namespace raypet::learn {

// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> logits);

struct LossResult {
  double loss = 0;
  std::vector<double> gradient;  // d loss / d logits = softmax - one_hot
};

LossResult softmax_cross_entropy(std::span<const double> logits,
                                 std::size_t target);

}  // namespace raypet::learn
