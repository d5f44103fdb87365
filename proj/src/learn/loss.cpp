#include "raypet/learn/loss.hpp"

#include <algorithm>
#include <cmath>

#include "raypet/error.hpp"

namespace raypet::learn {

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw ShapeError("softmax of an empty vector");
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0;
  for (std::size_t i = 0; i < logits.size(); ++i)
    sum += (p[i] = std::exp(logits[i] - m));
  for (double& v : p) v /= sum;
  return p;
}

LossResult softmax_cross_entropy(std::span<const double> logits,
                                 std::size_t target) {
  if (target >= logits.size())
    throw ShapeError("target class " + std::to_string(target) +
                     " out of range for " + std::to_string(logits.size()) +
                     " logits");
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0;
  for (double z : logits) sum += std::exp(z - m);
  const double log_z = m + std::log(sum);
  LossResult r;
  r.loss = log_z - logits[target];
  r.gradient.resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i)
    r.gradient[i] = std::exp(logits[i] - log_z) - (i == target ? 1.0 : 0.0);
  return r;
}

}  // namespace raypet::learn
