#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"
#include "raypet/kernels.hpp"

namespace raypet::learn {

struct PcaModel {
  std::size_t input_dim = 0;
  std::vector<double> mean;                // [input_dim]
  std::vector<double> components;          // [k, input_dim], orthonormal rows
  std::vector<double> explained_variance;  // [k], descending

  std::size_t k() const { return explained_variance.size(); }

  // Coordinates of x in the component basis.
  std::vector<double> transform(std::span<const double> x) const;
  // Maps coordinates back to input space.
  std::vector<double> reconstruct(std::span<const double> coords) const;

  nlohmann::json to_json() const;
  static PcaModel from_json(const nlohmann::json& j);
};

// Top-k principal components of n samples (rows of a row-major n x d
// matrix), computed from the n x n Gram matrix of the centred data so that
// cost is independent of d beyond the O(n^2 d) Gram product. Components with
// numerically zero variance are dropped, so k() may be smaller than k.
// Each component's largest-magnitude entry is positive.
// Throws ConfigError when n < 2 or k > min(n - 1, d).
PcaModel pca_fit(std::span<const double> samples, std::size_t n,
                 std::size_t d, std::size_t k,
                 kernels::Exec exec = kernels::Exec::kParallel);

}  // namespace raypet::learn
