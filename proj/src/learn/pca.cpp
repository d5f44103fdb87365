#include "raypet/learn/pca.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "raypet/error.hpp"

namespace raypet::learn {

std::vector<double> PcaModel::transform(std::span<const double> x) const {
  if (x.size() != input_dim)
    throw ShapeError("pca transform: expected " + std::to_string(input_dim) +
                     " values, got " + std::to_string(x.size()));
  std::vector<double> out(k(), 0.0);
  for (std::size_t c = 0; c < k(); ++c) {
    const double* row = components.data() + c * input_dim;
    double acc = 0;
    for (std::size_t j = 0; j < input_dim; ++j) acc += row[j] * (x[j] - mean[j]);
    out[c] = acc;
  }
  return out;
}

std::vector<double> PcaModel::reconstruct(std::span<const double> coords) const {
  if (coords.size() != k())
    throw ShapeError("pca reconstruct: expected " + std::to_string(k()) +
                     " coordinates, got " + std::to_string(coords.size()));
  std::vector<double> out = mean;
  for (std::size_t c = 0; c < k(); ++c) {
    const double* row = components.data() + c * input_dim;
    for (std::size_t j = 0; j < input_dim; ++j) out[j] += coords[c] * row[j];
  }
  return out;
}

nlohmann::json PcaModel::to_json() const {
  return {{"input_dim", input_dim},
          {"mean", mean},
          {"components", components},
          {"explained_variance", explained_variance}};
}

PcaModel PcaModel::from_json(const nlohmann::json& j) {
  PcaModel m;
  m.input_dim = j.at("input_dim").get<std::size_t>();
  m.mean = j.at("mean").get<std::vector<double>>();
  m.components = j.at("components").get<std::vector<double>>();
  m.explained_variance = j.at("explained_variance").get<std::vector<double>>();
  if (m.mean.size() != m.input_dim ||
      m.components.size() != m.k() * m.input_dim)
    throw ShapeError("pca model arrays do not match input_dim and k");
  return m;
}

PcaModel pca_fit(std::span<const double> samples, std::size_t n,
                 std::size_t d, std::size_t k, kernels::Exec exec) {
  if (samples.size() != n * d)
    throw ShapeError("pca_fit: expected " + std::to_string(n * d) +
                     " values, got " + std::to_string(samples.size()));
  if (n < 2) throw ConfigError("pca_fit needs at least 2 samples");
  if (k == 0 || k > std::min(n - 1, d))
    throw ConfigError("pca_fit: k=" + std::to_string(k) +
                      " must be in [1, min(n-1, d)] = [1, " +
                      std::to_string(std::min(n - 1, d)) + "]");

  PcaModel model;
  model.input_dim = d;
  model.mean.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) model.mean[j] += samples[i * d + j];
  for (double& v : model.mean) v /= static_cast<double>(n);

  std::vector<double> centred(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      centred[i * d + j] = samples[i * d + j] - model.mean[j];

  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> x(centred.data(), static_cast<Eigen::Index>(n),
                             static_cast<Eigen::Index>(d));

  // Eigen-decompose whichever of X X^T (n x n) and X^T X (d x d) is smaller.
  const bool use_gram = n <= d;
  Eigen::MatrixXd sym;
  if (use_gram) {
    std::vector<double> gram(n * n);
    kernels::gram_matrix(exec, centred, n, d, gram);
    sym = Eigen::Map<RowMat>(gram.data(), static_cast<Eigen::Index>(n),
                             static_cast<Eigen::Index>(n));
  } else {
    sym = x.transpose() * x;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success)
    throw TrainingError("pca eigen-decomposition failed");
  const Eigen::VectorXd& lambda = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& vecs = solver.eigenvectors();
  const Eigen::Index m = lambda.size();
  const double top = std::max(lambda(m - 1), 0.0);
  const double cutoff = std::max(top * 1e-12, 1e-300);

  for (std::size_t c = 0; c < k; ++c) {
    const Eigen::Index idx = m - 1 - static_cast<Eigen::Index>(c);
    const double l = lambda(idx);
    if (!(l > cutoff)) break;
    Eigen::VectorXd v;
    if (use_gram) {
      v = x.transpose() * vecs.col(idx);
      v /= std::sqrt(l);
      v.normalize();
    } else {
      v = vecs.col(idx);
    }
    Eigen::Index arg = 0;
    for (Eigen::Index j = 1; j < v.size(); ++j)
      if (std::abs(v(j)) > std::abs(v(arg))) arg = j;
    if (v(arg) < 0) v = -v;
    model.components.insert(model.components.end(), v.data(), v.data() + d);
    model.explained_variance.push_back(l / static_cast<double>(n - 1));
  }
  return model;
}

}  // namespace raypet::learn
