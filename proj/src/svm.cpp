#include "raypet/svm.hpp"

#include <algorithm>
#include <limits>

#include "raypet/error.hpp"

namespace raypet::classifiers {

BinarySvmResult solve_svm_dual(std::span<const double> kernel,
                               std::span<const int> labels, double c,
                               double tolerance, int max_passes) {
  const std::size_t n = labels.size();
  if (kernel.size() != n * n)
    throw ShapeError("svm: kernel has " + std::to_string(kernel.size()) +
                     " entries for " + std::to_string(n) + " labels");
  if (!(c > 0)) throw ConfigError("svm: C must be > 0");

  BinarySvmResult r;
  r.alpha.assign(n, 0.0);
  // grad_i = (Q a)_i - 1
  std::vector<double> grad(n, -1.0);
  auto q = [&](std::size_t i, std::size_t j) {
    return labels[i] * labels[j] * (kernel[i * n + j] + 1.0);
  };

  for (r.passes = 0; r.passes < max_passes;) {
    double pg_max = -std::numeric_limits<double>::infinity();
    double pg_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      double& a = r.alpha[i];
      const double g = grad[i];
      double pg = g;
      if (a <= 0.0)
        pg = std::min(g, 0.0);
      else if (a >= c)
        pg = std::max(g, 0.0);
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (pg == 0.0) continue;
      const double qii = q(i, i);
      const double next = std::clamp(a - g / qii, 0.0, c);
      const double delta = next - a;
      if (delta == 0.0) continue;
      a = next;
      const double yi = labels[i];
      const double* krow = kernel.data() + i * n;
      for (std::size_t j = 0; j < n; ++j)
        grad[j] += delta * yi * labels[j] * (krow[j] + 1.0);
    }
    ++r.passes;
    if (n == 0 || pg_max - pg_min < tolerance) {
      r.converged = true;
      break;
    }
  }
  return r;
}

}  // namespace raypet::classifiers
