#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace raypet::classifiers {

struct BinarySvmResult {
  std::vector<double> alpha;  // dual variables, 0 <= alpha <= C
  int passes = 0;
  bool converged = false;
};

// Dual coordinate ascent for the hinge-loss kernel SVM
//   min 1/2 a^T Q a - sum(a),  0 <= a_i <= C,  Q_ij = y_i y_j (K_ij + 1),
// the +1 folding the bias into the kernel. Coordinates are visited in index
// order; stops when the projected-gradient spread drops below tolerance.
// kernel is the row-major n x n Gram matrix, labels are +1 / -1.
BinarySvmResult solve_svm_dual(std::span<const double> kernel,
                               std::span<const int> labels, double c,
                               double tolerance, int max_passes);

}  // namespace raypet::classifiers
