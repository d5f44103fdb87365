#pragma once

#include <cstddef>
#include <exception>
#include <span>

namespace raypet::kernels {

// Every kernel has a serial reference and an OpenMP version. Each output
// element is produced by one thread with a fixed summation order, so both
// versions return bit-identical results.
enum class Exec { kSerial, kParallel };

// Process-wide default used by code paths that do not take an Exec argument.
Exec default_exec();
void set_default_exec(Exec exec);
// Caps OpenMP worker threads; values < 1 leave the runtime default.
void set_max_threads(int threads);

namespace serial {

template <class Fn>
void for_each_index(std::size_t n, Fn&& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

// out (n x n) = rows * rows^T for a row-major n x d matrix.
void gram_matrix(std::span<const double> rows, std::size_t n, std::size_t d,
                 std::span<double> out);

// out (na x nb) = exp(-gamma * |a_i - b_j|^2).
void rbf_kernel(std::span<const double> a, std::size_t na,
                std::span<const double> b, std::size_t nb, std::size_t d,
                double gamma, std::span<double> out);

// Same-size 3-D convolution, 3x3x3 kernel, stride 1, zero padding 1.
// input [cin, D, H, W], weights [cout, cin, 3, 3, 3], out [cout, D, H, W].
void conv3d_forward(std::span<const double> input, std::size_t cin,
                    std::size_t depth, std::size_t height, std::size_t width,
                    std::span<const double> weights,
                    std::span<const double> bias, std::size_t cout,
                    std::span<double> out);

}  // namespace serial

namespace omp {

// Exceptions thrown by fn are captured and the first one is rethrown after
// the loop.
template <class Fn>
void for_each_index(std::size_t n, Fn&& fn) {
  const long long count = static_cast<long long>(n);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(raypet_for_each_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

void gram_matrix(std::span<const double> rows, std::size_t n, std::size_t d,
                 std::span<double> out);
void rbf_kernel(std::span<const double> a, std::size_t na,
                std::span<const double> b, std::size_t nb, std::size_t d,
                double gamma, std::span<double> out);
void conv3d_forward(std::span<const double> input, std::size_t cin,
                    std::size_t depth, std::size_t height, std::size_t width,
                    std::span<const double> weights,
                    std::span<const double> bias, std::size_t cout,
                    std::span<double> out);

}  // namespace omp

template <class Fn>
void for_each_index(Exec exec, std::size_t n, Fn&& fn) {
  if (exec == Exec::kParallel)
    omp::for_each_index(n, fn);
  else
    serial::for_each_index(n, fn);
}

void gram_matrix(Exec exec, std::span<const double> rows, std::size_t n,
                 std::size_t d, std::span<double> out);
void rbf_kernel(Exec exec, std::span<const double> a, std::size_t na,
                std::span<const double> b, std::size_t nb, std::size_t d,
                double gamma, std::span<double> out);
void conv3d_forward(Exec exec, std::span<const double> input, std::size_t cin,
                    std::size_t depth, std::size_t height, std::size_t width,
                    std::span<const double> weights,
                    std::span<const double> bias, std::size_t cout,
                    std::span<double> out);

}  // namespace raypet::kernels
