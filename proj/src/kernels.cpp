#include "raypet/kernels.hpp"

#include <omp.h>

#include <atomic>
#include <cmath>

#include "raypet/error.hpp"

namespace raypet::kernels {

namespace {

std::atomic<Exec> g_default_exec{Exec::kParallel};

double dot(const double* a, const double* b, std::size_t d) {
  double s = 0;
  for (std::size_t k = 0; k < d; ++k) s += a[k] * b[k];
  return s;
}

double squared_dist(const double* a, const double* b, std::size_t d) {
  double s = 0;
  for (std::size_t k = 0; k < d; ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

void check_sizes(bool ok, const char* what) {
  if (!ok) throw ShapeError(std::string(what) + ": buffer size mismatch");
}

// One output channel of a same-size 3x3x3 convolution.
void conv3d_channel(const double* input, std::size_t cin, std::size_t D,
                    std::size_t H, std::size_t W, const double* weights,
                    double bias, double* out) {
  const std::size_t plane = H * W, volume = D * plane;
  for (std::size_t i = 0; i < volume; ++i) out[i] = bias;
  for (std::size_t ci = 0; ci < cin; ++ci) {
    const double* in = input + ci * volume;
    const double* k = weights + ci * 27;
    for (int kd = 0; kd < 3; ++kd)
      for (int kh = 0; kh < 3; ++kh)
        for (int kw = 0; kw < 3; ++kw) {
          const double wv = k[(kd * 3 + kh) * 3 + kw];
          if (wv == 0.0) continue;
          const long od = kd - 1, oh = kh - 1, ow = kw - 1;
          const std::size_t d0 = od < 0 ? 1 : 0, d1 = od > 0 ? D - 1 : D;
          const std::size_t h0 = oh < 0 ? 1 : 0, h1 = oh > 0 ? H - 1 : H;
          const std::size_t w0 = ow < 0 ? 1 : 0, w1 = ow > 0 ? W - 1 : W;
          for (std::size_t d = d0; d < d1; ++d)
            for (std::size_t h = h0; h < h1; ++h) {
              double* o = out + d * plane + h * W;
              const double* src = in + (d + od) * plane + (h + oh) * W;
              for (std::size_t w = w0; w < w1; ++w) o[w] += wv * src[w + ow];
            }
        }
  }
}

}  // namespace

Exec default_exec() { return g_default_exec.load(); }
void set_default_exec(Exec exec) { g_default_exec.store(exec); }

void set_max_threads(int threads) {
  if (threads >= 1) omp_set_num_threads(threads);
}

namespace serial {

void gram_matrix(std::span<const double> rows, std::size_t n, std::size_t d,
                 std::span<double> out) {
  check_sizes(rows.size() == n * d && out.size() == n * n, "gram_matrix");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = dot(&rows[i * d], &rows[j * d], d);
      out[i * n + j] = v;
      out[j * n + i] = v;
    }
}

void rbf_kernel(std::span<const double> a, std::size_t na,
                std::span<const double> b, std::size_t nb, std::size_t d,
                double gamma, std::span<double> out) {
  check_sizes(a.size() == na * d && b.size() == nb * d && out.size() == na * nb,
              "rbf_kernel");
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      out[i * nb + j] = std::exp(-gamma * squared_dist(&a[i * d], &b[j * d], d));
}

void conv3d_forward(std::span<const double> input, std::size_t cin,
                    std::size_t depth, std::size_t height, std::size_t width,
                    std::span<const double> weights,
                    std::span<const double> bias, std::size_t cout,
                    std::span<double> out) {
  const std::size_t volume = depth * height * width;
  check_sizes(input.size() == cin * volume && weights.size() == cout * cin * 27 &&
                  bias.size() == cout && out.size() == cout * volume,
              "conv3d_forward");
  for (std::size_t co = 0; co < cout; ++co)
    conv3d_channel(input.data(), cin, depth, height, width,
                   weights.data() + co * cin * 27, bias[co],
                   out.data() + co * volume);
}

}  // namespace serial

namespace omp {

void gram_matrix(std::span<const double> rows, std::size_t n, std::size_t d,
                 std::span<double> out) {
  check_sizes(rows.size() == n * d && out.size() == n * n, "gram_matrix");
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (long long ii = 0; ii < count; ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    for (std::size_t j = i; j < n; ++j) {
      const double v = dot(&rows[i * d], &rows[j * d], d);
      out[i * n + j] = v;
      out[j * n + i] = v;
    }
  }
}

void rbf_kernel(std::span<const double> a, std::size_t na,
                std::span<const double> b, std::size_t nb, std::size_t d,
                double gamma, std::span<double> out) {
  check_sizes(a.size() == na * d && b.size() == nb * d && out.size() == na * nb,
              "rbf_kernel");
  const long long count = static_cast<long long>(na);
#pragma omp parallel for schedule(static)
  for (long long ii = 0; ii < count; ++ii) {
    const std::size_t i = static_cast<std::size_t>(ii);
    for (std::size_t j = 0; j < nb; ++j)
      out[i * nb + j] = std::exp(-gamma * squared_dist(&a[i * d], &b[j * d], d));
  }
}

void conv3d_forward(std::span<const double> input, std::size_t cin,
                    std::size_t depth, std::size_t height, std::size_t width,
                    std::span<const double> weights,
                    std::span<const double> bias, std::size_t cout,
                    std::span<double> out) {
  const std::size_t volume = depth * height * width;
  check_sizes(input.size() == cin * volume && weights.size() == cout * cin * 27 &&
                  bias.size() == cout && out.size() == cout * volume,
              "conv3d_forward");
  const long long count = static_cast<long long>(cout);
#pragma omp parallel for schedule(static)
  for (long long co = 0; co < count; ++co)
    conv3d_channel(input.data(), cin, depth, height, width,
                   weights.data() + co * cin * 27, bias[co],
                   out.data() + co * volume);
}

}  // namespace omp

void gram_matrix(Exec exec, std::span<const double> rows, std::size_t n,
                 std::size_t d, std::span<double> out) {
  exec == Exec::kParallel ? omp::gram_matrix(rows, n, d, out)
                          : serial::gram_matrix(rows, n, d, out);
}

void rbf_kernel(Exec exec, std::span<const double> a, std::size_t na,
                std::span<const double> b, std::size_t nb, std::size_t d,
                double gamma, std::span<double> out) {
  exec == Exec::kParallel ? omp::rbf_kernel(a, na, b, nb, d, gamma, out)
                          : serial::rbf_kernel(a, na, b, nb, d, gamma, out);
}

void conv3d_forward(Exec exec, std::span<const double> input, std::size_t cin,
                    std::size_t depth, std::size_t height, std::size_t width,
                    std::span<const double> weights,
                    std::span<const double> bias, std::size_t cout,
                    std::span<double> out) {
  exec == Exec::kParallel
      ? omp::conv3d_forward(input, cin, depth, height, width, weights, bias,
                            cout, out)
      : serial::conv3d_forward(input, cin, depth, height, width, weights, bias,
                               cout, out);
}

}  // namespace raypet::kernels
