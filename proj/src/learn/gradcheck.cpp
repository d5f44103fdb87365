#include "raypet/learn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "raypet/error.hpp"

namespace raypet::learn {

double relative_error(double analytic, double numeric, double floor) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / scale;
}

double check_gradients(const std::function<double()>& loss,
                       std::span<Tensor* const> wrt,
                       std::span<const Tensor> analytic, double h) {
  if (wrt.size() != analytic.size())
    throw ShapeError("check_gradients: tensor and gradient counts differ");
  double worst = 0;
  for (std::size_t t = 0; t < wrt.size(); ++t) {
    Tensor& x = *wrt[t];
    require_shape(x.shape(), analytic[t].shape(), "check_gradients");
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double saved = x[i];
      x[i] = saved + h;
      const double up = loss();
      x[i] = saved - h;
      const double down = loss();
      x[i] = saved;
      const double numeric = (up - down) / (2 * h);
      worst = std::max(worst, relative_error(analytic[t][i], numeric));
    }
  }
  return worst;
}

GradCheckResult check_layer_gradients(const Layer& layer, const Tensor& input,
                                      std::uint64_t seed, double h) {
  auto work = layer.clone();
  Tensor x = input;
  Tensor probe(work->output_shape(x.shape()));
  CounterRng rng{seed, 0x9c4eull};
  for (double& v : probe.values()) v = rng.uniform(-1.0, 1.0);

  auto scalar = [&] {
    const Tensor y = work->forward(x);
    double s = 0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * probe[i];
    return s;
  };

  Cache cache;
  work->forward(x, cache);
  std::vector<Tensor> grads = zero_grads(*work);
  const Tensor dx = work->backward(cache, probe, grads);

  GradCheckResult r;
  Tensor* xs[] = {&x};
  r.max_input_error = check_gradients(scalar, xs, std::span<const Tensor>(&dx, 1), h);
  auto params = work->params();
  if (!params.empty())
    r.max_param_error = check_gradients(scalar, params, grads, h);
  return r;
}

}  // namespace raypet::learn
