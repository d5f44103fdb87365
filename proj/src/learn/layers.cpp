#include "raypet/learn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "raypet/error.hpp"
#include "raypet/kernels.hpp"

namespace raypet::learn {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double activate(Activation a, double z) {
  switch (a) {
    case Activation::kRelu:
      return z > 0 ? z : 0.0;
    case Activation::kTanh:
      return std::tanh(z);
    case Activation::kLinear:
      break;
  }
  return z;
}

// Derivative expressed through the activation output y.
double activation_grad(Activation a, double y) {
  switch (a) {
    case Activation::kRelu:
      return y > 0 ? 1.0 : 0.0;
    case Activation::kTanh:
      return 1.0 - y * y;
    case Activation::kLinear:
      break;
  }
  return 1.0;
}

void fill_uniform(Tensor& t, CounterRng& rng, double limit) {
  for (double& v : t.values()) v = rng.uniform(-limit, limit);
}

// Valid output range along one axis for kernel offset `off` in {-1, 0, 1}.
struct Span1 {
  std::size_t lo, hi;
};
Span1 valid_range(long off, std::size_t extent) {
  return {off < 0 ? std::size_t{1} : std::size_t{0},
          off > 0 ? extent - 1 : extent};
}

void require_param_grads(std::span<Tensor> grads, std::size_t count,
                         const char* layer) {
  if (grads.size() != count)
    throw ShapeError(std::string(layer) + ": expected " + std::to_string(count) +
                     " parameter gradient tensors, got " +
                     std::to_string(grads.size()));
}

Tensor slice_step(const Tensor& t, std::size_t step) {
  Shape inner(t.shape().begin() + 1, t.shape().end());
  const std::size_t n = shape_size(inner);
  std::vector<double> values(t.data() + step * n, t.data() + (step + 1) * n);
  return Tensor(std::move(inner), std::move(values));
}

}  // namespace

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::kRelu:
      return "relu";
    case Activation::kTanh:
      return "tanh";
    case Activation::kLinear:
      break;
  }
  return "linear";
}

Activation parse_activation(const std::string& name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  if (name == "linear") return Activation::kLinear;
  throw ConfigError("unknown activation " + name);
}

std::vector<const Tensor*> Layer::params() const {
  auto mutable_params = const_cast<Layer*>(this)->params();
  return {mutable_params.begin(), mutable_params.end()};
}

std::size_t Layer::param_count() const {
  std::size_t n = 0;
  for (const Tensor* t : params()) n += t->size();
  return n;
}

// ---------------------------------------------------------------- Dense

Dense::Dense(std::size_t in, std::size_t out, Activation activation)
    : in_(in),
      out_(out),
      activation_(activation),
      weight_({out, in}),
      bias_({out}) {}

Shape Dense::output_shape(const Shape& input) const {
  if (shape_size(input) != in_ || input.empty())
    throw ShapeError("dense: expected " + std::to_string(in_) +
                     " input values, got shape " + shape_string(input));
  return {out_};
}

Tensor Dense::forward(const Tensor& input, Cache& cache) const {
  output_shape(input.shape());
  Tensor y({out_});
  const double* x = input.data();
  for (std::size_t o = 0; o < out_; ++o) {
    const double* w = weight_.data() + o * in_;
    double z = bias_[o];
    for (std::size_t i = 0; i < in_; ++i) z += w[i] * x[i];
    y[o] = activate(activation_, z);
  }
  cache.tensors = {input, y};
  return y;
}

Tensor Dense::backward(const Cache& cache, const Tensor& upstream,
                       std::span<Tensor> param_grads) const {
  require_param_grads(param_grads, 2, "dense");
  const Tensor& x = cache.tensors.at(0);
  const Tensor& y = cache.tensors.at(1);
  require_shape(y.shape(), upstream.shape(), "dense backward");
  Tensor& dw = param_grads[0];
  Tensor& db = param_grads[1];
  Tensor dx(x.shape());
  for (std::size_t o = 0; o < out_; ++o) {
    const double g = upstream[o] * activation_grad(activation_, y[o]);
    if (g == 0.0) continue;
    db[o] += g;
    const double* w = weight_.data() + o * in_;
    double* dwo = dw.data() + o * in_;
    for (std::size_t i = 0; i < in_; ++i) {
      dwo[i] += g * x[i];
      dx[i] += w[i] * g;
    }
  }
  return dx;
}

void Dense::init(CounterRng& rng) {
  bias_.fill(0.0);
  if (zero_init_) {
    weight_.fill(0.0);
    return;
  }
  // He-style for rectifiers, Xavier otherwise.
  const double limit = activation_ == Activation::kRelu
                           ? std::sqrt(6.0 / static_cast<double>(in_))
                           : std::sqrt(6.0 / static_cast<double>(in_ + out_));
  fill_uniform(weight_, rng, limit);
}

nlohmann::json Dense::spec() const {
  return {{"type", "dense"},
          {"in", in_},
          {"out", out_},
          {"activation", activation_name(activation_)},
          {"zero_init", zero_init_}};
}

std::unique_ptr<Layer> Dense::clone() const {
  return std::make_unique<Dense>(*this);
}

// ---------------------------------------------------------------- Conv3D

Conv3D::Conv3D(std::size_t in_channels, std::size_t out_channels,
               Activation activation)
    : cin_(in_channels),
      cout_(out_channels),
      activation_(activation),
      weight_({out_channels, in_channels, 3, 3, 3}),
      bias_({out_channels}) {}

Shape Conv3D::output_shape(const Shape& input) const {
  if (input.size() != 4 || input[0] != cin_ || input[1] == 0 || input[2] == 0 ||
      input[3] == 0)
    throw ShapeError("conv3d: expected [" + std::to_string(cin_) +
                     ", D, H, W], got " + shape_string(input));
  return {cout_, input[1], input[2], input[3]};
}

Tensor Conv3D::forward(const Tensor& input, Cache& cache) const {
  Tensor y(output_shape(input.shape()));
  kernels::conv3d_forward(kernels::default_exec(), input.values(), cin_,
                          input.dim(1), input.dim(2), input.dim(3),
                          weight_.values(), bias_.values(), cout_, y.values());
  if (activation_ != Activation::kLinear)
    for (double& v : y.values()) v = activate(activation_, v);
  cache.tensors = {input, y};
  return y;
}

Tensor Conv3D::backward(const Cache& cache, const Tensor& upstream,
                        std::span<Tensor> param_grads) const {
  require_param_grads(param_grads, 2, "conv3d");
  const Tensor& x = cache.tensors.at(0);
  const Tensor& y = cache.tensors.at(1);
  require_shape(y.shape(), upstream.shape(), "conv3d backward");
  const std::size_t D = x.dim(1), H = x.dim(2), W = x.dim(3);
  const std::size_t plane = H * W, volume = D * plane;

  Tensor g = upstream;
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] *= activation_grad(activation_, y[i]);

  Tensor& dw = param_grads[0];
  Tensor& db = param_grads[1];
  Tensor dx(x.shape());
  for (std::size_t co = 0; co < cout_; ++co) {
    const double* gc = g.data() + co * volume;
    double bsum = 0;
    for (std::size_t i = 0; i < volume; ++i) bsum += gc[i];
    db[co] += bsum;
    for (std::size_t ci = 0; ci < cin_; ++ci) {
      const double* xin = x.data() + ci * volume;
      double* dxin = dx.data() + ci * volume;
      const double* w = weight_.data() + (co * cin_ + ci) * 27;
      double* dwk = dw.data() + (co * cin_ + ci) * 27;
      for (int kd = 0; kd < 3; ++kd)
        for (int kh = 0; kh < 3; ++kh)
          for (int kw = 0; kw < 3; ++kw) {
            const long od = kd - 1, oh = kh - 1, ow = kw - 1;
            const Span1 rd = valid_range(od, D), rh = valid_range(oh, H),
                        rw = valid_range(ow, W);
            const int k = (kd * 3 + kh) * 3 + kw;
            const double wv = w[k];
            double acc = 0;
            for (std::size_t d = rd.lo; d < rd.hi; ++d)
              for (std::size_t h = rh.lo; h < rh.hi; ++h) {
                const double* gr = gc + d * plane + h * W;
                const std::size_t src = (d + od) * plane + (h + oh) * W;
                const double* xr = xin + src;
                double* dxr = dxin + src;
                for (std::size_t ww = rw.lo; ww < rw.hi; ++ww) {
                  acc += gr[ww] * xr[ww + ow];
                  dxr[ww + ow] += wv * gr[ww];
                }
              }
            dwk[k] += acc;
          }
    }
  }
  return dx;
}

void Conv3D::init(CounterRng& rng) {
  bias_.fill(0.0);
  const double fan_in = static_cast<double>(cin_ * 27);
  const double limit = activation_ == Activation::kRelu
                           ? std::sqrt(6.0 / fan_in)
                           : std::sqrt(6.0 / (fan_in + cout_ * 27.0));
  fill_uniform(weight_, rng, limit);
}

nlohmann::json Conv3D::spec() const {
  return {{"type", "conv3d"},
          {"in_channels", cin_},
          {"out_channels", cout_},
          {"activation", activation_name(activation_)}};
}

std::unique_ptr<Layer> Conv3D::clone() const {
  return std::make_unique<Conv3D>(*this);
}

// ---------------------------------------------------------------- MaxPool3D

Shape MaxPool3D::output_shape(const Shape& input) const {
  if (input.size() != 4 || input[1] == 0 || input[2] == 0 || input[3] == 0)
    throw ShapeError("maxpool3d: expected [C, D, H, W], got " +
                     shape_string(input));
  return {input[0], (input[1] + 1) / 2, (input[2] + 1) / 2, (input[3] + 1) / 2};
}

Tensor MaxPool3D::forward(const Tensor& input, Cache& cache) const {
  const Shape out_shape = output_shape(input.shape());
  const std::size_t C = input.dim(0), D = input.dim(1), H = input.dim(2),
                    W = input.dim(3);
  const std::size_t OD = out_shape[1], OH = out_shape[2], OW = out_shape[3];
  Tensor y(out_shape);
  Tensor argmax(out_shape);
  std::size_t o = 0;
  for (std::size_t c = 0; c < C; ++c)
    for (std::size_t d = 0; d < OD; ++d)
      for (std::size_t h = 0; h < OH; ++h)
        for (std::size_t w = 0; w < OW; ++w, ++o) {
          std::size_t best = 0;
          double best_v = 0;
          bool first = true;
          for (std::size_t dd = 2 * d; dd < std::min(2 * d + 2, D); ++dd)
            for (std::size_t hh = 2 * h; hh < std::min(2 * h + 2, H); ++hh)
              for (std::size_t ww = 2 * w; ww < std::min(2 * w + 2, W); ++ww) {
                const std::size_t idx = ((c * D + dd) * H + hh) * W + ww;
                if (first || input[idx] > best_v) {
                  best = idx;
                  best_v = input[idx];
                  first = false;
                }
              }
          y[o] = best_v;
          argmax[o] = static_cast<double>(best);
        }
  cache.tensors = {Tensor(input.shape()), argmax};
  return y;
}

Tensor MaxPool3D::backward(const Cache& cache, const Tensor& upstream,
                           std::span<Tensor> param_grads) const {
  require_param_grads(param_grads, 0, "maxpool3d");
  const Tensor& argmax = cache.tensors.at(1);
  require_shape(argmax.shape(), upstream.shape(), "maxpool3d backward");
  Tensor dx(cache.tensors.at(0).shape());
  for (std::size_t o = 0; o < upstream.size(); ++o)
    dx[static_cast<std::size_t>(argmax[o])] += upstream[o];
  return dx;
}

nlohmann::json MaxPool3D::spec() const { return {{"type", "maxpool3d"}}; }

std::unique_ptr<Layer> MaxPool3D::clone() const {
  return std::make_unique<MaxPool3D>(*this);
}

// ---------------------------------------------------------------- Lstm

Lstm::Lstm(std::size_t in, std::size_t hidden, bool reverse)
    : in_(in),
      hidden_(hidden),
      reverse_(reverse),
      w_input_({4 * hidden, in}),
      w_hidden_({4 * hidden, hidden}),
      bias_({4 * hidden}) {}

Shape Lstm::output_shape(const Shape& input) const {
  if (input.size() != 2 || input[1] != in_ || input[0] == 0)
    throw ShapeError("lstm: expected [T, " + std::to_string(in_) + "], got " +
                     shape_string(input));
  return {input[0], hidden_};
}

// Cache layout: x, gates (post-activation) [T, 4H], cell [T, H], hidden [T, H],
// all indexed by time step t (not processing order).
Tensor Lstm::forward(const Tensor& input, Cache& cache) const {
  const Shape out_shape = output_shape(input.shape());
  const std::size_t T = input.dim(0), Hd = hidden_, G = 4 * hidden_;
  Tensor gates({T, G}), cell({T, Hd}), hid(out_shape);
  std::vector<double> h_prev(Hd, 0.0), c_prev(Hd, 0.0), z(G);
  for (std::size_t s = 0; s < T; ++s) {
    const std::size_t t = reverse_ ? T - 1 - s : s;
    const double* x = input.data() + t * in_;
    for (std::size_t r = 0; r < G; ++r) {
      double acc = bias_[r];
      const double* wx = w_input_.data() + r * in_;
      for (std::size_t i = 0; i < in_; ++i) acc += wx[i] * x[i];
      const double* wh = w_hidden_.data() + r * Hd;
      for (std::size_t j = 0; j < Hd; ++j) acc += wh[j] * h_prev[j];
      z[r] = acc;
    }
    double* gt = gates.data() + t * G;
    double* ct = cell.data() + t * Hd;
    double* ht = hid.data() + t * Hd;
    for (std::size_t j = 0; j < Hd; ++j) {
      const double ig = sigmoid(z[j]);
      const double fg = sigmoid(z[Hd + j]);
      const double gg = std::tanh(z[2 * Hd + j]);
      const double og = sigmoid(z[3 * Hd + j]);
      gt[j] = ig;
      gt[Hd + j] = fg;
      gt[2 * Hd + j] = gg;
      gt[3 * Hd + j] = og;
      ct[j] = fg * c_prev[j] + ig * gg;
      ht[j] = og * std::tanh(ct[j]);
    }
    std::copy(ct, ct + Hd, c_prev.begin());
    std::copy(ht, ht + Hd, h_prev.begin());
  }
  cache.tensors = {input, gates, cell, hid};
  return hid;
}

Tensor Lstm::backward(const Cache& cache, const Tensor& upstream,
                      std::span<Tensor> param_grads) const {
  require_param_grads(param_grads, 3, "lstm");
  const Tensor& x = cache.tensors.at(0);
  const Tensor& gates = cache.tensors.at(1);
  const Tensor& cell = cache.tensors.at(2);
  const Tensor& hid = cache.tensors.at(3);
  require_shape(hid.shape(), upstream.shape(), "lstm backward");
  const std::size_t T = x.dim(0), Hd = hidden_, G = 4 * hidden_;
  Tensor& dwx = param_grads[0];
  Tensor& dwh = param_grads[1];
  Tensor& db = param_grads[2];
  Tensor dx(x.shape());
  std::vector<double> dh_next(Hd, 0.0), dc_next(Hd, 0.0), dz(G);
  const std::vector<double> zeros(Hd, 0.0);

  for (std::size_t s = T; s-- > 0;) {
    const std::size_t t = reverse_ ? T - 1 - s : s;
    const bool has_prev = s > 0;
    const std::size_t tp = reverse_ ? t + 1 : t - 1;  // valid when has_prev
    const double* c_prev = has_prev ? cell.data() + tp * Hd : zeros.data();
    const double* h_prev = has_prev ? hid.data() + tp * Hd : zeros.data();
    const double* gt = gates.data() + t * G;
    const double* ct = cell.data() + t * Hd;
    for (std::size_t j = 0; j < Hd; ++j) {
      const double ig = gt[j], fg = gt[Hd + j], gg = gt[2 * Hd + j],
                   og = gt[3 * Hd + j];
      const double dh = upstream[t * Hd + j] + dh_next[j];
      const double tc = std::tanh(ct[j]);
      const double dc = dh * og * (1.0 - tc * tc) + dc_next[j];
      dz[j] = dc * gg * ig * (1.0 - ig);
      dz[Hd + j] = dc * c_prev[j] * fg * (1.0 - fg);
      dz[2 * Hd + j] = dc * ig * (1.0 - gg * gg);
      dz[3 * Hd + j] = dh * tc * og * (1.0 - og);
      dc_next[j] = dc * fg;
    }
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    const double* xt = x.data() + t * in_;
    double* dxt = dx.data() + t * in_;
    for (std::size_t r = 0; r < G; ++r) {
      const double g = dz[r];
      if (g == 0.0) continue;
      db[r] += g;
      const double* wx = w_input_.data() + r * in_;
      double* dwxr = dwx.data() + r * in_;
      for (std::size_t i = 0; i < in_; ++i) {
        dwxr[i] += g * xt[i];
        dxt[i] += wx[i] * g;
      }
      const double* wh = w_hidden_.data() + r * Hd;
      double* dwhr = dwh.data() + r * Hd;
      for (std::size_t j = 0; j < Hd; ++j) {
        dwhr[j] += g * h_prev[j];
        dh_next[j] += wh[j] * g;
      }
    }
  }
  return dx;
}

void Lstm::init(CounterRng& rng) {
  const double g = static_cast<double>(4 * hidden_);
  fill_uniform(w_input_, rng, std::sqrt(6.0 / (static_cast<double>(in_) + g)));
  fill_uniform(w_hidden_, rng,
               std::sqrt(6.0 / (static_cast<double>(hidden_) + g)));
  bias_.fill(0.0);
  for (std::size_t j = 0; j < hidden_; ++j) bias_[hidden_ + j] = 1.0;
}

nlohmann::json Lstm::spec() const {
  return {{"type", "lstm"}, {"in", in_}, {"hidden", hidden_}, {"reverse", reverse_}};
}

std::unique_ptr<Layer> Lstm::clone() const {
  return std::make_unique<Lstm>(*this);
}

// ---------------------------------------------------------------- Bidirectional

Bidirectional::Bidirectional(std::size_t in, std::size_t hidden)
    : forward_(in, hidden, false), backward_(in, hidden, true) {}

Shape Bidirectional::output_shape(const Shape& input) const {
  forward_.output_shape(input);
  return {2 * forward_.hidden()};
}

Tensor Bidirectional::forward(const Tensor& input, Cache& cache) const {
  output_shape(input.shape());
  cache.children.assign(2, Cache{});
  const Tensor hf = forward_.forward(input, cache.children[0]);
  const Tensor hb = backward_.forward(input, cache.children[1]);
  const std::size_t T = input.dim(0), Hd = forward_.hidden();
  Tensor y({2 * Hd});
  for (std::size_t j = 0; j < Hd; ++j) {
    y[j] = hf[(T - 1) * Hd + j];
    y[Hd + j] = hb[j];  // reversed pass ends at t = 0
  }
  return y;
}

Tensor Bidirectional::backward(const Cache& cache, const Tensor& upstream,
                               std::span<Tensor> param_grads) const {
  require_param_grads(param_grads, 6, "bidirectional");
  const Tensor& x = cache.children.at(0).tensors.at(0);
  const std::size_t T = x.dim(0), Hd = forward_.hidden();
  require_shape({2 * Hd}, upstream.shape(), "bidirectional backward");
  Tensor gf({T, Hd}), gb({T, Hd});
  for (std::size_t j = 0; j < Hd; ++j) {
    gf[(T - 1) * Hd + j] = upstream[j];
    gb[j] = upstream[Hd + j];
  }
  Tensor dx = forward_.backward(cache.children[0], gf, param_grads.subspan(0, 3));
  const Tensor dxb =
      backward_.backward(cache.children[1], gb, param_grads.subspan(3, 3));
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += dxb[i];
  return dx;
}

std::vector<Tensor*> Bidirectional::params() {
  auto p = forward_.params();
  for (Tensor* t : backward_.params()) p.push_back(t);
  return p;
}

void Bidirectional::init(CounterRng& rng) {
  forward_.init(rng);
  backward_.init(rng);
}

nlohmann::json Bidirectional::spec() const {
  return {{"type", "bidirectional"},
          {"in", forward_.in()},
          {"hidden", forward_.hidden()}};
}

std::unique_ptr<Layer> Bidirectional::clone() const {
  return std::make_unique<Bidirectional>(*this);
}

// ---------------------------------------------------------------- Sequential

Sequential::Sequential(const Sequential& other) {
  for (const auto& l : other.layers_) layers_.push_back(l->clone());
}

Sequential& Sequential::operator=(const Sequential& other) {
  if (this != &other) {
    layers_.clear();
    for (const auto& l : other.layers_) layers_.push_back(l->clone());
  }
  return *this;
}

Sequential& Sequential::add(LayerPtr layer) {
  layers_.push_back(std::move(layer));
  return *this;
}

Shape Sequential::output_shape(const Shape& input) const {
  Shape s = input;
  for (const auto& l : layers_) s = l->output_shape(s);
  return s;
}

Tensor Sequential::forward(const Tensor& input, Cache& cache) const {
  cache.children.assign(layers_.size(), Cache{});
  Tensor x = input;
  for (std::size_t i = 0; i < layers_.size(); ++i)
    x = layers_[i]->forward(x, cache.children[i]);
  return x;
}

Tensor Sequential::backward(const Cache& cache, const Tensor& upstream,
                            std::span<Tensor> param_grads) const {
  std::vector<std::size_t> offsets(layers_.size() + 1, 0);
  for (std::size_t i = 0; i < layers_.size(); ++i)
    offsets[i + 1] = offsets[i] + layers_[i]->params().size();
  require_param_grads(param_grads, offsets.back(), "sequential");
  Tensor g = upstream;
  for (std::size_t i = layers_.size(); i-- > 0;)
    g = layers_[i]->backward(
        cache.children.at(i), g,
        param_grads.subspan(offsets[i], offsets[i + 1] - offsets[i]));
  return g;
}

std::vector<Tensor*> Sequential::params() {
  std::vector<Tensor*> out;
  for (auto& l : layers_)
    for (Tensor* t : l->params()) out.push_back(t);
  return out;
}

void Sequential::init(CounterRng& rng) {
  for (auto& l : layers_) l->init(rng);
}

nlohmann::json Sequential::spec() const {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : layers_) layers.push_back(l->spec());
  return {{"type", "sequential"}, {"layers", layers}};
}

std::unique_ptr<Layer> Sequential::clone() const {
  return std::make_unique<Sequential>(*this);
}

// ---------------------------------------------------------------- TimeDistributed

TimeDistributed::TimeDistributed(LayerPtr inner) : inner_(std::move(inner)) {}

TimeDistributed::TimeDistributed(const TimeDistributed& other)
    : inner_(other.inner_->clone()) {}

Shape TimeDistributed::output_shape(const Shape& input) const {
  if (input.size() < 2 || input[0] == 0)
    throw ShapeError("time_distributed: expected [T, ...], got " +
                     shape_string(input));
  Shape out = inner_->output_shape(Shape(input.begin() + 1, input.end()));
  out.insert(out.begin(), input[0]);
  return out;
}

Tensor TimeDistributed::forward(const Tensor& input, Cache& cache) const {
  const Shape out_shape = output_shape(input.shape());
  const std::size_t T = input.dim(0);
  const std::size_t step_out = shape_size(out_shape) / T;
  Tensor y(out_shape);
  cache.children.assign(T, Cache{});
  for (std::size_t t = 0; t < T; ++t) {
    const Tensor yt = inner_->forward(slice_step(input, t), cache.children[t]);
    std::copy(yt.data(), yt.data() + step_out, y.data() + t * step_out);
  }
  cache.tensors = {Tensor(input.shape())};
  return y;
}

Tensor TimeDistributed::backward(const Cache& cache, const Tensor& upstream,
                                 std::span<Tensor> param_grads) const {
  const Shape& in_shape = cache.tensors.at(0).shape();
  const std::size_t T = in_shape[0];
  require_shape(output_shape(in_shape), upstream.shape(),
                "time_distributed backward");
  const std::size_t step_in = shape_size(in_shape) / T;
  Tensor dx(in_shape);
  for (std::size_t t = 0; t < T; ++t) {
    const Tensor g = inner_->backward(cache.children.at(t),
                                      slice_step(upstream, t), param_grads);
    std::copy(g.data(), g.data() + step_in, dx.data() + t * step_in);
  }
  return dx;
}

nlohmann::json TimeDistributed::spec() const {
  return {{"type", "time_distributed"}, {"inner", inner_->spec()}};
}

std::unique_ptr<Layer> TimeDistributed::clone() const {
  return std::make_unique<TimeDistributed>(*this);
}

// ---------------------------------------------------------------- Softmax

Shape Softmax::output_shape(const Shape& input) const {
  if (input.size() != 1 || input[0] == 0)
    throw ShapeError("softmax: expected [n], got " + shape_string(input));
  return input;
}

Tensor Softmax::forward(const Tensor& input, Cache& cache) const {
  output_shape(input.shape());
  Tensor y(input.shape());
  double m = input[0];
  for (std::size_t i = 1; i < input.size(); ++i) m = std::max(m, input[i]);
  double sum = 0;
  for (std::size_t i = 0; i < input.size(); ++i) sum += (y[i] = std::exp(input[i] - m));
  for (double& v : y.values()) v /= sum;
  cache.tensors = {y};
  return y;
}

Tensor Softmax::backward(const Cache& cache, const Tensor& upstream,
                         std::span<Tensor> param_grads) const {
  require_param_grads(param_grads, 0, "softmax");
  const Tensor& y = cache.tensors.at(0);
  require_shape(y.shape(), upstream.shape(), "softmax backward");
  double dot = 0;
  for (std::size_t i = 0; i < y.size(); ++i) dot += y[i] * upstream[i];
  Tensor dx(y.shape());
  for (std::size_t i = 0; i < y.size(); ++i) dx[i] = y[i] * (upstream[i] - dot);
  return dx;
}

nlohmann::json Softmax::spec() const { return {{"type", "softmax"}}; }

std::unique_ptr<Layer> Softmax::clone() const {
  return std::make_unique<Softmax>(*this);
}

// ---------------------------------------------------------------- helpers

LayerPtr layer_from_spec(const nlohmann::json& spec) {
  const std::string type = spec.at("type").get<std::string>();
  if (type == "dense") {
    auto d = std::make_unique<Dense>(
        spec.at("in").get<std::size_t>(), spec.at("out").get<std::size_t>(),
        parse_activation(spec.at("activation").get<std::string>()));
    d->set_zero_init(spec.value("zero_init", false));
    return d;
  }
  if (type == "conv3d")
    return std::make_unique<Conv3D>(
        spec.at("in_channels").get<std::size_t>(),
        spec.at("out_channels").get<std::size_t>(),
        parse_activation(spec.at("activation").get<std::string>()));
  if (type == "maxpool3d") return std::make_unique<MaxPool3D>();
  if (type == "lstm")
    return std::make_unique<Lstm>(spec.at("in").get<std::size_t>(),
                                  spec.at("hidden").get<std::size_t>(),
                                  spec.value("reverse", false));
  if (type == "bidirectional")
    return std::make_unique<Bidirectional>(spec.at("in").get<std::size_t>(),
                                           spec.at("hidden").get<std::size_t>());
  if (type == "sequential") {
    auto s = std::make_unique<Sequential>();
    for (const auto& l : spec.at("layers")) s->add(layer_from_spec(l));
    return s;
  }
  if (type == "time_distributed")
    return std::make_unique<TimeDistributed>(layer_from_spec(spec.at("inner")));
  if (type == "softmax") return std::make_unique<Softmax>();
  throw ConfigError("unknown layer type " + type);
}

nlohmann::json params_to_json(const Layer& layer) {
  nlohmann::json out = nlohmann::json::array();
  for (const Tensor* t : layer.params())
    out.push_back(std::vector<double>(t->values().begin(), t->values().end()));
  return out;
}

void params_from_json(Layer& layer, const nlohmann::json& values) {
  auto params = layer.params();
  if (!values.is_array() || values.size() != params.size())
    throw ShapeError("checkpoint parameter count does not match the layer spec");
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto v = values[i].get<std::vector<double>>();
    if (v.size() != params[i]->size())
      throw ShapeError("checkpoint tensor " + std::to_string(i) + " has " +
                       std::to_string(v.size()) + " values, expected " +
                       std::to_string(params[i]->size()));
    std::copy(v.begin(), v.end(), params[i]->data());
  }
}

std::vector<Tensor> zero_grads(const Layer& layer) {
  std::vector<Tensor> out;
  for (const Tensor* t : layer.params()) out.emplace_back(t->shape());
  return out;
}

}  // namespace raypet::learn
