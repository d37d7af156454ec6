// Copyright 2026 The hamlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hamlearn/nn/ops.hpp"

#include <algorithm>
#include <cmath>

#include "hamlearn/error.hpp"
#include "hamlearn/simd/kernels.hpp"

namespace hamlearn::nn {

namespace {

void check_kernel(Window k) {
  if (k.h < 1 || k.w < 1 || k.h % 2 == 0 || k.w % 2 == 0) {
    throw ShapeError("conv kernel extents must be odd and positive");
  }
}

// Rows (channel, ky, kx), columns (y, x) of the zero-padded neighbourhood.
// Output columns xx whose source column xx + dx stays inside [0, w).
inline std::pair<int, int> valid_span(int w, int dx) {
  return {std::max(0, -dx), std::min(w, w - dx)};
}

void im2col(const double* x, int channels, int h, int w, Window k, double* col) {
  const int ph = k.h / 2, pw = k.w / 2;
  const std::size_t hw = std::size_t(h) * w;
  for (int c = 0; c < channels; ++c) {
    const double* plane = x + c * hw;
    for (int ky = 0; ky < k.h; ++ky) {
      for (int kx = 0; kx < k.w; ++kx) {
        double* row = col + ((std::size_t(c) * k.h + ky) * k.w + kx) * hw;
        const int dx = kx - pw;
        const auto [x0, x1] = valid_span(w, dx);
        for (int y = 0; y < h; ++y) {
          const int sy = y + ky - ph;
          double* out = row + std::size_t(y) * w;
          if (sy < 0 || sy >= h || x0 >= x1) {
            std::fill(out, out + w, 0.0);
            continue;
          }
          const double* src = plane + std::size_t(sy) * w + dx;
          std::fill(out, out + x0, 0.0);
          std::copy(src + x0, src + x1, out + x0);
          std::fill(out + x1, out + w, 0.0);
        }
      }
    }
  }
}

void col2im(const double* col, int channels, int h, int w, Window k, double* x) {
  const int ph = k.h / 2, pw = k.w / 2;
  const std::size_t hw = std::size_t(h) * w;
  std::fill(x, x + channels * hw, 0.0);
  for (int c = 0; c < channels; ++c) {
    double* plane = x + c * hw;
    for (int ky = 0; ky < k.h; ++ky) {
      for (int kx = 0; kx < k.w; ++kx) {
        const double* row = col + ((std::size_t(c) * k.h + ky) * k.w + kx) * hw;
        const int dx = kx - pw;
        const auto [x0, x1] = valid_span(w, dx);
        for (int y = 0; y < h; ++y) {
          const int sy = y + ky - ph;
          if (sy < 0 || sy >= h) continue;
          const double* in = row + std::size_t(y) * w;
          double* dst = plane + std::size_t(sy) * w + dx;
          for (int xx = x0; xx < x1; ++xx) dst[xx] += in[xx];
        }
      }
    }
  }
}

int conv_out_channels(const Tensor4& input, std::span<const double> weights,
                      std::size_t bias_count, Window k) {
  check_kernel(k);
  const std::size_t per_out = std::size_t(input.shape.c) * k.h * k.w;
  if (bias_count == 0 || weights.size() != bias_count * per_out) {
    throw ShapeError("conv weights do not match input channels and kernel");
  }
  return static_cast<int>(bias_count);
}

}  // namespace

std::vector<double> he_normal_init(int fan_in, std::size_t count, std::mt19937_64& rng) {
  if (fan_in < 1) throw ConfigError("fan_in must be >= 1");
  std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / fan_in));
  std::vector<double> out(count);
  for (double& v : out) v = dist(rng);
  return out;
}

Tensor4 conv2d_forward(const Tensor4& input, std::span<const double> weights,
                       std::span<const double> bias, Window kernel) {
  const int out_c = conv_out_channels(input, weights, bias.size(), kernel);
  const Shape& s = input.shape;
  const std::size_t hw = std::size_t(s.h) * s.w;
  const std::size_t k = std::size_t(s.c) * kernel.h * kernel.w;
  Tensor4 out(Shape{s.n, out_c, s.h, s.w});
  std::vector<double> col(k * hw);
  for (int b = 0; b < s.n; ++b) {
    im2col(input.sample(b), s.c, s.h, s.w, kernel, col.data());
    double* y = out.sample(b);
    for (int o = 0; o < out_c; ++o) std::fill(y + o * hw, y + (o + 1) * hw, bias[o]);
    simd::gemm_nn(out_c, hw, k, weights.data(), k, col.data(), hw, y, hw, true);
  }
  return out;
}

ConvGrads conv2d_backward(const Tensor4& input, std::span<const double> weights,
                          Window kernel, const Tensor4& upstream, bool want_input_grad) {
  const Shape& s = input.shape;
  const std::size_t per_out = std::size_t(s.c) * kernel.h * kernel.w;
  check_kernel(kernel);
  if (per_out == 0 || weights.size() % per_out != 0) {
    throw ShapeError("conv weights do not match input channels and kernel");
  }
  const int out_c = static_cast<int>(weights.size() / per_out);
  if (upstream.shape != Shape{s.n, out_c, s.h, s.w}) {
    throw ShapeError("conv upstream gradient has the wrong shape");
  }
  const std::size_t hw = std::size_t(s.h) * s.w;
  ConvGrads g;
  g.weights.assign(weights.size(), 0.0);
  g.bias.assign(out_c, 0.0);
  if (want_input_grad) g.input = Tensor4(s);
  std::vector<double> col(per_out * hw);
  std::vector<double> dcol(want_input_grad ? per_out * hw : 0);
  for (int b = 0; b < s.n; ++b) {
    const double* dy = upstream.sample(b);
    for (int o = 0; o < out_c; ++o) {
      const double* row = dy + o * hw;
      double acc = 0.0;
      for (std::size_t i = 0; i < hw; ++i) acc += row[i];
      g.bias[o] += acc;
    }
    im2col(input.sample(b), s.c, s.h, s.w, kernel, col.data());
    simd::gemm_nt(out_c, per_out, hw, dy, hw, col.data(), hw, g.weights.data(), per_out, true);
    if (want_input_grad) {
      simd::gemm_tn(per_out, hw, out_c, weights.data(), per_out, dy, hw, dcol.data(), hw);
      col2im(dcol.data(), s.c, s.h, s.w, kernel, g.input.sample(b));
    }
  }
  return g;
}

PoolResult maxpool_forward(const Tensor4& input, Window window) {
  const Shape& s = input.shape;
  if (window.h < 1 || window.w < 1 || s.h % window.h != 0 || s.w % window.w != 0) {
    throw ShapeError("pooling window must divide the input height and width");
  }
  PoolResult r;
  r.output = Tensor4(Shape{s.n, s.c, s.h / window.h, s.w / window.w});
  r.argmax.resize(r.output.data.size());
  std::size_t o = 0;
  for (int b = 0; b < s.n; ++b) {
    for (int c = 0; c < s.c; ++c) {
      const std::size_t plane = (std::size_t(b) * s.c + c) * s.h * s.w;
      for (int y = 0; y < s.h; y += window.h) {
        for (int x = 0; x < s.w; x += window.w) {
          std::size_t best = plane + std::size_t(y) * s.w + x;
          for (int dy = 0; dy < window.h; ++dy) {
            for (int dx = 0; dx < window.w; ++dx) {
              const std::size_t i = plane + std::size_t(y + dy) * s.w + (x + dx);
              if (input.data[i] > input.data[best]) best = i;
            }
          }
          r.output.data[o] = input.data[best];
          r.argmax[o++] = best;
        }
      }
    }
  }
  return r;
}

Tensor4 maxpool_backward(const Shape& input_shape, std::span<const std::size_t> argmax,
                         const Tensor4& upstream) {
  if (argmax.size() != upstream.data.size()) {
    throw ShapeError("pool upstream gradient does not match recorded argmax");
  }
  Tensor4 g(input_shape);
  for (std::size_t o = 0; o < argmax.size(); ++o) g.data.at(argmax[o]) += upstream.data[o];
  return g;
}

Tensor4 dense_forward(const Tensor4& input, std::span<const double> weights,
                      std::span<const double> bias) {
  const std::size_t in = input.shape.sample_size();
  const std::size_t units = bias.size();
  if (units == 0 || weights.size() != units * in) {
    throw ShapeError("dense weights do not match input width");
  }
  const int n = input.shape.n;
  Tensor4 out(Shape{n, static_cast<int>(units), 1, 1});
  for (int b = 0; b < n; ++b) std::copy(bias.begin(), bias.end(), out.sample(b));
  simd::gemm_nt(n, units, in, input.data.data(), in, weights.data(), in, out.data.data(),
                units, true);
  return out;
}

DenseGrads dense_backward(const Tensor4& input, std::span<const double> weights,
                          const Tensor4& upstream) {
  const std::size_t in = input.shape.sample_size();
  const int n = input.shape.n;
  if (in == 0 || weights.size() % in != 0) throw ShapeError("dense weights do not match input");
  const std::size_t units = weights.size() / in;
  if (upstream.shape != Shape{n, static_cast<int>(units), 1, 1}) {
    throw ShapeError("dense upstream gradient has the wrong shape");
  }
  DenseGrads g;
  g.input = Tensor4(input.shape);
  g.weights.resize(weights.size());
  g.bias.assign(units, 0.0);
  const double* dy = upstream.data.data();
  simd::gemm_tn(units, in, n, dy, units, input.data.data(), in, g.weights.data(), in);
  simd::gemm_nn(n, in, units, dy, units, weights.data(), in, g.input.data.data(), in);
  for (int b = 0; b < n; ++b) {
    for (std::size_t u = 0; u < units; ++u) g.bias[u] += dy[b * units + u];
  }
  return g;
}

Tensor4 relu_forward(const Tensor4& input) {
  Tensor4 out(input.shape);
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = std::max(0.0, input.data[i]);
  return out;
}

Tensor4 relu_backward(const Tensor4& input, const Tensor4& upstream) {
  if (input.shape != upstream.shape) throw ShapeError("relu upstream gradient has the wrong shape");
  Tensor4 g(input.shape);
  for (std::size_t i = 0; i < g.data.size(); ++i) {
    g.data[i] = input.data[i] > 0.0 ? upstream.data[i] : 0.0;
  }
  return g;
}

Tensor4 dropout_forward(const Tensor4& input, double p, std::mt19937_64& rng, Mode mode,
                        std::vector<double>* scale) {
  if (!(p >= 0.0 && p < 1.0)) throw ConfigError("dropout rate must be in [0, 1)");
  if (mode == Mode::kEval || p == 0.0) {
    if (scale) scale->assign(input.data.size(), 1.0);
    return input;
  }
  const double keep_scale = 1.0 / (1.0 - p);
  std::vector<double> mask(input.data.size());
  for (double& m : mask) {
    // 53 random bits -> uniform in [0, 1), independent of the library's
    // distribution implementations.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    m = u < p ? 0.0 : keep_scale;
  }
  Tensor4 out = apply_mask(input, mask);
  if (scale) *scale = std::move(mask);
  return out;
}

Tensor4 apply_mask(const Tensor4& input, std::span<const double> scale) {
  if (scale.size() != input.data.size()) throw ShapeError("dropout mask has the wrong size");
  Tensor4 out(input.shape);
  for (std::size_t i = 0; i < scale.size(); ++i) out.data[i] = input.data[i] * scale[i];
  return out;
}

Loss mse_loss(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.empty()) throw ShapeError("mse_loss: empty input");
  if (predictions.size() != targets.size()) throw ShapeError("mse_loss: length mismatch");
  const double n = static_cast<double>(predictions.size());
  Loss l;
  l.grad.resize(predictions.size());
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double d = predictions[i] - targets[i];
    l.value += d * d;
    l.grad[i] = 2.0 * d / n;
  }
  l.value /= n;
  return l;
}

void rmsprop_step(std::span<double> theta, std::span<const double> grad,
                  std::span<double> accumulator, const RmspropConfig& config) {
  if (theta.size() != grad.size() || theta.size() != accumulator.size()) {
    throw ShapeError("rmsprop: parameter, gradient and state sizes differ");
  }
  const double keep = config.decay, mix = 1.0 - config.decay;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double g = grad[i];
    accumulator[i] = keep * accumulator[i] + mix * g * g;
    theta[i] -= config.learning_rate * g / (std::sqrt(accumulator[i]) + config.epsilon);
  }
}

}  // namespace hamlearn::nn
