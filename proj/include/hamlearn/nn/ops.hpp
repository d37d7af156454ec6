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

#ifndef HAMLEARN_NN_OPS_HPP
#define HAMLEARN_NN_OPS_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "hamlearn/nn/tensor.hpp"

// Layer primitives. Convolution weights are laid out [out][in][kh][kw] and
// dense weights [units][inputs]; both use cross-correlation conventions.

namespace hamlearn::nn {

enum class Mode { kTrain, kEval };

/// Kernel or pooling window extent. A 1D layer is a 1 x k window over
/// height-1 tensors.
struct Window {
  int h = 3;
  int w = 3;
  friend bool operator==(const Window&, const Window&) = default;
};

/// Samples from Normal(0, 2 / fan_in).
std::vector<double> he_normal_init(int fan_in, std::size_t count, std::mt19937_64& rng);

/// Stride 1, zero padding that keeps height and width (odd kernels).
Tensor4 conv2d_forward(const Tensor4& input, std::span<const double> weights,
                       std::span<const double> bias, Window kernel);

struct ConvGrads {
  Tensor4 input;  // empty when not requested
  std::vector<double> weights;
  std::vector<double> bias;
};

ConvGrads conv2d_backward(const Tensor4& input, std::span<const double> weights,
                          Window kernel, const Tensor4& upstream,
                          bool want_input_grad = true);

struct PoolResult {
  Tensor4 output;
  std::vector<std::size_t> argmax;  // flat input index per output element
};

/// Non-overlapping max pooling. Ties go to the first cell in row-major order.
PoolResult maxpool_forward(const Tensor4& input, Window window);
Tensor4 maxpool_backward(const Shape& input_shape, std::span<const std::size_t> argmax,
                         const Tensor4& upstream);

/// y = W x + b per sample; the input is viewed as (n, c*h*w) and the
/// output has shape (n, units, 1, 1).
Tensor4 dense_forward(const Tensor4& input, std::span<const double> weights,
                      std::span<const double> bias);

struct DenseGrads {
  Tensor4 input;
  std::vector<double> weights;
  std::vector<double> bias;
};

DenseGrads dense_backward(const Tensor4& input, std::span<const double> weights,
                          const Tensor4& upstream);

Tensor4 relu_forward(const Tensor4& input);
/// Subgradient 0 at 0.
Tensor4 relu_backward(const Tensor4& input, const Tensor4& upstream);

/// Inverted dropout. In training mode each element is kept with probability
/// 1 - p and scaled by 1 / (1 - p); `scale` receives the per-element factor.
/// Evaluation mode, or p = 0, is the identity and draws nothing from `rng`.
Tensor4 dropout_forward(const Tensor4& input, double p, std::mt19937_64& rng,
                        Mode mode, std::vector<double>* scale = nullptr);
/// Elementwise product with a recorded mask, used for backward and for
/// replaying a frozen mask.
Tensor4 apply_mask(const Tensor4& input, std::span<const double> scale);

struct Loss {
  double value = 0.0;
  std::vector<double> grad;
};

/// Mean squared error and its gradient with respect to the predictions.
Loss mse_loss(std::span<const double> predictions, std::span<const double> targets);

struct RmspropConfig {
  double learning_rate = 0.001;
  double decay = 0.9;
  double epsilon = 1e-7;
};

/// s <- decay s + (1 - decay) g^2;  theta <- theta - lr g / (sqrt(s) + eps).
void rmsprop_step(std::span<double> theta, std::span<const double> grad,
                  std::span<double> accumulator, const RmspropConfig& config);

}  // namespace hamlearn::nn

#endif  // HAMLEARN_NN_OPS_HPP
