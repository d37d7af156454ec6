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

#ifndef HAMLEARN_NN_NETWORK_HPP
#define HAMLEARN_NN_NETWORK_HPP

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hamlearn/nn/ops.hpp"
#include "hamlearn/nn/tensor.hpp"

namespace hamlearn::nn {

struct LayerSpec {
  enum class Kind { kConv, kPool, kFlatten, kDense, kRelu, kLinear, kDropout };
  Kind kind = Kind::kLinear;
  int units = 0;       // conv output channels or dense units
  Window window{};     // conv kernel or pooling window
  double rate = 0.0;   // dropout probability
};

/// Layer stack plus the per-sample input shape (batch field ignored).
struct NetworkSpec {
  Shape input;
  std::vector<LayerSpec> layers;

  /// One line, e.g. "input 1x8x8; conv 16 3x3; relu; pool 2x2; ...".
  std::string describe() const;
  static NetworkSpec parse(std::string_view text);

  /// Output shape after each layer for a single sample. Throws ShapeError
  /// if the stack does not chain or does not end in dense(1) + linear.
  std::vector<Shape> shapes() const;
};

enum class DropoutPlacement {
  kDenseOnly,  // after each hidden dense layer
  kAll,        // additionally after every convolution
};

std::string_view placement_name(DropoutPlacement placement);
DropoutPlacement parse_placement(std::string_view name);

struct PresetOptions {
  double dropout = 0.5;
  DropoutPlacement placement = DropoutPlacement::kDenseOnly;
};

/// Presets "paper-2d", "small-2d" (square input of side `extent`) and
/// "paper-1d-flat" (vector input of length `extent`).
NetworkSpec preset_spec(std::string_view preset, int extent, const PresetOptions& options = {});
bool preset_is_flat(std::string_view preset);
bool is_known_preset(std::string_view preset);

struct ParamView {
  std::span<double> value;
  std::span<double> grad;
};

class Network {
 public:
  /// He-normal weights and zero biases drawn from `init_seed`.
  Network(NetworkSpec spec, std::uint64_t init_seed);

  const NetworkSpec& spec() const { return spec_; }

  /// Training-mode forward caches activations for backward(); evaluation
  /// mode is the same as predict().
  Tensor4 forward(const Tensor4& batch, Mode mode);

  /// Pure evaluation-mode forward.
  Tensor4 predict(const Tensor4& batch) const;

  /// Output of layer `last` (inclusive) in evaluation mode.
  Tensor4 predict_until(const Tensor4& batch, std::size_t last) const;

  /// MSE against `targets` for the last training-mode forward; fills the
  /// parameter gradients and returns the loss.
  double backward(std::span<const double> targets);

  void set_dropout_seed(std::uint64_t seed) { dropout_rng_.seed(seed); }
  /// While frozen, training-mode forwards replay the last dropout masks.
  void freeze_dropout_masks(bool frozen) { frozen_masks_ = frozen; }

  std::vector<ParamView> parameters();
  std::vector<std::vector<double>> parameter_arrays() const;
  void set_parameter_arrays(const std::vector<std::vector<double>>& arrays);
  std::size_t parameter_count() const;

  /// Drops cached activations.
  void clear_cache();

 private:
  struct Layer {
    LayerSpec spec;
    std::vector<double> weights, bias, grad_weights, grad_bias;
    Tensor4 input;                    // cached input (conv, dense, relu)
    Shape input_shape;                // pooling / flatten
    std::vector<std::size_t> argmax;  // pooling
    std::vector<double> mask;         // dropout
  };

  Tensor4 run(const Tensor4& batch, std::size_t last) const;
  void check_input(const Tensor4& batch) const;

  NetworkSpec spec_;
  std::vector<Layer> layers_;
  std::vector<double> last_output_;
  std::mt19937_64 dropout_rng_{0};
  bool frozen_masks_ = false;
};

struct Features {
  Tensor4 maps;                      // activations after the second pooling layer
  std::vector<double> channel_mean_abs;
};

/// Runs one image (shape 1 x c x h x w) through the network in evaluation
/// mode. Throws ConfigError if the network has fewer than two pools.
Features extract_features(const Network& net, const Tensor4& image);

/// "QNET", u16 version, u32 descriptor length, descriptor text, then each
/// parameter array as u64 count followed by little-endian f64 values.
inline constexpr std::uint16_t kCheckpointVersion = 1;
std::vector<std::uint8_t> encode_checkpoint(const Network& net);
Network decode_checkpoint(std::span<const std::uint8_t> bytes);
void save_checkpoint(const Network& net, const std::filesystem::path& path);
Network load_checkpoint(const std::filesystem::path& path);

}  // namespace hamlearn::nn

#endif  // HAMLEARN_NN_NETWORK_HPP
