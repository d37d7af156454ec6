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

#include "hamlearn/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "hamlearn/error.hpp"

namespace hamlearn::nn {

void SampleSet::add(std::span<const double> input, double target) {
  if (input.size() != sample.sample_size()) throw ShapeError("sample has the wrong size");
  inputs.insert(inputs.end(), input.begin(), input.end());
  targets.push_back(target);
}

Tensor4 SampleSet::batch(std::span<const std::size_t> indices) const {
  Tensor4 t(sample.with_batch(static_cast<int>(indices.size())));
  const std::size_t len = sample.sample_size();
  for (std::size_t b = 0; b < indices.size(); ++b) {
    const double* src = inputs.data() + indices[b] * len;
    std::copy(src, src + len, t.data.begin() + b * len);
  }
  return t;
}

SampleSet SampleSet::subset(std::span<const std::size_t> indices) const {
  SampleSet out;
  out.sample = sample;
  const std::size_t len = sample.sample_size();
  for (std::size_t i : indices) {
    out.add(std::span<const double>(inputs.data() + i * len, len), targets[i]);
  }
  return out;
}

std::vector<std::size_t> choose_validation(std::size_t n, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError("validation fraction must be in (0, 1)");
  }
  if (n < 2) throw ConfigError("need at least two training samples to carve a validation set");
  std::size_t n_val = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  n_val = std::clamp<std::size_t>(n_val, 1, n - 1);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> val(order.begin(), order.begin() + n_val);
  std::sort(val.begin(), val.end());
  return val;
}

std::pair<SampleSet, SampleSet> split_validation(const SampleSet& all, double fraction,
                                                 std::uint64_t seed) {
  const std::vector<std::size_t> val = choose_validation(all.size(), fraction, seed);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0, v = 0; i < all.size(); ++i) {
    if (v < val.size() && val[v] == i) {
      ++v;
    } else {
      keep.push_back(i);
    }
  }
  return {all.subset(keep), all.subset(val)};
}

std::vector<double> predict_all(const Network& net, const SampleSet& set, int batch_size) {
  std::vector<double> out;
  out.reserve(set.size());
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < set.size(); start += batch_size) {
    idx.clear();
    for (std::size_t i = start; i < std::min(set.size(), start + batch_size); ++i) idx.push_back(i);
    const Tensor4 y = net.predict(set.batch(idx));
    out.insert(out.end(), y.data.begin(), y.data.end());
  }
  return out;
}

TrainResult train(Network& net, const SampleSet& train_set, const SampleSet& val_set,
                  const TrainConfig& config) {
  if (train_set.size() == 0) throw ConfigError("training set is empty");
  if (val_set.size() == 0) throw ConfigError("validation set is empty");
  if (config.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (config.batch_size < 1) throw ConfigError("batch size must be >= 1");
  const Shape& in = net.spec().input;
  if (train_set.sample.with_batch(1) != in.with_batch(1) ||
      val_set.sample.with_batch(1) != in.with_batch(1)) {
    throw ShapeError("samples do not match the network input");
  }

  std::mt19937_64 shuffle_rng(config.seed);
  net.set_dropout_seed(config.seed ^ 0x9e3779b97f4a7c15ULL);
  net.freeze_dropout_masks(false);

  auto params = net.parameters();
  std::vector<std::vector<double>> state;
  for (const auto& p : params) state.emplace_back(p.value.size(), 0.0);

  TrainResult result;
  result.best_val_loss = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> targets;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double weighted = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      const std::span<const std::size_t> idx(order.data() + start, stop - start);
      targets.clear();
      for (std::size_t i : idx) targets.push_back(train_set.targets[i]);
      net.forward(train_set.batch(idx), Mode::kTrain);
      weighted += net.backward(targets) * static_cast<double>(idx.size());
      for (std::size_t p = 0; p < params.size(); ++p) {
        rmsprop_step(params[p].value, params[p].grad, state[p], config.optimizer);
      }
    }
    const auto pred = predict_all(net, val_set);
    const double val = mse_loss(pred, val_set.targets).value;
    result.history.push_back({epoch, weighted / static_cast<double>(order.size()), val});
    if (val < result.best_val_loss) {
      result.best_val_loss = val;
      result.best_epoch = epoch;
      result.best_parameters = net.parameter_arrays();
    }
  }
  net.clear_cache();
  net.set_parameter_arrays(result.best_parameters);
  return result;
}

}  // namespace hamlearn::nn
