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

#ifndef HAMLEARN_NN_TRAIN_HPP
#define HAMLEARN_NN_TRAIN_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "hamlearn/nn/network.hpp"

namespace hamlearn::nn {

/// Inputs stored back to back, one scalar target each.
struct SampleSet {
  Shape sample;  // per-sample shape; batch field ignored
  std::vector<double> inputs;
  std::vector<double> targets;

  std::size_t size() const { return targets.size(); }
  void add(std::span<const double> input, double target);
  Tensor4 batch(std::span<const std::size_t> indices) const;
  SampleSet subset(std::span<const std::size_t> indices) const;
};

/// Sorted indices of a seeded random `fraction` of n samples (at least one,
/// at most n - 1).
std::vector<std::size_t> choose_validation(std::size_t n, double fraction, std::uint64_t seed);

/// Moves a seeded random `fraction` of `all` (at least one sample, at most
/// all but one) into the second set; both keep their original order.
std::pair<SampleSet, SampleSet> split_validation(const SampleSet& all, double fraction,
                                                 std::uint64_t seed);

struct TrainConfig {
  int epochs = 300;
  int batch_size = 32;
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;  // shuffling and dropout masks
  RmspropConfig optimizer;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainResult {
  std::vector<std::vector<double>> best_parameters;
  int best_epoch = 0;
  double best_val_loss = 0.0;
  std::vector<EpochRecord> history;
};

/// RMSprop on mini-batches with a per-epoch seeded shuffle. `net` ends with
/// the parameters of the epoch with the lowest validation loss (earliest on
/// ties). The recorded training loss is the sample-weighted mean of the
/// mini-batch losses seen during the epoch.
TrainResult train(Network& net, const SampleSet& train_set, const SampleSet& val_set,
                  const TrainConfig& config);

/// Evaluation-mode predictions, computed in chunks of `batch_size`.
std::vector<double> predict_all(const Network& net, const SampleSet& set, int batch_size = 32);

}  // namespace hamlearn::nn

#endif  // HAMLEARN_NN_TRAIN_HPP
