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

#ifndef HAMLEARN_HARNESS_CONFIG_HPP
#define HAMLEARN_HARNESS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hamlearn/data/dataset.hpp"
#include "hamlearn/nn/network.hpp"
#include "hamlearn/nn/train.hpp"
#include "hamlearn/util/toml.hpp"

namespace hamlearn::harness {

struct SweepSettings {
  std::vector<double> deltas;
  std::vector<int> lengths;
  std::vector<int> blocks;
  int repeats = 10;
};

/// Everything one experiment needs. `seed` drives the network
/// initialization, shuffling, dropout, the validation carve and random-mode
/// splits; repeat r of a sweep uses seed + r.
struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 0;
  std::filesystem::path out = "out";
  data::PipelineOpts pipeline;
  data::SplitSpec split;
  std::string preset = "small-2d";
  nn::PresetOptions network;
  nn::TrainConfig train;
  SweepSettings sweep;

  static ExperimentConfig from_toml(const util::TomlDocument& doc);
  static ExperimentConfig load(const std::filesystem::path& path);

  /// Canonical form; every field is written, so the hash pins the run.
  util::TomlDocument to_toml() const;
  std::string hash() const;

  /// Field ranges plus cross-field checks: the preset must accept the image
  /// size and the flat preset needs the RDM path.
  void validate() const;

  /// Network input extent: the image side, or its square for flat presets.
  int input_extent(const std::string& preset_name) const;
  nn::NetworkSpec network_spec(const std::string& preset_name) const;

  /// Train config for repeat r.
  nn::TrainConfig train_for(int repeat) const;
};

/// "# hamlearn <version> config_hash=<hash>".
std::string csv_comment(const std::string& config_hash);

}  // namespace hamlearn::harness

#endif  // HAMLEARN_HARNESS_CONFIG_HPP
