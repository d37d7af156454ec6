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

#ifndef HAMLEARN_HARNESS_COMMANDS_HPP
#define HAMLEARN_HARNESS_COMMANDS_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hamlearn/data/dataset.hpp"
#include "hamlearn/harness/config.hpp"
#include "hamlearn/nn/network.hpp"
#include "hamlearn/nn/train.hpp"

namespace hamlearn::harness {

namespace fs = std::filesystem;

struct PredictionRow {
  std::string id;
  data::SplitTag split = data::SplitTag::kTest;
  double truth = 0.0;
  double prediction = 0.0;
};

struct EvalReport {
  std::vector<PredictionRow> rows;
  std::optional<double> eps_t;  // mean squared error over the test split
  std::optional<double> eps_g;  // over the generalizing split; absent if empty

  std::size_t count(data::SplitTag split) const;
};

/// Mean squared error over the rows of one split.
std::optional<double> split_mse(const std::vector<PredictionRow>& rows, data::SplitTag split);

/// Predictions for every sample of every split in `ds`.
EvalReport evaluate(const nn::Network& net, const data::Dataset& ds);

std::string format_predictions(const EvalReport& report, const std::string& comment);
std::string format_summary(const EvalReport& report, const std::string& comment);

/// predictions.csv and summary.csv under out_dir.
void write_report(const EvalReport& report, const fs::path& out_dir, const std::string& comment);

// Each command validates its inputs before writing anything.

data::GenerateSummary cmd_generate(const ExperimentConfig& cfg, const fs::path& dataset_dir);

struct TrainOutcome {
  nn::TrainResult result;
  fs::path checkpoint;
  fs::path history;
};

/// Trains `preset` (the config's preset when empty) on the dataset with the
/// seeds of repeat `repeat`; writes checkpoint.qnet and history.csv.
TrainOutcome cmd_train(const ExperimentConfig& cfg, const fs::path& dataset_dir,
                       const fs::path& out_dir, int repeat = 0, const std::string& preset = {});

/// Loads a checkpoint and a dataset, writes predictions.csv and summary.csv.
EvalReport cmd_eval(const fs::path& checkpoint, const fs::path& dataset_dir,
                    const fs::path& out_dir, const std::string& config_hash);

/// Predictions for QIMG files or whole dataset directories; writes
/// out_csv with columns source,prediction.
std::vector<double> cmd_predict(const fs::path& checkpoint, const std::vector<fs::path>& inputs,
                                const fs::path& out_csv, const std::string& config_hash);

/// One PNG per manifest row of a dataset, or one PNG for a state file.
/// Returns the number of images written.
std::size_t cmd_render(const fs::path& input, const fs::path& out_dir);

struct SweepRow {
  double delta = 0.0;
  int length = 0;
  int block = 0;
  std::vector<double> eps_t;  // one per repeat
  std::vector<double> eps_g;  // empty when there is no generalizing split
};

struct Stats {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single value
};
Stats summarize(const std::vector<double>& values);

/// One generate/train/eval cycle per (delta, repeat); writes sweep-delta.csv
/// and per-run artifacts under out_dir.
std::vector<SweepRow> cmd_sweep_delta(const ExperimentConfig& cfg, const std::vector<double>& deltas,
                                      int repeats, const fs::path& out_dir);

/// Sweeps chain length (block fixed) or block size (length fixed); exactly
/// one list must be non-empty. Writes sweep-size.csv.
std::vector<SweepRow> cmd_sweep_size(const ExperimentConfig& cfg, const std::vector<int>& lengths,
                                     const std::vector<int>& blocks, int repeats,
                                     const fs::path& out_dir);

struct BaselineRow {
  std::uint64_t seed = 0;
  EvalReport qubism;
  EvalReport flat;
};

/// Trains the config's image preset and paper-1d-flat on the same dataset
/// and seeds; writes baseline-flat.csv with ratio columns.
std::vector<BaselineRow> cmd_baseline_flat(const ExperimentConfig& cfg, int repeats,
                                           const fs::path& out_dir);

}  // namespace hamlearn::harness

#endif  // HAMLEARN_HARNESS_COMMANDS_HPP
