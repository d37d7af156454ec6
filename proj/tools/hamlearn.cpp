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

// Command-line frontend. Exit codes: 0 success, 2 configuration error,
// 3 solver failure, 4 I/O error.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hamlearn/error.hpp"
#include "hamlearn/harness/commands.hpp"
#include "hamlearn/harness/config.hpp"
#include "hamlearn/version.hpp"

namespace fs = std::filesystem;
using namespace hamlearn;
using namespace hamlearn::harness;

namespace {

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool deterministic = false;
  std::optional<int> threads;
};

ExperimentConfig resolve(const GlobalFlags& g, const std::string& command) {
  if (g.config.empty()) throw ConfigError("--config is required for " + command);
  ExperimentConfig cfg = ExperimentConfig::load(g.config);
  if (g.seed) {
    cfg.seed = *g.seed;
    cfg.split.seed = *g.seed;
  }
  if (!g.out.empty()) cfg.out = g.out;
  if (g.threads) cfg.pipeline.threads = *g.threads;
  if (g.deterministic) cfg.pipeline.threads = 1;
  cfg.validate();
  return cfg;
}

fs::path out_root(const GlobalFlags& g) { return g.out.empty() ? fs::path("out") : fs::path(g.out); }

std::string show(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground-state imaging and CNN regression of Hamiltonian parameters", "hamlearn"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--config", g.config, "Experiment file (TOML)");
  app.add_option("--seed", g.seed, "Override the global seed");
  app.add_option("--out", g.out, "Output directory (overrides the config)");
  app.add_flag("--deterministic", g.deterministic, "Force single-threaded execution");
  app.add_option("--threads", g.threads, "Worker threads for dataset generation")
      ->check(CLI::PositiveNumber);

  std::string dataset, checkpoint, preset, output;
  std::vector<std::string> inputs;
  std::vector<double> deltas;
  std::vector<int> lengths, blocks;
  std::optional<int> repeats;

  auto* generate = app.add_subcommand("generate", "Solve, image and store a labeled dataset");
  generate->add_option("--dataset", dataset, "Dataset directory (default <out>/dataset)");

  auto* train = app.add_subcommand("train", "Train a network on a dataset");
  train->add_option("--dataset", dataset, "Dataset directory (default <out>/dataset)");
  train->add_option("--preset", preset, "Network preset (default from the config)");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
  eval->add_option("--checkpoint", checkpoint, "Default <out>/train/checkpoint.qnet");
  eval->add_option("--dataset", dataset, "Default <out>/dataset");

  auto* predict = app.add_subcommand("predict", "Predict parameters for images or datasets");
  predict->add_option("--checkpoint", checkpoint, "Default <out>/train/checkpoint.qnet");
  predict->add_option("--output", output, "CSV path (default <out>/predictions.csv)");
  predict->add_option("inputs", inputs, "QIMG files or dataset directories")->required();

  auto* render = app.add_subcommand("render", "Write PNGs for a state file or a dataset");
  render->add_option("input", inputs, "QSTA/QIMG file or dataset directory")->required();

  auto* sweep_delta = app.add_subcommand("sweep-delta", "Generalization error against delta");
  sweep_delta->add_option("--deltas", deltas, "Delta values (default from the config)")
      ->delimiter(',');
  sweep_delta->add_option("--repeats", repeats, "Seeds per point (default from the config)");

  auto* sweep_size = app.add_subcommand("sweep-size", "Errors against chain or block size");
  sweep_size->add_option("--lengths", lengths, "Chain lengths")->delimiter(',');
  sweep_size->add_option("--blocks", blocks, "Block sizes")->delimiter(',');
  sweep_size->add_option("--repeats", repeats, "Seeds per point (default from the config)");

  auto* baseline = app.add_subcommand("baseline-flat", "Qubism images against flat vectors");
  baseline->add_option("--repeats", repeats, "Seeds (default from the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*generate) {
      const ExperimentConfig cfg = resolve(g, "generate");
      const fs::path dir = dataset.empty() ? cfg.out / "dataset" : fs::path(dataset);
      const auto s = cmd_generate(cfg, dir);
      std::cout << "wrote " << s.written << " samples to " << dir.string();
      if (!s.failed.empty()) std::cout << " (" << s.failed.size() << " skipped)";
      std::cout << "\n";
    } else if (*train) {
      const ExperimentConfig cfg = resolve(g, "train");
      const fs::path dir = dataset.empty() ? cfg.out / "dataset" : fs::path(dataset);
      const auto t = cmd_train(cfg, dir, cfg.out / "train", 0, preset);
      std::printf("best epoch %d, validation loss %.6g; checkpoint %s\n", t.result.best_epoch,
                  t.result.best_val_loss, t.checkpoint.string().c_str());
    } else if (*eval) {
      std::string hash = "none";
      fs::path root = out_root(g);
      if (!g.config.empty()) {
        const ExperimentConfig cfg = resolve(g, "eval");
        hash = cfg.hash();
        root = cfg.out;
      }
      const fs::path ckpt = checkpoint.empty() ? root / "train" / "checkpoint.qnet" : fs::path(checkpoint);
      const fs::path dir = dataset.empty() ? root / "dataset" : fs::path(dataset);
      const EvalReport r = cmd_eval(ckpt, dir, root / "eval", hash);
      std::cout << "eps_t " << show(r.eps_t) << "  eps_g " << show(r.eps_g) << "\n";
    } else if (*predict) {
      std::string hash = "none";
      fs::path root = out_root(g);
      if (!g.config.empty()) {
        const ExperimentConfig cfg = resolve(g, "predict");
        hash = cfg.hash();
        root = cfg.out;
      }
      const fs::path ckpt = checkpoint.empty() ? root / "train" / "checkpoint.qnet" : fs::path(checkpoint);
      const fs::path csv = output.empty() ? root / "predictions.csv" : fs::path(output);
      std::vector<fs::path> paths(inputs.begin(), inputs.end());
      const auto pred = cmd_predict(ckpt, paths, csv, hash);
      std::cout << "wrote " << pred.size() << " predictions to " << csv.string() << "\n";
    } else if (*render) {
      const fs::path root = g.config.empty() ? out_root(g) : resolve(g, "render").out;
      std::size_t n = 0;
      for (const auto& in : inputs) n += cmd_render(in, root / "render");
      std::cout << "wrote " << n << " PNG files to " << (root / "render").string() << "\n";
    } else if (*sweep_delta) {
      const ExperimentConfig cfg = resolve(g, "sweep-delta");
      const auto& ds = deltas.empty() ? cfg.sweep.deltas : deltas;
      cmd_sweep_delta(cfg, ds, repeats.value_or(cfg.sweep.repeats), cfg.out / "sweep-delta");
      std::cout << "wrote " << (cfg.out / "sweep-delta" / "sweep-delta.csv").string() << "\n";
    } else if (*sweep_size) {
      const ExperimentConfig cfg = resolve(g, "sweep-size");
      const auto& ls = lengths.empty() && blocks.empty() ? cfg.sweep.lengths : lengths;
      const auto& bs = lengths.empty() && blocks.empty() ? cfg.sweep.blocks : blocks;
      cmd_sweep_size(cfg, ls, bs, repeats.value_or(cfg.sweep.repeats), cfg.out / "sweep-size");
      std::cout << "wrote " << (cfg.out / "sweep-size" / "sweep-size.csv").string() << "\n";
    } else if (*baseline) {
      const ExperimentConfig cfg = resolve(g, "baseline-flat");
      cmd_baseline_flat(cfg, repeats.value_or(cfg.sweep.repeats), cfg.out / "baseline-flat");
      std::cout << "wrote " << (cfg.out / "baseline-flat" / "baseline-flat.csv").string() << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const ShapeError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
