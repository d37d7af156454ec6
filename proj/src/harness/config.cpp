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

#include "hamlearn/harness/config.hpp"

#include <set>

#include "hamlearn/error.hpp"
#include "hamlearn/util/binary_io.hpp"
#include "hamlearn/version.hpp"

namespace hamlearn::harness {

namespace {

using util::TomlValue;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "name", "seed", "out",
      "model.family", "model.lattice", "model.length", "model.rows", "model.cols",
      "model.boundary", "model.coupling",
      "pipeline.use_rdm", "pipeline.block", "pipeline.ordering", "pipeline.png",
      "pipeline.store_states", "pipeline.threads",
      "solver.kind", "solver.lanczos_max_iterations", "solver.lanczos_krylov_dim",
      "solver.lanczos_tolerance", "solver.lanczos_seed", "solver.chi_max", "solver.max_sweeps",
      "solver.dmrg_tolerance", "solver.svd_cutoff", "solver.dmrg_seed",
      "split.n_train", "split.n_test", "split.delta", "split.n_gen", "split.dh", "split.mode",
      "network.preset", "network.dropout", "network.dropout_placement",
      "train.epochs", "train.batch_size", "train.validation_fraction", "train.learning_rate",
      "train.decay", "train.epsilon",
      "sweep.deltas", "sweep.lengths", "sweep.blocks", "sweep.repeats"};
  return keys;
}

int as_int(std::int64_t v, const char* key) {
  if (v < -(1LL << 31) || v > (1LL << 31) - 1) throw ConfigError(std::string(key) + " is out of range");
  return static_cast<int>(v);
}

std::uint64_t as_seed(std::int64_t v, const char* key) {
  if (v < 0) throw ConfigError(std::string(key) + " must be non-negative");
  return static_cast<std::uint64_t>(v);
}

TomlValue ints(const std::vector<int>& v) {
  util::TomlArray a;
  for (int x : v) a.push_back({std::int64_t{x}});
  return {a};
}

TomlValue doubles(const std::vector<double>& v) {
  util::TomlArray a;
  for (double x : v) a.push_back({x});
  return {a};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_toml(const util::TomlDocument& doc) {
  for (const auto& [key, value] : doc.values()) {
    if (!known_keys().count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  if (auto v = doc.get_string("name")) c.name = *v;
  if (auto v = doc.get_int("seed")) c.seed = as_seed(*v, "seed");
  if (auto v = doc.get_string("out")) c.out = *v;

  auto& p = c.pipeline;
  if (auto v = doc.get_string("model.family")) p.family = parse_family(*v);
  if (auto v = doc.get_string("model.lattice")) {
    if (*v == "chain") {
      p.lattice = LatticeKind::kChain;
    } else if (*v == "grid") {
      p.lattice = LatticeKind::kGrid;
    } else {
      throw ConfigError("model.lattice must be chain or grid");
    }
  }
  if (auto v = doc.get_int("model.length")) p.length = as_int(*v, "model.length");
  if (auto v = doc.get_int("model.rows")) p.rows = as_int(*v, "model.rows");
  if (auto v = doc.get_int("model.cols")) p.cols = as_int(*v, "model.cols");
  if (auto v = doc.get_string("model.boundary")) {
    if (*v == "periodic") {
      p.boundary = Boundary::kPeriodic;
    } else if (*v == "open") {
      p.boundary = Boundary::kOpen;
    } else {
      throw ConfigError("model.boundary must be periodic or open");
    }
  }
  if (auto v = doc.get_double("model.coupling")) p.coupling = *v;

  if (auto v = doc.get_bool("pipeline.use_rdm")) p.use_rdm = *v;
  if (auto v = doc.get_int("pipeline.block")) {
    p.block = as_int(*v, "pipeline.block");
  } else if (p.lattice == LatticeKind::kGrid) {
    p.block = 2 * p.rows;
  }
  if (auto v = doc.get_string("pipeline.ordering")) p.ordering = parse_ordering(*v);
  if (auto v = doc.get_bool("pipeline.png")) p.write_png = *v;
  if (auto v = doc.get_bool("pipeline.store_states")) p.store_states = *v;
  if (auto v = doc.get_int("pipeline.threads")) p.threads = as_int(*v, "pipeline.threads");

  if (auto v = doc.get_string("solver.kind")) p.solver = data::parse_solver(*v);
  if (auto v = doc.get_int("solver.lanczos_max_iterations")) {
    p.lanczos.max_iterations = as_int(*v, "solver.lanczos_max_iterations");
  }
  if (auto v = doc.get_int("solver.lanczos_krylov_dim")) {
    p.lanczos.krylov_dim = as_int(*v, "solver.lanczos_krylov_dim");
  }
  if (auto v = doc.get_double("solver.lanczos_tolerance")) p.lanczos.tolerance = *v;
  if (auto v = doc.get_int("solver.lanczos_seed")) p.lanczos.seed = as_seed(*v, "solver.lanczos_seed");
  if (auto v = doc.get_int("solver.chi_max")) p.dmrg.chi_max = as_int(*v, "solver.chi_max");
  if (auto v = doc.get_int("solver.max_sweeps")) p.dmrg.max_sweeps = as_int(*v, "solver.max_sweeps");
  if (auto v = doc.get_double("solver.dmrg_tolerance")) p.dmrg.energy_tolerance = *v;
  if (auto v = doc.get_double("solver.svd_cutoff")) p.dmrg.svd_cutoff = *v;
  if (auto v = doc.get_int("solver.dmrg_seed")) p.dmrg.seed = as_seed(*v, "solver.dmrg_seed");

  auto& s = c.split;
  if (auto v = doc.get_int("split.n_train")) s.n_train = as_int(*v, "split.n_train");
  if (auto v = doc.get_int("split.n_test")) s.n_test = as_int(*v, "split.n_test");
  if (auto v = doc.get_double("split.delta")) s.delta = *v;
  if (auto v = doc.get_int("split.n_gen")) s.n_gen = as_int(*v, "split.n_gen");
  if (auto v = doc.get_double("split.dh")) s.dh = *v;
  if (auto v = doc.get_string("split.mode")) {
    if (*v == "grid") {
      s.random = false;
    } else if (*v == "random") {
      s.random = true;
    } else {
      throw ConfigError("split.mode must be grid or random");
    }
  }

  s.seed = c.seed;

  if (auto v = doc.get_string("network.preset")) c.preset = *v;
  if (auto v = doc.get_double("network.dropout")) c.network.dropout = *v;
  if (auto v = doc.get_string("network.dropout_placement")) {
    c.network.placement = nn::parse_placement(*v);
  }

  auto& t = c.train;
  if (auto v = doc.get_int("train.epochs")) t.epochs = as_int(*v, "train.epochs");
  if (auto v = doc.get_int("train.batch_size")) t.batch_size = as_int(*v, "train.batch_size");
  if (auto v = doc.get_double("train.validation_fraction")) t.validation_fraction = *v;
  if (auto v = doc.get_double("train.learning_rate")) t.optimizer.learning_rate = *v;
  if (auto v = doc.get_double("train.decay")) t.optimizer.decay = *v;
  if (auto v = doc.get_double("train.epsilon")) t.optimizer.epsilon = *v;

  if (auto v = doc.get_doubles("sweep.deltas")) c.sweep.deltas = *v;
  if (auto v = doc.get_ints("sweep.lengths")) {
    for (auto x : *v) c.sweep.lengths.push_back(as_int(x, "sweep.lengths"));
  }
  if (auto v = doc.get_ints("sweep.blocks")) {
    for (auto x : *v) c.sweep.blocks.push_back(as_int(x, "sweep.blocks"));
  }
  if (auto v = doc.get_int("sweep.repeats")) c.sweep.repeats = as_int(*v, "sweep.repeats");
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("config file not found: " + path.string());
  try {
    return from_toml(util::TomlDocument::parse(util::read_text(path)));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

util::TomlDocument ExperimentConfig::to_toml() const {
  util::TomlDocument d = data::describe_generation(pipeline, split);
  // Derived entries are not inputs.
  for (const char* k : {"model.param_name", "pipeline.image_side", "solver.effective", "split.dh",
                        "split.seed"}) {
    d.erase(k);
  }
  if (split.dh) d.set("split.dh", {*split.dh});
  d.set("name", {name});
  d.set("seed", {static_cast<std::int64_t>(seed)});
  d.set("out", {out.string()});
  d.set("pipeline.threads", {std::int64_t{pipeline.threads}});
  if (!pipeline.use_rdm) d.set("pipeline.block", {std::int64_t{pipeline.block}});
  d.set("pipeline.ordering", {std::string(ordering_name(pipeline.ordering))});
  d.set("network.preset", {preset});
  d.set("network.dropout", {network.dropout});
  d.set("network.dropout_placement", {std::string(nn::placement_name(network.placement))});
  d.set("train.epochs", {std::int64_t{train.epochs}});
  d.set("train.batch_size", {std::int64_t{train.batch_size}});
  d.set("train.validation_fraction", {train.validation_fraction});
  d.set("train.learning_rate", {train.optimizer.learning_rate});
  d.set("train.decay", {train.optimizer.decay});
  d.set("train.epsilon", {train.optimizer.epsilon});
  d.set("sweep.deltas", doubles(sweep.deltas));
  d.set("sweep.lengths", ints(sweep.lengths));
  d.set("sweep.blocks", ints(sweep.blocks));
  d.set("sweep.repeats", {std::int64_t{sweep.repeats}});
  return d;
}

std::string ExperimentConfig::hash() const {
  // Output location and thread count do not change results.
  util::TomlDocument d = to_toml();
  d.set("out", {std::string()});
  d.set("pipeline.threads", {std::int64_t{1}});
  return util::sha256_hex(d.dump());
}

int ExperimentConfig::input_extent(const std::string& preset_name) const {
  const int side = pipeline.image_side();
  return nn::preset_is_flat(preset_name) ? side * side : side;
}

nn::NetworkSpec ExperimentConfig::network_spec(const std::string& preset_name) const {
  return nn::preset_spec(preset_name, input_extent(preset_name), network);
}

nn::TrainConfig ExperimentConfig::train_for(int repeat) const {
  nn::TrainConfig t = train;
  t.seed = seed + static_cast<std::uint64_t>(repeat);
  return t;
}

void ExperimentConfig::validate() const {
  pipeline.validate();
  split.validate();
  if (!nn::is_known_preset(preset)) throw ConfigError("unknown network preset '" + preset + "'");
  if (nn::preset_is_flat(preset) && !pipeline.use_rdm) {
    throw ConfigError("preset paper-1d-flat needs the RDM path (pipeline.use_rdm = true)");
  }
  if (!(network.dropout >= 0.0 && network.dropout < 1.0)) {
    throw ConfigError("network.dropout must be in [0, 1)");
  }
  if (train.epochs < 1) throw ConfigError("train.epochs must be >= 1");
  if (train.batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  if (!(train.validation_fraction > 0.0 && train.validation_fraction < 1.0)) {
    throw ConfigError("train.validation_fraction must be in (0, 1)");
  }
  if (!(train.optimizer.learning_rate > 0.0) || !(train.optimizer.decay >= 0.0 && train.optimizer.decay < 1.0) ||
      !(train.optimizer.epsilon > 0.0)) {
    throw ConfigError("invalid optimizer settings");
  }
  if (sweep.repeats < 1) throw ConfigError("sweep.repeats must be >= 1");
  for (double d : sweep.deltas) {
    if (!(d >= 0.0 && d < 1.0)) throw ConfigError("sweep.deltas entries must be in [0, 1)");
  }
  // The preset must fit the image (pools need room) before anything is solved.
  try {
    network_spec(preset);
  } catch (const ShapeError& e) {
    throw ConfigError("network preset '" + preset + "' does not fit the " +
                      std::to_string(pipeline.image_side()) + "-pixel image: " + e.what());
  }
}

std::string csv_comment(const std::string& config_hash) {
  return std::string("# ") + kToolName + " " + kVersion + " config_hash=" + config_hash;
}

}  // namespace hamlearn::harness
