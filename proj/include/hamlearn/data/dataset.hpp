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

#ifndef HAMLEARN_DATA_DATASET_HPP
#define HAMLEARN_DATA_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hamlearn/data/splits.hpp"
#include "hamlearn/lanczos.hpp"
#include "hamlearn/lattice.hpp"
#include "hamlearn/mps.hpp"
#include "hamlearn/nn/train.hpp"
#include "hamlearn/rdm.hpp"
#include "hamlearn/util/toml.hpp"

namespace hamlearn::data {

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr int kMaxEdSites = 20;

enum class SolverKind { kEd, kDmrg };
std::string_view solver_name(SolverKind kind);
SolverKind parse_solver(std::string_view name);

/// How one parameter value becomes an image.
struct PipelineOpts {
  Family family = Family::kQim;
  LatticeKind lattice = LatticeKind::kChain;
  int length = 16;  // chain sites
  int rows = 0;     // grid only
  int cols = 0;
  Boundary boundary = Boundary::kPeriodic;
  double coupling = 1.0;
  int block = 6;  // kept sites; grids keep the two central columns
  bool use_rdm = true;
  SolverKind solver = SolverKind::kEd;
  LanczosOptions lanczos;
  DmrgOptions dmrg;
  PurifyOrdering ordering = PurifyOrdering::kInterleaved;
  bool write_png = false;
  bool store_states = false;
  int threads = 1;

  void validate() const;
  Lattice make_lattice() const;
  int site_count() const;
  /// ED when requested and small enough, DMRG otherwise.
  SolverKind effective_solver() const;
  SubsystemSpec subsystem() const;
  int image_side() const;
};

/// One parameter value pushed through the pipeline.
struct PipelineSample {
  double value = 0.0;
  double energy = 0.0;
  int side = 0;
  std::vector<double> pixels;             // min-max normalized, row-major
  std::optional<DenseState> ground;       // when the full state is available
  std::optional<DenseState> imaged_state;  // gauge-fixed state or purification
};

/// Solves, reduces and images one value. Throws SolverError on failure.
PipelineSample run_pipeline(const PipelineOpts& opts, double value);

enum class SplitTag { kTrain, kVal, kTest, kGen };
std::string_view split_name(SplitTag tag);
SplitTag parse_split(std::string_view name);

struct ManifestRow {
  std::string id;
  std::string family;
  std::string param_name;
  double value = 0.0;
  SplitTag split = SplitTag::kTrain;
  std::string image_path;  // relative to the manifest directory
  std::string state_path;  // empty unless states were stored
  std::string checksum;    // SHA-256 of the image file
};

struct Manifest {
  std::string comment;  // without the leading "# "
  std::vector<ManifestRow> rows;
};

std::string format_manifest(const Manifest& manifest);
Manifest parse_manifest(std::string_view text);
Manifest read_manifest(const std::filesystem::path& path);

struct GenerateSummary {
  std::size_t written = 0;
  std::vector<std::string> failed;  // ids of skipped samples
  int stage_count = 0;              // direct path only
  std::filesystem::path manifest_path;
};

/// Canonical description of a generation request; its hash goes into the
/// manifest comment when no other hash is supplied.
util::TomlDocument describe_generation(const PipelineOpts& opts, const SplitSpec& split);

/// Writes manifest.csv, dataset.toml, images/ (and png/, states/ on
/// request) under out_dir. Direct-path runs also write stages.csv, grouping
/// neighbouring values whose ground states coincide. Output bytes do not
/// depend on the thread count.
GenerateSummary generate_dataset(const PipelineOpts& opts, const SplitSpec& split,
                                 const std::filesystem::path& out_dir,
                                 std::string config_hash = {});

enum class InputForm {
  kImage,  // 1 x side x side
  kFlat,   // 1 x 1 x side^2: the density matrix reshaped row by row (RDM
           // path) or the state in configuration order (direct path)
};

struct SplitData {
  std::vector<std::string> ids;
  std::vector<double> values;
  nn::SampleSet samples;
};

struct LoadOptions {
  InputForm form = InputForm::kImage;
  double validation_fraction = 0.1;
  std::uint64_t seed = 0;
};

struct Dataset {
  std::filesystem::path root;
  Manifest manifest;
  util::TomlDocument sidecar;
  int image_side = 0;
  SplitData train;
  SplitData val;
  SplitData test;
  SplitData gen;
};

/// Accepts the dataset directory or its manifest.csv. Verifies checksums
/// and the schema version; carves validation from training.
Dataset load_dataset(const std::filesystem::path& location, const LoadOptions& opts = {});

/// Reorders a row-major Qubism image into configuration order.
std::vector<double> image_to_configuration_order(std::span<const double> pixels, int side);

/// Flat network input for a stored image. On the RDM path this is
/// rho_{i i'} at index i * 2^block + i', whatever the purification ordering.
std::vector<double> flat_input(std::span<const double> pixels, int side, bool use_rdm,
                               PurifyOrdering ordering);

}  // namespace hamlearn::data

#endif  // HAMLEARN_DATA_DATASET_HPP
