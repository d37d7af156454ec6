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

#include "hamlearn/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "hamlearn/error.hpp"
#include "hamlearn/qubism.hpp"
#include "hamlearn/util/binary_io.hpp"
#include "hamlearn/version.hpp"

namespace hamlearn::data {

namespace fs = std::filesystem;

namespace {

constexpr const char* kManifestHeader =
    "id,family,param_name,param_value,split,image_path,state_path,checksum_sha256";
constexpr double kStageOverlap = 1.0 - 1e-8;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw IoError("manifest: bad " + what + " '" + s + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string_view solver_name(SolverKind kind) {
  return kind == SolverKind::kEd ? "ed" : "dmrg";
}

SolverKind parse_solver(std::string_view name) {
  if (name == "ed") return SolverKind::kEd;
  if (name == "dmrg") return SolverKind::kDmrg;
  throw ConfigError("unknown solver '" + std::string(name) + "' (expected ed or dmrg)");
}

std::string_view split_name(SplitTag tag) {
  switch (tag) {
    case SplitTag::kTrain: return "train";
    case SplitTag::kVal: return "val";
    case SplitTag::kTest: return "test";
    case SplitTag::kGen: return "gen";
  }
  return "train";
}

SplitTag parse_split(std::string_view name) {
  if (name == "train") return SplitTag::kTrain;
  if (name == "val") return SplitTag::kVal;
  if (name == "test") return SplitTag::kTest;
  if (name == "gen") return SplitTag::kGen;
  throw IoError("unknown split tag '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Pipeline

void PipelineOpts::validate() const {
  if (lattice == LatticeKind::kChain) {
    if (length < 2 || length > 64) throw ConfigError("chain length must be in [2, 64]");
  } else {
    if (rows < 1 || cols < 2) throw ConfigError("grid needs rows >= 1 and cols >= 2");
    if (rows * cols > 64) throw ConfigError("grid has more than 64 sites");
  }
  if (!std::isfinite(coupling)) throw ConfigError("coupling must be finite");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  const int n = site_count();
  if (use_rdm) {
    if (block < 1 || block > 10) throw ConfigError("block size must be in [1, 10]");
    if (lattice == LatticeKind::kChain && 2 * block > length) {
      throw ConfigError("block size " + std::to_string(block) + " exceeds half the chain length " +
                        std::to_string(length));
    }
    if (lattice == LatticeKind::kGrid && block != 2 * rows) {
      throw ConfigError("grid subsystem is the two central columns: block must equal 2 * rows = " +
                        std::to_string(2 * rows));
    }
  } else if (n > kMaxEdSites || n % 2 != 0) {
    throw ConfigError("the direct path needs an even number of sites <= 20");
  }
  if (store_states && n > kMaxEdSites) {
    throw ConfigError("raw states can only be stored for <= 20 sites");
  }
  if (lanczos.krylov_dim < 2 || lanczos.max_iterations < 1 || !(lanczos.tolerance > 0.0)) {
    throw ConfigError("invalid Lanczos options");
  }
  if (dmrg.chi_max < 2 || dmrg.max_sweeps < 1 || !(dmrg.energy_tolerance > 0.0) ||
      dmrg.svd_cutoff < 0.0) {
    throw ConfigError("invalid DMRG options");
  }
}

Lattice PipelineOpts::make_lattice() const {
  return lattice == LatticeKind::kChain ? Lattice::chain(length, boundary)
                                        : Lattice::grid(rows, cols, boundary);
}

int PipelineOpts::site_count() const {
  return lattice == LatticeKind::kChain ? length : rows * cols;
}

SolverKind PipelineOpts::effective_solver() const {
  return solver == SolverKind::kEd && site_count() <= kMaxEdSites ? SolverKind::kEd
                                                                   : SolverKind::kDmrg;
}

SubsystemSpec PipelineOpts::subsystem() const {
  return lattice == LatticeKind::kChain ? middle_block(length, block) : grid_middle_block(rows, cols);
}

int PipelineOpts::image_side() const {
  return use_rdm ? 1 << block : 1 << (site_count() / 2);
}

PipelineSample run_pipeline(const PipelineOpts& opts, double value) {
  const TermList terms = build_terms({opts.family, opts.make_lattice(), value, opts.coupling});
  const int n = opts.site_count();
  PipelineSample out;
  out.value = value;
  DenseState imaged;
  if (opts.effective_solver() == SolverKind::kEd) {
    GroundState gs = ed_ground(terms, opts.lanczos);
    out.energy = gs.energy;
    imaged = opts.use_rdm ? purify(rdm_dense(gs.state, opts.subsystem()), opts.ordering)
                          : gauge_fix(gs.state);
    out.ground = std::move(gs.state);
  } else {
    DmrgResult r = dmrg_ground(build_mpo(terms, n), opts.dmrg);
    if (!r.converged) {
      throw SolverError("DMRG did not converge in " + std::to_string(r.sweeps) + " sweeps");
    }
    out.energy = r.energy;
    if (n <= kMaxEdSites && (opts.store_states || !opts.use_rdm)) out.ground = mps_to_dense(r.state);
    imaged = opts.use_rdm ? purify(rdm_mps(r.state, opts.subsystem()), opts.ordering)
                          : gauge_fix(*out.ground);
  }
  QubismImage img = normalize_image(qubism_map(imaged));
  out.side = img.side;
  out.pixels = std::move(*img.normalized);
  out.imaged_state = std::move(imaged);
  return out;
}

std::vector<double> image_to_configuration_order(std::span<const double> pixels, int side) {
  if (side < 1 || (side & (side - 1)) != 0 || pixels.size() != std::size_t(side) * side) {
    throw ShapeError("image is not a power-of-two square");
  }
  int n = 0;
  while ((1 << (n / 2)) < side) n += 2;
  std::vector<double> out(pixels.size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    const Pixel p = qubism_index(c, n);
    out[c] = pixels[static_cast<std::size_t>(p.x - 1) * side + (p.y - 1)];
  }
  return out;
}

std::vector<double> flat_input(std::span<const double> pixels, int side, bool use_rdm,
                               PurifyOrdering ordering) {
  // Interleaved purifications image to rho itself; concatenated ones and raw
  // states are already in the wanted order once read back by configuration.
  if (use_rdm && ordering == PurifyOrdering::kInterleaved) {
    if (pixels.size() != std::size_t(side) * side) throw ShapeError("image is not square");
    return {pixels.begin(), pixels.end()};
  }
  return image_to_configuration_order(pixels, side);
}

// ---------------------------------------------------------------------------
// Manifest

std::string format_manifest(const Manifest& manifest) {
  std::string out;
  if (!manifest.comment.empty()) out += "# " + manifest.comment + "\n";
  out += kManifestHeader;
  out += "\n";
  for (const auto& r : manifest.rows) {
    out += r.id + "," + r.family + "," + r.param_name + "," + format_double(r.value) + "," +
           std::string(split_name(r.split)) + "," + r.image_path + "," + r.state_path + "," +
           r.checksum + "\n";
  }
  return out;
}

Manifest parse_manifest(std::string_view text) {
  Manifest m;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!header && m.comment.empty()) m.comment = line.substr(line.rfind("# ", 0) == 0 ? 2 : 1);
      continue;
    }
    if (!header) {
      if (line != kManifestHeader) throw IoError("manifest: unexpected header '" + line + "'");
      header = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 8) {
      throw IoError("manifest line " + std::to_string(line_no) + ": expected 8 fields");
    }
    ManifestRow r;
    r.id = f[0];
    r.family = f[1];
    r.param_name = f[2];
    r.value = parse_double(f[3], "param_value");
    r.split = parse_split(f[4]);
    r.image_path = f[5];
    r.state_path = f[6];
    r.checksum = f[7];
    m.rows.push_back(std::move(r));
  }
  if (!header) throw IoError("manifest: missing header");
  return m;
}

Manifest read_manifest(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("manifest not found: " + path.string());
  return parse_manifest(util::read_text(path));
}

// ---------------------------------------------------------------------------
// Generation

util::TomlDocument describe_generation(const PipelineOpts& opts, const SplitSpec& split) {
  using util::TomlValue;
  util::TomlDocument d;
  auto i64 = [](auto v) { return TomlValue{static_cast<std::int64_t>(v)}; };
  d.set("model.family", {std::string(family_name(opts.family))});
  d.set("model.param_name", {std::string(param_name(opts.family))});
  d.set("model.lattice", {std::string(opts.lattice == LatticeKind::kChain ? "chain" : "grid")});
  if (opts.lattice == LatticeKind::kChain) {
    d.set("model.length", i64(opts.length));
  } else {
    d.set("model.rows", i64(opts.rows));
    d.set("model.cols", i64(opts.cols));
  }
  d.set("model.boundary", {std::string(opts.boundary == Boundary::kPeriodic ? "periodic" : "open")});
  d.set("model.coupling", {opts.coupling});
  d.set("pipeline.use_rdm", {opts.use_rdm});
  if (opts.use_rdm) {
    d.set("pipeline.block", i64(opts.block));
    d.set("pipeline.ordering", {std::string(ordering_name(opts.ordering))});
  }
  d.set("pipeline.image_side", i64(opts.image_side()));
  d.set("pipeline.png", {opts.write_png});
  d.set("pipeline.store_states", {opts.store_states});
  d.set("solver.kind", {std::string(solver_name(opts.solver))});
  d.set("solver.effective", {std::string(solver_name(opts.effective_solver()))});
  d.set("solver.lanczos_max_iterations", i64(opts.lanczos.max_iterations));
  d.set("solver.lanczos_krylov_dim", i64(opts.lanczos.krylov_dim));
  d.set("solver.lanczos_tolerance", {opts.lanczos.tolerance});
  d.set("solver.lanczos_seed", i64(opts.lanczos.seed));
  d.set("solver.chi_max", i64(opts.dmrg.chi_max));
  d.set("solver.max_sweeps", i64(opts.dmrg.max_sweeps));
  d.set("solver.dmrg_tolerance", {opts.dmrg.energy_tolerance});
  d.set("solver.svd_cutoff", {opts.dmrg.svd_cutoff});
  d.set("solver.dmrg_seed", i64(opts.dmrg.seed));
  d.set("split.n_train", i64(split.n_train));
  d.set("split.n_test", i64(split.n_test));
  d.set("split.delta", {split.delta});
  d.set("split.n_gen", i64(split.n_gen));
  if (split.delta > 0.0) d.set("split.dh", {split.gen_spacing()});
  d.set("split.mode", {std::string(split.random ? "random" : "grid")});
  if (split.random) d.set("split.seed", i64(split.seed));
  return d;
}

namespace {

struct Job {
  std::string id;
  SplitTag split;
  double value;
};

struct JobOutcome {
  bool ok = false;
  std::string error;
  std::string checksum;
  bool has_state = false;
  bool same_as_previous = false;  // stage chaining, direct path only
};

double state_overlap(const DenseState& a, const DenseState& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i) s += a.amplitudes[i] * b.amplitudes[i];
  return std::abs(s) / std::sqrt(a.norm_squared() * b.norm_squared());
}

}  // namespace

GenerateSummary generate_dataset(const PipelineOpts& opts, const SplitSpec& split,
                                 const fs::path& out_dir, std::string config_hash) {
  opts.validate();
  const SplitValues values = sample_splits(split);
  util::TomlDocument sidecar = describe_generation(opts, split);
  if (config_hash.empty()) config_hash = util::sha256_hex(sidecar.dump());

  std::vector<Job> jobs;
  auto add = [&](const std::vector<double>& vs, SplitTag tag) {
    for (std::size_t k = 0; k < vs.size(); ++k) {
      char id[32];
      std::snprintf(id, sizeof id, "%s-%04zu", std::string(split_name(tag)).c_str(), k);
      jobs.push_back({id, tag, vs[k]});
    }
  };
  add(values.train, SplitTag::kTrain);
  add(values.test, SplitTag::kTest);
  add(values.gen, SplitTag::kGen);

  std::error_code ec;
  fs::create_directories(out_dir / "images", ec);
  if (opts.write_png) fs::create_directories(out_dir / "png", ec);
  if (opts.store_states) fs::create_directories(out_dir / "states", ec);
  if (!fs::is_directory(out_dir / "images")) {
    throw IoError("cannot create dataset directory " + out_dir.string());
  }

  // Work through the jobs in ascending parameter order so stage detection
  // only compares neighbours; each worker owns one contiguous run.
  std::vector<std::size_t> order(jobs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return jobs[a].value < jobs[b].value; });

  std::vector<JobOutcome> outcomes(jobs.size());
  const bool track_stages = !opts.use_rdm;
  const int workers = std::max(1, std::min<int>(opts.threads, static_cast<int>(jobs.size())));
  std::vector<std::optional<DenseState>> run_first(workers), run_last(workers);
  std::vector<std::exception_ptr> fatal(workers);

  auto work = [&](int w, std::size_t begin, std::size_t end) {
    try {
      std::optional<DenseState> previous;
      for (std::size_t k = begin; k < end; ++k) {
        const Job& job = jobs[order[k]];
        JobOutcome& out = outcomes[order[k]];
        PipelineSample s;
        try {
          s = run_pipeline(opts, job.value);
        } catch (const SolverError& e) {
          out.error = e.what();
          previous.reset();
          if (k == begin) run_first[w].reset();
          continue;
        }
        const std::vector<std::uint8_t> bytes = encode_qimg(s.side, s.pixels);
        util::write_file(out_dir / "images" / (job.id + ".qimg"), bytes);
        out.checksum = util::sha256_hex(bytes);
        if (opts.write_png) {
          QubismImage img{s.side, {}, s.pixels};
          util::write_file(out_dir / "png" / (job.id + ".png"), encode_png(img));
        }
        if (opts.store_states && s.ground) {
          write_state(out_dir / "states" / (job.id + ".qsta"), *s.ground);
          out.has_state = true;
        }
        if (track_stages) {
          if (previous) out.same_as_previous = state_overlap(*previous, *s.imaged_state) > kStageOverlap;
          if (k == begin) run_first[w] = *s.imaged_state;
          previous = std::move(s.imaged_state);
        }
        out.ok = true;
      }
      if (track_stages) run_last[w] = std::move(previous);
    } catch (...) {
      fatal[w] = std::current_exception();
    }
  };

  std::vector<std::size_t> bounds(workers + 1);
  for (int w = 0; w <= workers; ++w) bounds[w] = jobs.size() * w / workers;
  if (workers == 1) {
    work(0, 0, jobs.size());
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w, bounds[w], bounds[w + 1]);
    for (auto& t : pool) t.join();
  }
  for (auto& f : fatal) {
    if (f) std::rethrow_exception(f);
  }
  if (track_stages) {
    for (int w = 1; w < workers; ++w) {
      const std::size_t first = order[bounds[w]];
      if (run_last[w - 1] && run_first[w] && outcomes[first].ok) {
        outcomes[first].same_as_previous = state_overlap(*run_last[w - 1], *run_first[w]) > kStageOverlap;
      }
    }
  }

  GenerateSummary summary;
  Manifest manifest;
  manifest.comment = std::string(kToolName) + " " + kVersion + " config_hash=" + config_hash;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!outcomes[i].ok) {
      summary.failed.push_back(jobs[i].id);
      continue;
    }
    ManifestRow r;
    r.id = jobs[i].id;
    r.family = std::string(family_name(opts.family));
    r.param_name = std::string(param_name(opts.family));
    r.value = jobs[i].value;
    r.split = jobs[i].split;
    r.image_path = "images/" + r.id + ".qimg";
    if (outcomes[i].has_state) r.state_path = "states/" + r.id + ".qsta";
    r.checksum = outcomes[i].checksum;
    manifest.rows.push_back(std::move(r));
  }
  summary.written = manifest.rows.size();
  if (manifest.rows.empty()) {
    throw SolverError("no sample could be solved; first failure: " + outcomes.front().error);
  }

  if (track_stages) {
    std::string text = "# " + manifest.comment + "\nid,param_value,stage\n";
    int stage = -1;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const JobOutcome& o = outcomes[order[k]];
      if (!o.ok) continue;
      if (stage < 0 || !o.same_as_previous) ++stage;
      text += jobs[order[k]].id + "," + format_double(jobs[order[k]].value) + "," +
              std::to_string(stage) + "\n";
    }
    summary.stage_count = stage + 1;
    util::write_text(out_dir / "stages.csv", text);
  }

  sidecar.set("schema_version", {std::int64_t{kManifestSchemaVersion}});
  sidecar.set("tool", {std::string(kToolName)});
  sidecar.set("version", {std::string(kVersion)});
  sidecar.set("config_hash", {config_hash});
  sidecar.set("summary.samples", {static_cast<std::int64_t>(summary.written)});
  util::TomlArray failed;
  for (const auto& id : summary.failed) failed.push_back({id});
  sidecar.set("summary.failed", {failed});
  if (track_stages) sidecar.set("summary.stages", {std::int64_t{summary.stage_count}});
  util::write_text(out_dir / "dataset.toml", sidecar.dump());

  summary.manifest_path = out_dir / "manifest.csv";
  util::write_text(summary.manifest_path, format_manifest(manifest));
  return summary;
}

// ---------------------------------------------------------------------------
// Loading

Dataset load_dataset(const fs::path& location, const LoadOptions& opts) {
  const fs::path manifest_path =
      fs::is_directory(location) ? location / "manifest.csv" : location;
  Dataset ds;
  ds.root = manifest_path.parent_path();
  ds.manifest = read_manifest(manifest_path);
  if (ds.manifest.rows.empty()) throw IoError("dataset is empty: " + manifest_path.string());

  const fs::path sidecar_path = ds.root / "dataset.toml";
  if (!fs::exists(sidecar_path)) throw IoError("dataset sidecar not found: " + sidecar_path.string());
  try {
    ds.sidecar = util::TomlDocument::parse(util::read_text(sidecar_path));
  } catch (const ConfigError& e) {
    throw IoError(sidecar_path.string() + ": " + e.what());
  }
  const auto schema = ds.sidecar.get_int("schema_version");
  if (!schema || *schema != kManifestSchemaVersion) {
    throw IoError("unsupported dataset schema version " +
                  (schema ? std::to_string(*schema) : std::string("(missing)")) + " in " +
                  sidecar_path.string());
  }

  const bool use_rdm = ds.sidecar.get_bool("pipeline.use_rdm").value_or(true);
  const PurifyOrdering ordering =
      parse_ordering(ds.sidecar.get_string("pipeline.ordering").value_or("interleaved"));

  struct Loaded {
    const ManifestRow* row;
    std::vector<double> input;
  };
  std::vector<Loaded> loaded;
  for (const auto& row : ds.manifest.rows) {
    const fs::path file = ds.root / row.image_path;
    if (!fs::exists(file)) throw IoError("dataset image missing: " + file.string());
    const auto bytes = util::read_file(file);
    if (util::sha256_hex(bytes) != row.checksum) {
      throw IoError("checksum mismatch for " + file.string());
    }
    FloatImage img = decode_qimg(bytes);
    if (ds.image_side == 0) ds.image_side = img.side;
    if (img.side != ds.image_side) throw IoError("image side differs in " + file.string());
    loaded.push_back({&row, opts.form == InputForm::kFlat
                                ? flat_input(img.pixels, img.side, use_rdm, ordering)
                                : std::move(img.pixels)});
  }

  const int side = ds.image_side;
  const nn::Shape shape = opts.form == InputForm::kFlat ? nn::Shape{1, 1, 1, side * side}
                                                        : nn::Shape{1, 1, side, side};
  for (SplitData* s : {&ds.train, &ds.val, &ds.test, &ds.gen}) s->samples.sample = shape;
  auto target = [&](SplitTag tag) -> SplitData& {
    switch (tag) {
      case SplitTag::kTrain: return ds.train;
      case SplitTag::kVal: return ds.val;
      case SplitTag::kTest: return ds.test;
      case SplitTag::kGen: return ds.gen;
    }
    return ds.train;
  };
  for (const auto& l : loaded) {
    SplitData& s = target(l.row->split);
    s.ids.push_back(l.row->id);
    s.values.push_back(l.row->value);
    s.samples.add(l.input, l.row->value);
  }

  if (ds.val.ids.empty() && opts.validation_fraction > 0.0) {
    const auto val = nn::choose_validation(ds.train.ids.size(), opts.validation_fraction, opts.seed);
    SplitData keep;
    keep.samples.sample = shape;
    std::vector<std::size_t> keep_idx;
    for (std::size_t i = 0, v = 0; i < ds.train.ids.size(); ++i) {
      if (v < val.size() && val[v] == i) {
        ++v;
      } else {
        keep_idx.push_back(i);
      }
    }
    for (std::size_t i : val) {
      ds.val.ids.push_back(ds.train.ids[i]);
      ds.val.values.push_back(ds.train.values[i]);
    }
    ds.val.samples = ds.train.samples.subset(val);
    for (std::size_t i : keep_idx) {
      keep.ids.push_back(ds.train.ids[i]);
      keep.values.push_back(ds.train.values[i]);
    }
    keep.samples = ds.train.samples.subset(keep_idx);
    ds.train = std::move(keep);
  }
  return ds;
}

}  // namespace hamlearn::data
