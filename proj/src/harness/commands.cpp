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

#include "hamlearn/harness/commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>

#include "hamlearn/error.hpp"
#include "hamlearn/qubism.hpp"
#include "hamlearn/util/binary_io.hpp"

namespace hamlearn::harness {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

data::InputForm form_for(const std::string& preset) {
  return nn::preset_is_flat(preset) ? data::InputForm::kFlat : data::InputForm::kImage;
}

bool is_flat_network(const nn::Network& net) {
  const nn::Shape in = net.spec().input;
  return in.h == 1 && in.w > 1;
}

data::Dataset load_for(const ExperimentConfig& cfg, const fs::path& dataset_dir, int repeat,
                       const std::string& preset) {
  data::Dataset ds = data::load_dataset(
      dataset_dir, {form_for(preset), cfg.train.validation_fraction, cfg.train_for(repeat).seed});
  if (ds.image_side != cfg.pipeline.image_side()) {
    throw ConfigError("dataset image side " + std::to_string(ds.image_side) +
                      " does not match the configured side " +
                      std::to_string(cfg.pipeline.image_side()));
  }
  if (ds.train.ids.empty()) throw IoError("dataset has no training samples: " + dataset_dir.string());
  return ds;
}

std::string format_history(const nn::TrainResult& r, const std::string& comment) {
  std::string out = comment + "\nepoch,train_loss,val_loss\n";
  for (const auto& e : r.history) {
    out += std::to_string(e.epoch) + "," + fmt(e.train_loss) + "," + fmt(e.val_loss) + "\n";
  }
  return out;
}

struct Cycle {
  nn::TrainResult result;
  EvalReport report;
};

Cycle run_cycle(const ExperimentConfig& cfg, const data::Dataset& ds, const fs::path& run_dir,
                int repeat, const std::string& preset, const std::string& comment) {
  const nn::TrainConfig t = cfg.train_for(repeat);
  nn::Network net(cfg.network_spec(preset), t.seed);
  Cycle c;
  c.result = nn::train(net, ds.train.samples, ds.val.samples, t);
  ensure_dir(run_dir);
  nn::save_checkpoint(net, run_dir / "checkpoint.qnet");
  util::write_text(run_dir / "history.csv", format_history(c.result, comment));
  c.report = evaluate(net, ds);
  write_report(c.report, run_dir, comment);
  return c;
}

void log_run(const std::string& what, const EvalReport& r) {
  std::clog << "[" << what << "] eps_t=" << fmt_opt(r.eps_t);
  if (r.eps_g) std::clog << " eps_g=" << fmt(*r.eps_g);
  std::clog << std::endl;
}

}  // namespace

// ---------------------------------------------------------------------------
// Reports

std::size_t EvalReport::count(data::SplitTag split) const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.split == split;
  return n;
}

std::optional<double> split_mse(const std::vector<PredictionRow>& rows, data::SplitTag split) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : rows) {
    if (r.split != split) continue;
    const double d = r.prediction - r.truth;
    sum += d * d;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

EvalReport evaluate(const nn::Network& net, const data::Dataset& ds) {
  EvalReport report;
  const std::pair<const data::SplitData*, data::SplitTag> parts[] = {
      {&ds.train, data::SplitTag::kTrain},
      {&ds.val, data::SplitTag::kVal},
      {&ds.test, data::SplitTag::kTest},
      {&ds.gen, data::SplitTag::kGen}};
  for (const auto& [part, tag] : parts) {
    if (part->ids.empty()) continue;
    const std::vector<double> pred = nn::predict_all(net, part->samples);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      report.rows.push_back({part->ids[i], tag, part->values[i], pred[i]});
    }
  }
  report.eps_t = split_mse(report.rows, data::SplitTag::kTest);
  report.eps_g = split_mse(report.rows, data::SplitTag::kGen);
  return report;
}

std::string format_predictions(const EvalReport& report, const std::string& comment) {
  std::string out = comment + "\nid,split,true_value,predicted_value\n";
  for (const auto& r : report.rows) {
    out += r.id + "," + std::string(data::split_name(r.split)) + "," + fmt(r.truth) + "," +
           fmt(r.prediction) + "\n";
  }
  return out;
}

std::string format_summary(const EvalReport& report, const std::string& comment) {
  return comment + "\nmetric,value,count\neps_t," + fmt_opt(report.eps_t) + "," +
         std::to_string(report.count(data::SplitTag::kTest)) + "\neps_g," + fmt_opt(report.eps_g) +
         "," + std::to_string(report.count(data::SplitTag::kGen)) + "\n";
}

void write_report(const EvalReport& report, const fs::path& out_dir, const std::string& comment) {
  ensure_dir(out_dir);
  util::write_text(out_dir / "predictions.csv", format_predictions(report, comment));
  util::write_text(out_dir / "summary.csv", format_summary(report, comment));
}

Stats summarize(const std::vector<double>& values) {
  Stats s;
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Commands

data::GenerateSummary cmd_generate(const ExperimentConfig& cfg, const fs::path& dataset_dir) {
  cfg.validate();
  data::SplitSpec split = cfg.split;
  split.seed = cfg.seed;
  auto summary = data::generate_dataset(cfg.pipeline, split, dataset_dir, cfg.hash());
  if (!summary.failed.empty()) {
    std::clog << "[generate] " << summary.failed.size() << " sample(s) skipped after solver failures"
              << std::endl;
  }
  return summary;
}

TrainOutcome cmd_train(const ExperimentConfig& cfg, const fs::path& dataset_dir,
                       const fs::path& out_dir, int repeat, const std::string& preset_arg) {
  cfg.validate();
  const std::string preset = preset_arg.empty() ? cfg.preset : preset_arg;
  if (nn::preset_is_flat(preset) && !cfg.pipeline.use_rdm) {
    throw ConfigError("preset paper-1d-flat needs the RDM path");
  }
  const data::Dataset ds = load_for(cfg, dataset_dir, repeat, preset);
  const nn::TrainConfig t = cfg.train_for(repeat);
  nn::Network net(cfg.network_spec(preset), t.seed);
  TrainOutcome out;
  out.result = nn::train(net, ds.train.samples, ds.val.samples, t);
  ensure_dir(out_dir);
  out.checkpoint = out_dir / "checkpoint.qnet";
  out.history = out_dir / "history.csv";
  nn::save_checkpoint(net, out.checkpoint);
  util::write_text(out.history, format_history(out.result, csv_comment(cfg.hash())));
  return out;
}

EvalReport cmd_eval(const fs::path& checkpoint, const fs::path& dataset_dir,
                    const fs::path& out_dir, const std::string& config_hash) {
  if (!fs::exists(checkpoint)) throw IoError("checkpoint not found: " + checkpoint.string());
  const nn::Network net = nn::load_checkpoint(checkpoint);
  const data::Dataset ds = data::load_dataset(
      dataset_dir, {is_flat_network(net) ? data::InputForm::kFlat : data::InputForm::kImage, 0.0, 0});
  const nn::Shape in = net.spec().input;
  const nn::Shape have = ds.test.samples.sample;
  if (in.c != have.c || in.h != have.h || in.w != have.w) {
    throw ConfigError("checkpoint input does not match the dataset images");
  }
  EvalReport report = evaluate(net, ds);
  write_report(report, out_dir, csv_comment(config_hash));
  return report;
}

std::vector<double> cmd_predict(const fs::path& checkpoint, const std::vector<fs::path>& inputs,
                                const fs::path& out_csv, const std::string& config_hash) {
  if (!fs::exists(checkpoint)) throw IoError("checkpoint not found: " + checkpoint.string());
  if (inputs.empty()) throw ConfigError("predict needs at least one input");
  const nn::Network net = nn::load_checkpoint(checkpoint);
  const bool flat = is_flat_network(net);
  const nn::Shape in = net.spec().input;
  nn::SampleSet set;
  set.sample = nn::Shape{1, in.c, in.h, in.w};
  std::vector<std::string> sources;
  for (const auto& input : inputs) {
    if (fs::is_directory(input) || input.extension() == ".csv") {
      const data::Dataset ds = data::load_dataset(
          input, {flat ? data::InputForm::kFlat : data::InputForm::kImage, 0.0, 0});
      for (const data::SplitData* part : {&ds.train, &ds.val, &ds.test, &ds.gen}) {
        if (part->samples.sample.sample_size() != set.sample.sample_size()) {
          throw ConfigError("dataset " + input.string() + " does not match the checkpoint input");
        }
        for (std::size_t i = 0; i < part->ids.size(); ++i) {
          const std::size_t len = set.sample.sample_size();
          set.add({part->samples.inputs.data() + i * len, len}, part->values[i]);
          sources.push_back(part->ids[i]);
        }
      }
    } else {
      if (!fs::exists(input)) throw IoError("input not found: " + input.string());
      // Bare images carry no pipeline metadata; they are taken to be
      // interleaved RDM images, the default.
      FloatImage img = read_qimg(input);
      std::vector<double> x =
          flat ? data::flat_input(img.pixels, img.side, true, PurifyOrdering::kInterleaved)
               : std::move(img.pixels);
      if (x.size() != set.sample.sample_size()) {
        throw ConfigError("image " + input.string() + " does not match the checkpoint input");
      }
      set.add(x, 0.0);
      sources.push_back(input.string());
    }
  }
  const std::vector<double> pred = nn::predict_all(net, set);
  std::string text = csv_comment(config_hash) + "\nsource,prediction\n";
  for (std::size_t i = 0; i < pred.size(); ++i) text += sources[i] + "," + fmt(pred[i]) + "\n";
  if (out_csv.has_parent_path()) ensure_dir(out_csv.parent_path());
  util::write_text(out_csv, text);
  return pred;
}

std::size_t cmd_render(const fs::path& input, const fs::path& out_dir) {
  if (!fs::exists(input)) throw IoError("render input not found: " + input.string());
  auto png_of = [](int side, std::vector<double> normalized) {
    return encode_png(QubismImage{side, {}, std::move(normalized)});
  };
  if (fs::is_directory(input) || input.extension() == ".csv") {
    const fs::path manifest = fs::is_directory(input) ? input / "manifest.csv" : input;
    const data::Manifest m = data::read_manifest(manifest);
    if (m.rows.empty()) throw IoError("dataset is empty: " + manifest.string());
    std::vector<std::pair<std::string, std::vector<std::uint8_t>>> pngs;
    for (const auto& row : m.rows) {
      const fs::path file = manifest.parent_path() / row.image_path;
      if (!fs::exists(file)) throw IoError("dataset image missing: " + file.string());
      const auto bytes = util::read_file(file);
      if (util::sha256_hex(bytes) != row.checksum) {
        throw IoError("checksum mismatch for " + file.string());
      }
      FloatImage img = decode_qimg(bytes);
      pngs.emplace_back(row.id + ".png", png_of(img.side, std::move(img.pixels)));
    }
    ensure_dir(out_dir);
    for (const auto& [name, bytes] : pngs) util::write_file(out_dir / name, bytes);
    return pngs.size();
  }
  std::vector<std::uint8_t> png;
  if (input.extension() == ".qimg") {
    FloatImage img = read_qimg(input);
    png = png_of(img.side, std::move(img.pixels));
  } else {
    png = encode_png(normalize_image(qubism_map(read_state(input))));
  }
  ensure_dir(out_dir);
  util::write_file(out_dir / (input.stem().string() + ".png"), png);
  return 1;
}

std::vector<SweepRow> cmd_sweep_delta(const ExperimentConfig& cfg, const std::vector<double>& deltas,
                                      int repeats, const fs::path& out_dir) {
  if (deltas.empty()) throw ConfigError("sweep-delta needs at least one delta");
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  std::vector<ExperimentConfig> variants;
  for (double d : deltas) {
    ExperimentConfig v = cfg;
    v.split.delta = d;
    v.validate();
    variants.push_back(std::move(v));
  }
  const std::string comment = csv_comment(cfg.hash());
  std::vector<SweepRow> rows;
  for (const auto& v : variants) {
    const fs::path dir = out_dir / ("delta-" + short_number(v.split.delta));
    cmd_generate(v, dir / "dataset");
    SweepRow row;
    row.delta = v.split.delta;
    row.length = v.pipeline.site_count();
    row.block = v.pipeline.block;
    for (int r = 0; r < repeats; ++r) {
      const data::Dataset ds = load_for(v, dir / "dataset", r, v.preset);
      const Cycle c = run_cycle(v, ds, dir / ("seed-" + std::to_string(v.train_for(r).seed)), r,
                                v.preset, comment);
      log_run("sweep-delta delta=" + short_number(v.split.delta) + " seed=" +
                  std::to_string(v.train_for(r).seed),
              c.report);
      row.eps_t.push_back(*c.report.eps_t);
      if (c.report.eps_g) row.eps_g.push_back(*c.report.eps_g);
    }
    rows.push_back(std::move(row));
  }
  std::string text = comment + "\ndelta,repeats,eps_t_mean,eps_t_std,eps_g_mean,eps_g_std\n";
  for (const auto& r : rows) {
    const Stats t = summarize(r.eps_t);
    text += fmt(r.delta) + "," + std::to_string(r.eps_t.size()) + "," + fmt(t.mean) + "," + fmt(t.std) + ",";
    if (r.eps_g.empty()) {
      text += ",\n";
    } else {
      const Stats g = summarize(r.eps_g);
      text += fmt(g.mean) + "," + fmt(g.std) + "\n";
    }
  }
  ensure_dir(out_dir);
  util::write_text(out_dir / "sweep-delta.csv", text);
  return rows;
}

std::vector<SweepRow> cmd_sweep_size(const ExperimentConfig& cfg, const std::vector<int>& lengths,
                                     const std::vector<int>& blocks, int repeats,
                                     const fs::path& out_dir) {
  if (lengths.empty() == blocks.empty()) {
    throw ConfigError("sweep-size needs exactly one of a length list or a block list");
  }
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  if (!lengths.empty() && cfg.pipeline.lattice != LatticeKind::kChain) {
    throw ConfigError("length sweeps need a chain lattice");
  }
  std::vector<ExperimentConfig> variants;
  for (int x : lengths.empty() ? blocks : lengths) {
    ExperimentConfig v = cfg;
    if (lengths.empty()) {
      v.pipeline.block = x;
    } else {
      v.pipeline.length = x;
    }
    v.validate();
    variants.push_back(std::move(v));
  }
  const std::string comment = csv_comment(cfg.hash());
  std::vector<SweepRow> rows;
  for (const auto& v : variants) {
    const fs::path dir = out_dir / ("L-" + std::to_string(v.pipeline.site_count()) + "-block-" +
                                    std::to_string(v.pipeline.block));
    cmd_generate(v, dir / "dataset");
    SweepRow row;
    row.delta = v.split.delta;
    row.length = v.pipeline.site_count();
    row.block = v.pipeline.block;
    for (int r = 0; r < repeats; ++r) {
      const data::Dataset ds = load_for(v, dir / "dataset", r, v.preset);
      const Cycle c = run_cycle(v, ds, dir / ("seed-" + std::to_string(v.train_for(r).seed)), r,
                                v.preset, comment);
      log_run("sweep-size L=" + std::to_string(row.length) + " block=" + std::to_string(row.block),
              c.report);
      row.eps_t.push_back(*c.report.eps_t);
      if (c.report.eps_g) row.eps_g.push_back(*c.report.eps_g);
    }
    rows.push_back(std::move(row));
  }
  std::string text =
      comment + "\nlength,block,repeats,eps_t_mean,eps_t_std,eps_g_mean,eps_g_std\n";
  for (const auto& r : rows) {
    const Stats t = summarize(r.eps_t);
    text += std::to_string(r.length) + "," + std::to_string(r.block) + "," +
            std::to_string(r.eps_t.size()) + "," + fmt(t.mean) + "," + fmt(t.std) + ",";
    if (r.eps_g.empty()) {
      text += ",\n";
    } else {
      const Stats g = summarize(r.eps_g);
      text += fmt(g.mean) + "," + fmt(g.std) + "\n";
    }
  }
  ensure_dir(out_dir);
  util::write_text(out_dir / "sweep-size.csv", text);
  return rows;
}

std::vector<BaselineRow> cmd_baseline_flat(const ExperimentConfig& cfg, int repeats,
                                           const fs::path& out_dir) {
  const std::string flat_preset = "paper-1d-flat";
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  if (!cfg.pipeline.use_rdm) throw ConfigError("baseline-flat needs the RDM path");
  if (nn::preset_is_flat(cfg.preset)) {
    throw ConfigError("baseline-flat compares an image preset against paper-1d-flat; set an image preset");
  }
  cfg.validate();
  cfg.network_spec(flat_preset);

  const std::string comment = csv_comment(cfg.hash());
  cmd_generate(cfg, out_dir / "dataset");
  std::vector<BaselineRow> rows;
  for (int r = 0; r < repeats; ++r) {
    BaselineRow row;
    row.seed = cfg.train_for(r).seed;
    const std::string tag = "seed-" + std::to_string(row.seed);
    const data::Dataset img = load_for(cfg, out_dir / "dataset", r, cfg.preset);
    row.qubism = run_cycle(cfg, img, out_dir / "qubism" / tag, r, cfg.preset, comment).report;
    log_run("baseline qubism " + tag, row.qubism);
    const data::Dataset flat = load_for(cfg, out_dir / "dataset", r, flat_preset);
    row.flat = run_cycle(cfg, flat, out_dir / "flat" / tag, r, flat_preset, comment).report;
    log_run("baseline flat " + tag, row.flat);
    rows.push_back(std::move(row));
  }
  auto ratio = [](const std::optional<double>& a, const std::optional<double>& b) {
    return a && b && *b > 0.0 ? fmt(*a / *b) : std::string();
  };
  std::string text = comment +
                     "\nseed,eps_t_qubism,eps_g_qubism,eps_t_flat,eps_g_flat,ratio_t_flat_over_qubism,"
                     "ratio_g_flat_over_qubism\n";
  for (const auto& r : rows) {
    text += std::to_string(r.seed) + "," + fmt_opt(r.qubism.eps_t) + "," + fmt_opt(r.qubism.eps_g) +
            "," + fmt_opt(r.flat.eps_t) + "," + fmt_opt(r.flat.eps_g) + "," +
            ratio(r.flat.eps_t, r.qubism.eps_t) + "," + ratio(r.flat.eps_g, r.qubism.eps_g) + "\n";
  }
  util::write_text(out_dir / "baseline-flat.csv", text);
  return rows;
}

}  // namespace hamlearn::harness
