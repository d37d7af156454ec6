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


// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Criteria 6 to 10 drive the command-line tool
// on the shipped desk presets and take the better part of an hour on one
// core; pass criterion numbers as arguments to run a subset.
//
//   acceptance [--work DIR] [N ...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "hamlearn/lanczos.hpp"
#include "hamlearn/mps.hpp"
#include "hamlearn/nn/network.hpp"
#include "hamlearn/nn/ops.hpp"
#include "hamlearn/qubism.hpp"
#include "hamlearn/rdm.hpp"
#include "hamlearn/util/binary_io.hpp"
#include "oracles.hpp"

using namespace hamlearn;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (pass) detail += (detail.empty() ? "" : "; ") + what;
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

fs::path g_work;

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(HAMLEARN_CLI) + " " + args + " >>" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string preset(const std::string& name) {
  return (fs::path(HAMLEARN_CONFIG_DIR) / (name + ".toml")).string();
}

using Table = std::vector<std::map<std::string, std::string>>;

// Rows of a CSV keyed by header, skipping comment lines.
Table read_csv(const fs::path& path) {
  std::istringstream in(util::read_text(path));
  std::string line;
  std::vector<std::string> header;
  Table rows;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = split(line);
      continue;
    }
    const auto cells = split(line);
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) row[header[i]] = cells[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j);
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = ranks(a), rb = ranks(b);
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / ra.size();
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / rb.size();
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// ---------------------------------------------------------------------------
// 1. Ground-state solvers

Outcome solvers() {
  Outcome o;
  const auto t0 = Clock::now();
  auto qim = [](int n, double h) {
    return build_terms({Family::kQim, Lattice::chain(n, Boundary::kPeriodic), h});
  };
  const double classical = ed_ground(qim(12, 0.0), LanczosOptions{}).energy;
  o.require(std::abs(classical + 3.0) <= 1e-10, "h=0 energy " + num(classical));

  const TermList critical = qim(12, 0.5);
  const double dense = oracle::dense_ground_energy(oracle::kron_hamiltonian(critical));
  const double lanczos = ed_ground(critical, LanczosOptions{}).energy;
  o.require(std::abs(lanczos - dense) <= 1e-10, "Lanczos off dense by " + num(lanczos - dense));

  const TermList l14 = qim(14, 0.5);
  const double ed = ed_ground(l14, LanczosOptions{}).energy;
  DmrgOptions d;
  d.chi_max = 64;
  const auto r = dmrg_ground(build_mpo(l14, 14), d);
  o.require(r.converged && std::abs(r.energy - ed) <= 1e-8, "DMRG off ED by " + num(r.energy - ed));

  const double secs = seconds_since(t0);
  o.require(secs < 120.0, "took " + num(secs) + " s");
  o.note("L=14 DMRG-ED " + num(r.energy - ed) + ", " + num(secs) + " s");
  return o;
}

// ---------------------------------------------------------------------------
// 2. Matrix-free, MPO and Kronecker Hamiltonians

Outcome hamiltonians() {
  Outcome o;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (Family f : {Family::kQim, Family::kXxz, Family::kXy}) {
    for (int n = 2; n <= 8; ++n) {
      for (Boundary b : {Boundary::kOpen, Boundary::kPeriodic}) {
        if (b == Boundary::kPeriodic && n < 3) continue;
        const TermList t = build_terms({f, Lattice::chain(n, b), u(rng), 0.5 + u(rng)});
        const Eigen::MatrixXd kron = oracle::kron_hamiltonian(t);
        const Eigen::MatrixXd mpo = mpo_to_dense(build_mpo(t, n));
        const HamiltonianOperator op(t);
        Eigen::MatrixXd free(kron.rows(), kron.cols());
        std::vector<double> e(op.dim()), he(op.dim());
        for (std::size_t c = 0; c < op.dim(); ++c) {
          std::fill(e.begin(), e.end(), 0.0);
          e[c] = 1.0;
          op.apply(e, he);
          for (std::size_t r = 0; r < op.dim(); ++r) free(r, c) = he[r];
        }
        worst = std::max({worst, (mpo - kron).cwiseAbs().maxCoeff(),
                          (free - kron).cwiseAbs().maxCoeff()});
      }
    }
  }
  o.require(worst <= 1e-12, "max deviation " + num(worst));
  o.note("max deviation " + num(worst));
  return o;
}

// ---------------------------------------------------------------------------
// 3. Reduced density matrices and purification

Outcome density_matrices() {
  Outcome o;
  std::mt19937_64 rng(3);
  int bad_invariant = 0;
  double worst_trace = 0.0, worst_square = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 7;
    DenseState s{n, oracle::random_state(n, rng)};
    const int lb = 1 + trial % std::min(n, 4);
    const int start = std::uniform_int_distribution<int>(0, n - lb)(rng);
    std::vector<int> keep(lb);
    std::iota(keep.begin(), keep.end(), start);
    const Rdm r = rdm_dense(s, {keep});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.rho, Eigen::EigenvaluesOnly);
    if (std::abs(r.rho.trace() - 1.0) > 1e-10 ||
        (r.rho - r.rho.transpose()).cwiseAbs().maxCoeff() > 1e-12 ||
        es.eigenvalues().minCoeff() < -1e-10) {
      ++bad_invariant;
    }
    worst_trace = std::max(
        worst_trace, (r.rho - oracle::partial_trace(s.amplitudes, n, keep)).cwiseAbs().maxCoeff());
    for (PurifyOrdering ord : {PurifyOrdering::kInterleaved, PurifyOrdering::kConcatenated}) {
      const DenseState p = purify(r, ord);
      std::vector<int> rows(lb);
      for (int k = 0; k < lb; ++k) rows[k] = ord == PurifyOrdering::kInterleaved ? 2 * k : k;
      const Eigen::MatrixXd traced = oracle::partial_trace(p.amplitudes, 2 * lb, rows);
      worst_square = std::max(worst_square, (traced - r.rho * r.rho).cwiseAbs().maxCoeff());
    }
  }
  o.require(bad_invariant == 0, std::to_string(bad_invariant) + " states broke an invariant");
  o.require(worst_trace <= 1e-12, "partial trace off by " + num(worst_trace));
  o.require(worst_square <= 1e-12, "purification trace off rho^2 by " + num(worst_square));

  const TermList t = build_terms({Family::kQim, Lattice::chain(12, Boundary::kPeriodic), 0.5});
  const auto g = dmrg_ground(build_mpo(t, 12), DmrgOptions{});
  double worst_mps = 0.0;
  for (int lb : {2, 4, 6}) {
    const SubsystemSpec sub = middle_block(12, lb);
    worst_mps = std::max(worst_mps, (rdm_mps(g.state, sub).rho -
                                     rdm_dense(mps_to_dense(g.state), sub).rho).cwiseAbs().maxCoeff());
  }
  o.require(worst_mps <= 1e-10, "MPS and dense RDMs differ by " + num(worst_mps));
  o.note("rho^2 " + num(worst_square) + ", MPS-dense " + num(worst_mps));
  return o;
}

// ---------------------------------------------------------------------------
// 4. Qubism map and PNG output

Outcome qubism() {
  Outcome o;
  bool bijective = true;
  for (int n = 2; n <= 16 && bijective; n += 2) {
    const std::uint64_t count = std::uint64_t{1} << n;
    const int side = 1 << (n / 2);
    std::vector<char> seen(count, 0);
    for (std::uint64_t c = 0; c < count && bijective; ++c) {
      const Pixel p = qubism_index(c, n);
      if (p.x < 1 || p.y < 1 || p.x > side || p.y > side) {
        bijective = false;
        break;
      }
      char& slot = seen[static_cast<std::size_t>(p.x - 1) * side + (p.y - 1)];
      bijective = !slot && qubism_config(p, n) == c;
      slot = 1;
    }
  }
  o.require(bijective, "index map is not a bijection");

  const Pixel worked = qubism_index(0b1010, 4);
  o.require(worked.x == 4 && worked.y == 1,
            "(1,0,1,0) maps to (" + std::to_string(worked.x) + "," + std::to_string(worked.y) + ")");

  std::mt19937_64 rng(4);
  double worst = 0.0;
  for (int n : {2, 4, 8, 12}) {
    const QubismImage img = qubism_map(DenseState{n, oracle::random_state(n, rng)});
    double sq = 0.0;
    for (double v : img.pixels) sq += v * v;
    worst = std::max(worst, std::abs(sq - 1.0));
  }
  o.require(worst <= 1e-10, "pixel norm off by " + num(worst));

  const QubismImage img = normalize_image(qubism_map(DenseState{10, oracle::random_state(10, rng)}));
  const fs::path dir = g_work / "png";
  render_png(img, dir / "a.png");
  render_png(img, dir / "b.png");
  o.require(util::read_file(dir / "a.png") == util::read_file(dir / "b.png"), "PNG bytes differ");
  return o;
}

// ---------------------------------------------------------------------------
// 5. Gradients

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8});
}

double central(std::vector<double>& v, std::size_t i, const std::function<double()>& f) {
  const double h = 1e-5, keep = v[i];
  v[i] = keep + h;
  const double up = f();
  v[i] = keep - h;
  const double down = f();
  v[i] = keep;
  return (up - down) / (2 * h);
}

nn::Tensor4 gaussian(nn::Shape s, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  nn::Tensor4 t(s);
  for (double& v : t.data) v = g(rng);
  return t;
}

std::vector<double> gaussian(std::size_t n, std::mt19937_64& rng) {
  return gaussian(nn::Shape{1, 1, 1, static_cast<int>(n)}, rng).data;
}

double dot(const nn::Tensor4& t, const std::vector<double>& r) {
  return std::inner_product(t.data.begin(), t.data.end(), r.begin(), 0.0);
}

Outcome gradients() {
  using namespace nn;
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(5);
  std::map<std::string, double> worst;

  // Kinks of ReLU and max pooling are avoided by the continuous random inputs.
  {
    Tensor4 in = gaussian(Shape{2, 2, 5, 4}, rng);
    auto w = gaussian(3 * 2 * 9, rng), b = gaussian(3, rng);
    const auto r = gaussian(2 * 3 * 5 * 4, rng);
    Tensor4 up(Shape{2, 3, 5, 4});
    up.data = r;
    const ConvGrads g = conv2d_backward(in, w, {3, 3}, up);
    auto f = [&] { return dot(conv2d_forward(in, w, b, {3, 3}), r); };
    double& m = worst["conv"];
    for (std::size_t i = 0; i < in.data.size(); ++i) m = std::max(m, rel_err(g.input.data[i], central(in.data, i, f)));
    for (std::size_t i = 0; i < w.size(); ++i) m = std::max(m, rel_err(g.weights[i], central(w, i, f)));
    for (std::size_t i = 0; i < b.size(); ++i) m = std::max(m, rel_err(g.bias[i], central(b, i, f)));
  }
  {
    Tensor4 in = gaussian(Shape{2, 2, 4, 6}, rng);
    const PoolResult p = maxpool_forward(in, {2, 2});
    const auto r = gaussian(p.output.data.size(), rng);
    Tensor4 up(p.output.shape);
    up.data = r;
    const Tensor4 g = maxpool_backward(in.shape, p.argmax, up);
    auto f = [&] { return dot(maxpool_forward(in, {2, 2}).output, r); };
    double& m = worst["pool"];
    for (std::size_t i = 0; i < in.data.size(); ++i) {
      const double n = central(in.data, i, f);
      m = std::max(m, g.data[i] == 0.0 ? std::abs(n) : rel_err(g.data[i], n));
    }
  }
  {
    Tensor4 in = gaussian(Shape{3, 2, 2, 2}, rng);
    auto w = gaussian(5 * 8, rng), b = gaussian(5, rng);
    const auto r = gaussian(15, rng);
    Tensor4 up(Shape{3, 5, 1, 1});
    up.data = r;
    const DenseGrads g = dense_backward(in, w, up);
    auto f = [&] { return dot(dense_forward(in, w, b), r); };
    double& m = worst["dense"];
    for (std::size_t i = 0; i < in.data.size(); ++i) m = std::max(m, rel_err(g.input.data[i], central(in.data, i, f)));
    for (std::size_t i = 0; i < w.size(); ++i) m = std::max(m, rel_err(g.weights[i], central(w, i, f)));
    for (std::size_t i = 0; i < b.size(); ++i) m = std::max(m, rel_err(g.bias[i], central(b, i, f)));
  }
  {
    Tensor4 in = gaussian(Shape{2, 3, 2, 2}, rng);
    const auto r = gaussian(in.data.size(), rng);
    Tensor4 up(in.shape);
    up.data = r;
    const Tensor4 g = relu_backward(in, up);
    auto f = [&] { return dot(relu_forward(in), r); };
    double& m = worst["relu"];
    for (std::size_t i = 0; i < in.data.size(); ++i) m = std::max(m, rel_err(g.data[i], central(in.data, i, f)));
  }
  {
    Tensor4 in = gaussian(Shape{2, 6, 1, 1}, rng);
    std::vector<double> mask;
    std::mt19937_64 drop(6);
    dropout_forward(in, 0.5, drop, Mode::kTrain, &mask);
    const auto r = gaussian(in.data.size(), rng);
    Tensor4 up(in.shape);
    up.data = r;
    const Tensor4 g = apply_mask(up, mask);
    auto f = [&] { return dot(apply_mask(in, mask), r); };
    double& m = worst["dropout"];
    for (std::size_t i = 0; i < in.data.size(); ++i) m = std::max(m, rel_err(g.data[i], central(in.data, i, f)));
  }
  {
    std::vector<double> pred = gaussian(5, rng);
    const auto target = gaussian(5, rng);
    const Loss l = mse_loss(pred, target);
    auto f = [&] { return mse_loss(pred, target).value; };
    double& m = worst["mse"];
    for (std::size_t i = 0; i < pred.size(); ++i) m = std::max(m, rel_err(l.grad[i], central(pred, i, f)));
  }
  {
    Network net(preset_spec("small-2d", 8), 11);
    const Tensor4 batch = gaussian(Shape{2, 1, 8, 8}, rng);
    const std::vector<double> targets{0.3, 0.8};
    net.set_dropout_seed(5);
    net.forward(batch, Mode::kTrain);
    net.freeze_dropout_masks(true);
    net.forward(batch, Mode::kTrain);
    net.backward(targets);
    auto arrays = net.parameter_arrays();
    std::vector<std::vector<double>> grads;
    for (const auto& p : net.parameters()) grads.emplace_back(p.grad.begin(), p.grad.end());
    auto loss = [&] {
      net.set_parameter_arrays(arrays);
      return mse_loss(net.forward(batch, Mode::kTrain).data, targets).value;
    };
    double& m = worst["small-2d"];
    for (int k = 0; k < 40; ++k) {
      const std::size_t a = std::uniform_int_distribution<std::size_t>(0, arrays.size() - 1)(rng);
      const std::size_t i = std::uniform_int_distribution<std::size_t>(0, arrays[a].size() - 1)(rng);
      m = std::max(m, rel_err(grads[a][i], central(arrays[a], i, loss)));
    }
  }
  double overall = 0.0;
  for (const auto& [name, err] : worst) {
    o.require(err < 1e-4, name + " relative error " + num(err));
    overall = std::max(overall, err);
  }

  std::vector<double> theta{0.7, -1.2}, acc{0.0, 0.5};
  const std::vector<double> grad{0.3, -2.0};
  const RmspropConfig cfg;
  rmsprop_step(theta, grad, acc, cfg);
  const double s0 = 0.1 * 0.09, s1 = 0.9 * 0.5 + 0.1 * 4.0;
  const double e0 = 0.7 - 0.001 * 0.3 / (std::sqrt(s0) + 1e-7);
  const double e1 = -1.2 + 0.001 * 2.0 / (std::sqrt(s1) + 1e-7);
  o.require(std::abs(theta[0] - e0) <= 1e-12 && std::abs(theta[1] - e1) <= 1e-12 &&
                std::abs(acc[0] - s0) <= 1e-12 && std::abs(acc[1] - s1) <= 1e-12,
            "RMSprop step differs from the hand formula");

  const double secs = seconds_since(t0);
  o.require(secs < 60.0, "took " + num(secs) + " s");
  o.note("max relative error " + num(overall) + ", " + num(secs) + " s");
  return o;
}

// ---------------------------------------------------------------------------
// End-to-end runs through the command-line tool. Each is computed once and
// shared by the criteria that read it.

struct DeskRun {
  bool ok = false;
  double seconds = 0.0;
  fs::path root;
  std::string error;
};

// generate, train and eval of desk-qim on one thread into `root`.
DeskRun desk_qim_pipeline(const fs::path& root) {
  DeskRun r;
  r.root = root;
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path log = root / "log.txt";
  const std::string base = "--config " + preset("desk-qim") + " --out " + root.string() + " --deterministic ";
  const auto t0 = Clock::now();
  for (const char* cmd : {"generate", "train", "eval"}) {
    const int code = run_cli(base + cmd, log);
    if (code != 0) {
      r.error = std::string(cmd) + " exited with " + std::to_string(code) + " (see " + log.string() + ")";
      return r;
    }
  }
  r.seconds = seconds_since(t0);
  r.ok = true;
  return r;
}

const DeskRun& first_desk_run() {
  static const DeskRun run = desk_qim_pipeline(g_work / "desk-qim-a");
  return run;
}

std::map<std::string, double> summary(const fs::path& csv) {
  std::map<std::string, double> out;
  for (const auto& row : read_csv(csv)) {
    if (!row.at("value").empty()) out[row.at("metric")] = std::stod(row.at("value"));
  }
  return out;
}

Outcome desk_regression() {
  Outcome o;
  const DeskRun& run = first_desk_run();
  if (!run.ok) {
    o.require(false, run.error);
    return o;
  }
  const auto s = summary(run.root / "eval" / "summary.csv");
  o.require(s.count("eps_t") == 1, "no eps_t reported");
  if (!o.pass) return o;
  const double eps_t = s.at("eps_t");
  o.require(eps_t < 1e-2, "eps_t " + num(eps_t));
  o.require(run.seconds < 20 * 60, "took " + num(run.seconds / 60) + " min");
  o.note("eps_t " + num(eps_t) + ", " + num(run.seconds / 60) + " min on one thread");
  return o;
}

struct DeltaSweep {
  bool ok = false;
  fs::path root;
  std::string error;
};

const DeltaSweep& delta_sweep() {
  static const DeltaSweep sweep = [] {
    DeltaSweep s;
    s.root = g_work / "desk-qim-sweep";
    fs::remove_all(s.root);
    fs::create_directories(s.root);
    const int code = run_cli("--config " + preset("desk-qim") + " --out " + s.root.string() +
                                 " sweep-delta --deltas 0.2,0.4,0.6 --repeats 3",
                             s.root / "log.txt");
    s.ok = code == 0;
    if (!s.ok) s.error = "sweep-delta exited with " + std::to_string(code);
    return s;
  }();
  return sweep;
}

Outcome generalization() {
  Outcome o;
  const DeltaSweep& s = delta_sweep();
  if (!s.ok) {
    o.require(false, s.error);
    return o;
  }
  // The first repeat of the sweep trains with the preset's own seed.
  const fs::path run = s.root / "sweep-delta" / "delta-0.4" / "seed-1";
  const auto rows = read_csv(run / "predictions.csv");
  std::vector<double> truth, pred;
  double se_t = 0.0, se_g = 0.0;
  int n_t = 0;
  for (const auto& row : rows) {
    const double h = std::stod(row.at("true_value")), p = std::stod(row.at("predicted_value"));
    if (row.at("split") == "test") {
      se_t += (p - h) * (p - h);
      ++n_t;
    } else if (row.at("split") == "gen") {
      se_g += (p - h) * (p - h);
      truth.push_back(h);
      pred.push_back(p);
    }
  }
  o.require(n_t > 0 && !truth.empty(), "missing test or generalizing rows");
  if (!o.pass) return o;
  const double eps_t = se_t / n_t, eps_g = se_g / truth.size();
  const double rho = spearman(truth, pred);
  o.require(eps_g < 5e-2, "eps_g " + num(eps_g));
  o.require(eps_t < 1e-2, "eps_t " + num(eps_t));
  o.require(rho > 0.9, "Spearman " + num(rho));
  o.note("eps_t " + num(eps_t) + ", eps_g " + num(eps_g) + ", Spearman " + num(rho));
  return o;
}

Outcome delta_trend() {
  Outcome o;
  const DeltaSweep& s = delta_sweep();
  if (!s.ok) {
    o.require(false, s.error);
    return o;
  }
  const auto rows = read_csv(s.root / "sweep-delta" / "sweep-delta.csv");
  std::vector<std::pair<double, double>> means;
  for (const auto& row : rows) {
    o.require(row.at("repeats") == "3", "expected 3 repeats per delta");
    means.emplace_back(std::stod(row.at("delta")), std::stod(row.at("eps_g_mean")));
  }
  o.require(means.size() == 3, "expected 3 sweep rows");
  if (!o.pass) return o;
  std::sort(means.begin(), means.end());
  std::string trend;
  for (std::size_t i = 0; i < means.size(); ++i) {
    trend += (i ? " <= " : "") + num(means[i].second);
    if (i > 0 && means[i].second < means[i - 1].second) {
      o.require(false, "mean eps_g drops from delta " + num(means[i - 1].first) + " to " +
                           num(means[i].first) + " (" + num(means[i - 1].second) + " to " +
                           num(means[i].second) + ")");
    }
  }
  o.require(means.back().second < 0.05, "eps_g at delta 0.6 is " + num(means.back().second));
  o.note("mean eps_g " + trend);
  return o;
}

Outcome flat_baseline() {
  Outcome o;
  const fs::path root = g_work / "desk-xy-baseline";
  fs::remove_all(root);
  fs::create_directories(root);
  const int code = run_cli("--config " + preset("desk-xy") + " --out " + root.string() +
                               " baseline-flat --repeats 3",
                           root / "log.txt");
  if (code != 0) {
    o.require(false, "baseline-flat exited with " + std::to_string(code));
    return o;
  }
  const auto rows = read_csv(root / "baseline-flat" / "baseline-flat.csv");
  int flat_worse = 0;
  std::string ratios;
  for (const auto& row : rows) {
    const double q = std::stod(row.at("eps_t_qubism")), f = std::stod(row.at("eps_t_flat"));
    flat_worse += f > q;
    ratios += (ratios.empty() ? "" : " ") + num(f / q);
  }
  o.require(rows.size() == 3, "expected 3 seeds");
  o.require(flat_worse >= 2, "flat worse in " + std::to_string(flat_worse) + " of 3 seeds");
  o.note("flat/qubism eps_t ratios " + ratios);
  return o;
}

Outcome determinism() {
  Outcome o;
  const DeskRun& a = first_desk_run();
  if (!a.ok) {
    o.require(false, a.error);
    return o;
  }
  const DeskRun b = desk_qim_pipeline(g_work / "desk-qim-b");
  if (!b.ok) {
    o.require(false, b.error);
    return o;
  }
  int compared = 0;
  for (const char* rel : {"dataset/manifest.csv", "dataset/dataset.toml", "train/checkpoint.qnet",
                          "train/history.csv", "eval/predictions.csv", "eval/summary.csv"}) {
    const bool same = util::read_file(a.root / rel) == util::read_file(b.root / rel);
    o.require(same, std::string(rel) + " differs");
    ++compared;
  }
  for (const auto& e : fs::directory_iterator(a.root / "dataset" / "images")) {
    const fs::path other = b.root / "dataset" / "images" / e.path().filename();
    if (util::read_file(e.path()) != util::read_file(other)) {
      o.require(false, e.path().filename().string() + " differs");
      break;
    }
    ++compared;
  }
  o.note(std::to_string(compared) + " files identical");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*run)();
};

}  // namespace

int main(int argc, char** argv) {
  g_work = fs::current_path() / "acceptance-work";
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--work" && i + 1 < argc) {
      g_work = fs::absolute(argv[++i]);
    } else {
      only.insert(std::atoi(a.c_str()));
    }
  }
  fs::create_directories(g_work);

  const Criterion criteria[] = {
      {1, "solver correctness", solvers},
      {2, "Hamiltonian oracle equivalence", hamiltonians},
      {3, "density matrices and purification", density_matrices},
      {4, "qubism map and PNG", qubism},
      {5, "gradients and RMSprop", gradients},
      {6, "desk-qim test error", desk_regression},
      {7, "desk-qim generalization across the critical point", generalization},
      {8, "generalization error grows with the gap", delta_trend},
      {9, "flat vectors against qubism images on desk-xy", flat_baseline},
      {10, "deterministic reruns", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    failed += !out.pass;
    std::printf("%s %2d %s%s%s\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.empty() ? "" : ": ", out.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
