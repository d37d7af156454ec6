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

#include "hamlearn/mps.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

namespace hamlearn {
namespace {

using Eigen::Matrix2d;
using Eigen::MatrixXd;
using Env = std::vector<MatrixXd>;

Matrix2d op_matrix(SpinOp op) {
  Matrix2d m;
  switch (op) {
    case SpinOp::kX:
      m << 0.0, 0.5, 0.5, 0.0;
      break;
    case SpinOp::kZ:
      m << 0.5, 0.0, 0.0, -0.5;
      break;
    case SpinOp::kY:
      // i*Sy, real; Sy Sy pairs pick up an extra minus sign.
      m << 0.0, 0.5, -0.5, 0.0;
      break;
  }
  return m;
}

MatrixXd thin_q(const Eigen::HouseholderQR<MatrixXd>& qr, Eigen::Index rows,
                Eigen::Index cols) {
  return qr.householderQ() * MatrixXd::Identity(rows, cols);
}

// Left environment for sites < k+1 given the one for sites < k.
Env update_left(const Env& left, const Mps::SiteTensor& a, const MpoSite& w) {
  const Eigen::Index dr = a[0].cols();
  Env out(w.right_dim, MatrixXd::Zero(dr, dr));
  std::vector<std::array<MatrixXd, 2>> la(left.size());
  std::vector<bool> have(left.size(), false);
  for (const auto& e : w.entries) {
    if (!have[e.left]) {
      la[e.left][0] = left[e.left] * a[0];
      la[e.left][1] = left[e.left] * a[1];
      have[e.left] = true;
    }
    for (int so = 0; so < 2; ++so) {
      for (int si = 0; si < 2; ++si) {
        const double c = e.op(so, si);
        if (c != 0.0) out[e.right].noalias() += c * a[so].transpose() * la[e.left][si];
      }
    }
  }
  return out;
}

// Right environment for sites > k-1 given the one for sites > k.
Env update_right(const Env& right, const Mps::SiteTensor& b, const MpoSite& w) {
  const Eigen::Index dl = b[0].rows();
  Env out(w.left_dim, MatrixXd::Zero(dl, dl));
  std::vector<std::array<MatrixXd, 2>> rb(right.size());
  std::vector<bool> have(right.size(), false);
  for (const auto& e : w.entries) {
    if (!have[e.right]) {
      rb[e.right][0] = b[0] * right[e.right];
      rb[e.right][1] = b[1] * right[e.right];
      have[e.right] = true;
    }
    for (int so = 0; so < 2; ++so) {
      for (int si = 0; si < 2; ++si) {
        const double c = e.op(so, si);
        if (c != 0.0) out[e.left].noalias() += c * rb[e.right][so] * b[si].transpose();
      }
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Mps

Mps::Mps(std::vector<SiteTensor> tensors, int center)
    : tensors_(std::move(tensors)), center_(center) {}

Mps Mps::product(std::span<const int> bits) {
  std::vector<SiteTensor> t(bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    t[k][0] = MatrixXd::Constant(1, 1, bits[k] == 0 ? 1.0 : 0.0);
    t[k][1] = MatrixXd::Constant(1, 1, bits[k] == 0 ? 0.0 : 1.0);
  }
  return Mps(std::move(t), 0);
}

Mps Mps::random(int site_count, int chi, std::uint64_t seed) {
  if (site_count < 1) throw ConfigError("mps needs at least one site");
  if (chi < 1) throw ConfigError("mps bond dimension must be >= 1");
  auto cap = [chi](int bond, int n) {
    // bond b separates b+1 sites on the left from n-b-1 on the right
    const int left = std::min(bond + 1, 30);
    const int right = std::min(n - bond - 1, 30);
    const long long m = std::min(1LL << left, 1LL << right);
    return static_cast<int>(std::min<long long>(chi, m));
  };
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<SiteTensor> t(site_count);
  for (int k = 0; k < site_count; ++k) {
    const int dl = k == 0 ? 1 : cap(k - 1, site_count);
    const int dr = k == site_count - 1 ? 1 : cap(k, site_count);
    for (auto& m : t[k]) {
      m.resize(dl, dr);
      for (Eigen::Index j = 0; j < dr; ++j) {
        for (Eigen::Index i = 0; i < dl; ++i) m(i, j) = gauss(rng);
      }
    }
  }
  Mps out(std::move(t), site_count - 1);
  out.canonicalize(0);
  out.normalize();
  return out;
}

Mps Mps::from_dense(const DenseState& state, int chi_max, double cutoff) {
  const int n = state.site_count;
  if (n < 1) throw ConfigError("from_dense: empty state");
  if (state.amplitudes.size() != (std::size_t{1} << n)) {
    throw ShapeError("from_dense: amplitude count does not match site count");
  }
  std::vector<SiteTensor> t(n);
  MatrixXd rest = Eigen::Map<const MatrixXd>(state.amplitudes.data(), 1,
                                             static_cast<Eigen::Index>(state.amplitudes.size()));
  for (int k = 0; k < n - 1; ++k) {
    const Eigen::Index dl = rest.rows();
    const Eigen::Index half = rest.cols() / 2;
    // row (s, alpha) = s * dl + alpha, column = remaining configuration
    MatrixXd m(2 * dl, half);
    m.topRows(dl) = rest.leftCols(half);
    m.bottomRows(dl) = rest.rightCols(half);
    Eigen::BDCSVD<MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    Eigen::Index keep = 0;
    while (keep < s.size() && s(keep) > cutoff * std::max(s(0), 1e-300)) ++keep;
    keep = std::max<Eigen::Index>(keep, 1);
    if (chi_max > 0) keep = std::min<Eigen::Index>(keep, chi_max);
    const MatrixXd u = svd.matrixU().leftCols(keep);
    t[k][0] = u.topRows(dl);
    t[k][1] = u.bottomRows(dl);
    rest = s.head(keep).asDiagonal() * svd.matrixV().leftCols(keep).transpose();
  }
  t[n - 1][0] = rest.col(0);
  t[n - 1][1] = rest.col(1);
  return Mps(std::move(t), n - 1);
}

int Mps::bond_dim(int bond) const {
  return static_cast<int>(tensors_.at(bond)[0].cols());
}

int Mps::max_bond_dim() const {
  int m = 1;
  for (int k = 0; k + 1 < site_count(); ++k) m = std::max(m, bond_dim(k));
  return m;
}

void Mps::left_qr_step(int k) {
  auto& a = tensors_[k];
  const Eigen::Index dl = a[0].rows();
  const Eigen::Index dr = a[0].cols();
  MatrixXd m(2 * dl, dr);
  m.topRows(dl) = a[0];
  m.bottomRows(dl) = a[1];
  Eigen::HouseholderQR<MatrixXd> qr(m);
  const Eigen::Index r = std::min(2 * dl, dr);
  const MatrixXd q = thin_q(qr, 2 * dl, r);
  const MatrixXd rmat =
      qr.matrixQR().topRows(r).triangularView<Eigen::Upper>().toDenseMatrix();
  a[0] = q.topRows(dl);
  a[1] = q.bottomRows(dl);
  for (auto& next : tensors_[k + 1]) next = rmat * next;
}

void Mps::right_qr_step(int k) {
  auto& a = tensors_[k];
  const Eigen::Index dl = a[0].rows();
  const Eigen::Index dr = a[0].cols();
  MatrixXd mt(2 * dr, dl);  // transpose of [A0 A1]
  mt.topRows(dr) = a[0].transpose();
  mt.bottomRows(dr) = a[1].transpose();
  Eigen::HouseholderQR<MatrixXd> qr(mt);
  const Eigen::Index r = std::min(2 * dr, dl);
  const MatrixXd q = thin_q(qr, 2 * dr, r);
  const MatrixXd rmat =
      qr.matrixQR().topRows(r).triangularView<Eigen::Upper>().toDenseMatrix();
  a[0] = q.topRows(dr).transpose();
  a[1] = q.bottomRows(dr).transpose();
  for (auto& prev : tensors_[k - 1]) prev = prev * rmat.transpose();
}

void Mps::canonicalize(int center) {
  const int n = site_count();
  if (center < 0 || center >= n) throw ConfigError("canonicalize: center out of range");
  for (int k = std::min(center_, center); k < center; ++k) left_qr_step(k);
  for (int k = std::max(center_, center); k > center; --k) right_qr_step(k);
  center_ = center;
}

double Mps::overlap(const Mps& other) const {
  if (other.site_count() != site_count()) throw ShapeError("overlap: site counts differ");
  MatrixXd env = MatrixXd::Ones(1, 1);
  for (int k = 0; k < site_count(); ++k) {
    const auto& a = tensors_[k];
    const auto& b = other.tensors_[k];
    env = a[0].transpose() * env * b[0] + a[1].transpose() * env * b[1];
  }
  return env(0, 0);
}

double Mps::norm_squared() const { return overlap(*this); }

void Mps::normalize() {
  const double n2 = norm_squared();
  if (n2 <= 0.0) throw SolverError("cannot normalize a zero MPS");
  const double s = 1.0 / std::sqrt(n2);
  for (auto& m : tensors_[center_]) m *= s;
}

double Mps::isometry_error(int site, bool left) const {
  const auto& a = tensors_.at(site);
  MatrixXd g = left ? MatrixXd(a[0].transpose() * a[0] + a[1].transpose() * a[1])
                    : MatrixXd(a[0] * a[0].transpose() + a[1] * a[1].transpose());
  g -= MatrixXd::Identity(g.rows(), g.cols());
  return g.cwiseAbs().maxCoeff();
}

DenseState mps_to_dense(const Mps& state) {
  const int n = state.site_count();
  if (n > 20) throw ConfigError("mps_to_dense: at most 20 sites");
  MatrixXd psi = MatrixXd::Ones(1, 1);  // rows: configurations so far
  for (int k = 0; k < n; ++k) {
    const auto& a = state.site(k);
    const MatrixXd p0 = psi * a[0];
    const MatrixXd p1 = psi * a[1];
    MatrixXd next(2 * psi.rows(), a[0].cols());
    for (Eigen::Index r = 0; r < psi.rows(); ++r) {
      next.row(2 * r) = p0.row(r);
      next.row(2 * r + 1) = p1.row(r);
    }
    psi = std::move(next);
  }
  DenseState out;
  out.site_count = n;
  out.amplitudes.assign(psi.data(), psi.data() + psi.rows());
  return out;
}

// ---------------------------------------------------------------- Mpo

int Mpo::max_bond_dim() const {
  int m = 1;
  for (const auto& s : sites) m = std::max(m, s.right_dim);
  return m;
}

Mpo build_mpo(const TermList& terms, int site_count) {
  const int n = site_count;
  if (n < 1) throw ConfigError("build_mpo: need at least one site");

  struct Channel {
    int site;
    SpinOp op;
    auto operator<=>(const Channel&) const = default;
  };
  struct Ending {
    Channel from;
    int site;
    Matrix2d op;
  };

  std::vector<std::set<Channel>> bond_channels(std::max(n - 1, 0));
  std::vector<Ending> endings;
  for (const auto& t : terms.two_site) {
    int i = t.i, j = t.j;
    SpinOp oi = t.op_i, oj = t.op_j;
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
      throw ConfigError("build_mpo: bad two-site term indices");
    }
    if (i > j) {
      std::swap(i, j);
      std::swap(oi, oj);
    }
    const int ys = (oi == SpinOp::kY) + (oj == SpinOp::kY);
    if (ys == 1) throw ConfigError("build_mpo: lone Sy in a two-site term");
    const double coeff = ys == 2 ? -t.coeff : t.coeff;
    const Channel ch{i, oi};
    for (int b = i; b < j; ++b) bond_channels[b].insert(ch);
    endings.push_back({ch, j, coeff * op_matrix(oj)});
  }

  // bond index of each state: start = 0, channels 1..m, done = m + 1
  std::vector<std::map<Channel, int>> index(bond_channels.size());
  for (std::size_t b = 0; b < bond_channels.size(); ++b) {
    int next = 1;
    for (const auto& ch : bond_channels[b]) index[b][ch] = next++;
  }
  auto dim = [&](int b) { return static_cast<int>(bond_channels[b].size()) + 2; };

  Mpo mpo;
  mpo.sites.resize(n);
  for (int k = 0; k < n; ++k) {
    MpoSite& w = mpo.sites[k];
    w.left_dim = k == 0 ? 1 : dim(k - 1);
    w.right_dim = k == n - 1 ? 1 : dim(k);
    const int left_start = 0;
    const int left_done = k == 0 ? -1 : w.left_dim - 1;
    const int right_start = k == n - 1 ? -1 : 0;
    const int right_done = w.right_dim - 1;

    std::map<std::pair<int, int>, Matrix2d> acc;
    auto add = [&](int a, int b, const Matrix2d& op) {
      auto [it, inserted] = acc.try_emplace({a, b}, op);
      if (!inserted) it->second += op;
    };
    const Matrix2d id = Matrix2d::Identity();
    if (right_start >= 0) add(left_start, right_start, id);
    if (left_done >= 0) add(left_done, right_done, id);

    Matrix2d field = Matrix2d::Zero();
    bool has_field = false;
    for (const auto& t : terms.one_site) {
      if (t.site < 0 || t.site >= n) throw ConfigError("build_mpo: bad one-site index");
      if (t.op == SpinOp::kY) throw ConfigError("build_mpo: one-site Sy is not real");
      if (t.site == k) {
        field += t.coeff * op_matrix(t.op);
        has_field = true;
      }
    }
    if (has_field) add(left_start, right_done, field);

    if (k < n - 1) {
      for (const auto& [ch, idx] : index[k]) {
        if (ch.site == k) {
          add(left_start, idx, op_matrix(ch.op));
        } else {
          add(index[k - 1].at(ch), idx, id);
        }
      }
    }
    for (const auto& e : endings) {
      if (e.site == k) add(index[k - 1].at(e.from), right_done, e.op);
    }
    for (const auto& [key, op] : acc) w.entries.push_back({key.first, key.second, op});
  }
  return mpo;
}

Eigen::MatrixXd mpo_to_dense(const Mpo& mpo) {
  const int n = mpo.site_count();
  if (n > 12) throw ConfigError("mpo_to_dense: at most 12 sites");
  std::vector<MatrixXd> cur(1, MatrixXd::Ones(1, 1));
  for (const auto& w : mpo.sites) {
    const Eigen::Index d = cur[0].rows();
    std::vector<MatrixXd> next(w.right_dim, MatrixXd::Zero(2 * d, 2 * d));
    for (const auto& e : w.entries) {
      const MatrixXd& c = cur[e.left];
      MatrixXd& out = next[e.right];
      for (int so = 0; so < 2; ++so) {
        for (int si = 0; si < 2; ++si) {
          const double v = e.op(so, si);
          if (v == 0.0) continue;
          for (Eigen::Index j = 0; j < d; ++j) {
            for (Eigen::Index i = 0; i < d; ++i) out(2 * i + so, 2 * j + si) += v * c(i, j);
          }
        }
      }
    }
    cur = std::move(next);
  }
  return cur[0];
}

double mpo_expectation(const Mpo& mpo, const Mps& state) {
  if (mpo.site_count() != state.site_count()) {
    throw ShapeError("mpo_expectation: site counts differ");
  }
  Env env(1, MatrixXd::Ones(1, 1));
  for (int k = 0; k < state.site_count(); ++k) {
    env = update_left(env, state.site(k), mpo.sites[k]);
  }
  return env[0](0, 0) / state.norm_squared();
}

// ---------------------------------------------------------------- DMRG

namespace {

// Two-site effective Hamiltonian. Blocks of theta are indexed s1 * 2 + s2,
// each a (left bond x right bond) matrix.
class TwoSiteOperator {
 public:
  TwoSiteOperator(const Env& left, const Env& right, const MpoSite& w1,
                  const MpoSite& w2, Eigen::Index dl, Eigen::Index dr)
      : left_(left), right_(right), dl_(dl), dr_(dr) {
    std::map<std::pair<int, int>, Eigen::Matrix4d> groups;
    for (const auto& e1 : w1.entries) {
      for (const auto& e2 : w2.entries) {
        if (e2.left != e1.right) continue;
        Eigen::Matrix4d k;
        for (int t1 = 0; t1 < 2; ++t1)
          for (int t2 = 0; t2 < 2; ++t2)
            for (int s1 = 0; s1 < 2; ++s1)
              for (int s2 = 0; s2 < 2; ++s2)
                k(t1 * 2 + t2, s1 * 2 + s2) = e1.op(t1, s1) * e2.op(t2, s2);
        auto [it, inserted] = groups.try_emplace({e1.left, e2.right}, k);
        if (!inserted) it->second += k;
      }
    }
    for (const auto& [key, k] : groups) paths_.push_back({key.first, key.second, k});
    std::set<int> as, cs;
    for (const auto& p : paths_) {
      as.insert(p.a);
      cs.insert(p.c);
    }
    used_a_.assign(as.begin(), as.end());
    used_c_.assign(cs.begin(), cs.end());
  }

  Eigen::Index dim() const { return 4 * dl_ * dr_; }

  void apply(std::span<const double> in, std::span<double> out) const {
    const Eigen::Index block = dl_ * dr_;
    std::vector<std::array<MatrixXd, 4>> t1(left_.size());
    for (int a : used_a_) {
      for (int s = 0; s < 4; ++s) {
        Eigen::Map<const MatrixXd> th(in.data() + s * block, dl_, dr_);
        t1[a][s].noalias() = left_[a] * th;
      }
    }
    std::vector<std::array<MatrixXd, 4>> y(right_.size());
    for (int c : used_c_) {
      for (auto& m : y[c]) m = MatrixXd::Zero(dl_, dr_);
    }
    for (const auto& p : paths_) {
      for (int t = 0; t < 4; ++t) {
        for (int s = 0; s < 4; ++s) {
          const double v = p.k(t, s);
          if (v != 0.0) y[p.c][t] += v * t1[p.a][s];
        }
      }
    }
    for (int t = 0; t < 4; ++t) {
      Eigen::Map<MatrixXd> o(out.data() + t * block, dl_, dr_);
      o.setZero();
      for (int c : used_c_) o.noalias() += y[c][t] * right_[c].transpose();
    }
  }

 private:
  struct Path {
    int a;
    int c;
    Eigen::Matrix4d k;
  };
  const Env& left_;
  const Env& right_;
  Eigen::Index dl_;
  Eigen::Index dr_;
  std::vector<Path> paths_;
  std::vector<int> used_a_;
  std::vector<int> used_c_;
};

}  // namespace

DmrgResult dmrg_ground(const Mpo& mpo, const DmrgOptions& opts) {
  const int n = mpo.site_count();
  if (n < 2) throw ConfigError("dmrg needs at least two sites");
  if (opts.chi_max < 2) throw ConfigError("dmrg: chi_max must be >= 2");
  if (opts.energy_tolerance <= 0.0) throw ConfigError("dmrg: energy_tolerance must be > 0");

  Mps psi = Mps::random(n, opts.chi_max, opts.seed);
  std::vector<Env> left(n), right(n);
  left[0] = Env(1, MatrixXd::Ones(1, 1));
  right[n - 1] = Env(1, MatrixXd::Ones(1, 1));
  for (int k = n - 2; k >= 0; --k) {
    right[k] = update_right(right[k + 1], psi.site(k + 1), mpo.sites[k + 1]);
  }

  DmrgResult result;
  double energy = 0.0;
  double previous_sweep = std::numeric_limits<double>::infinity();

  auto optimize = [&](int k, bool moving_right) {
    auto& a = psi.site(k);
    auto& b = psi.site(k + 1);
    const Eigen::Index dl = a[0].rows();
    const Eigen::Index dr = b[0].cols();
    const Eigen::Index block = dl * dr;
    std::vector<double> theta(4 * block);
    for (int s1 = 0; s1 < 2; ++s1) {
      for (int s2 = 0; s2 < 2; ++s2) {
        Eigen::Map<MatrixXd>(theta.data() + (s1 * 2 + s2) * block, dl, dr) = a[s1] * b[s2];
      }
    }
    const TwoSiteOperator heff(left[k], right[k + 1], mpo.sites[k], mpo.sites[k + 1], dl, dr);
    const LanczosResult local = lanczos_ground(
        [&heff](std::span<const double> in, std::span<double> out) { heff.apply(in, out); },
        theta.size(), opts.local, theta);
    energy = local.energy;

    MatrixXd m(2 * dl, 2 * dr);
    for (int s1 = 0; s1 < 2; ++s1) {
      for (int s2 = 0; s2 < 2; ++s2) {
        m.block(s1 * dl, s2 * dr, dl, dr) =
            Eigen::Map<const MatrixXd>(local.vector.data() + (s1 * 2 + s2) * block, dl, dr);
      }
    }
    Eigen::BDCSVD<MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    Eigen::Index keep = 0;
    while (keep < sv.size() && sv(keep) > opts.svd_cutoff * sv(0)) ++keep;
    keep = std::clamp<Eigen::Index>(keep, 1, opts.chi_max);
    const double total = sv.squaredNorm();
    const double kept = sv.head(keep).squaredNorm();
    result.max_truncation_error = std::max(result.max_truncation_error, 1.0 - kept / total);
    const Eigen::VectorXd s = sv.head(keep) / std::sqrt(kept);
    const MatrixXd u = svd.matrixU().leftCols(keep);
    const MatrixXd vt = svd.matrixV().leftCols(keep).transpose();
    if (moving_right) {
      a[0] = u.topRows(dl);
      a[1] = u.bottomRows(dl);
      const MatrixXd svt = s.asDiagonal() * vt;
      b[0] = svt.leftCols(dr);
      b[1] = svt.rightCols(dr);
      left[k + 1] = update_left(left[k], a, mpo.sites[k]);
      psi.set_center(k + 1);
    } else {
      const MatrixXd us = u * s.asDiagonal();
      a[0] = us.topRows(dl);
      a[1] = us.bottomRows(dl);
      b[0] = vt.leftCols(dr);
      b[1] = vt.rightCols(dr);
      right[k] = update_right(right[k + 1], b, mpo.sites[k + 1]);
      psi.set_center(k);
    }
  };

  // Half-sweeps end on an edge bond, where the two-site block is exact, so
  // the recorded energy is the Rayleigh quotient of the stored state. Under
  // truncation it can drift up slightly, so the best state is kept.
  double best = std::numeric_limits<double>::infinity();
  Mps best_state;
  auto record = [&] {
    if (energy < best) {
      best = energy;
      best_state = psi;
    }
    result.half_sweep_energies.push_back(best);
  };
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    for (int k = 0; k <= n - 2; ++k) optimize(k, true);
    record();
    for (int k = n - 2; k >= 0; --k) optimize(k, false);
    record();
    result.sweeps = sweep + 1;
    if (std::abs(previous_sweep - energy) < opts.energy_tolerance) {
      result.converged = true;
      break;
    }
    previous_sweep = energy;
  }
  result.energy = best;
  result.state = std::move(best_state);
  return result;
}

}  // namespace hamlearn
