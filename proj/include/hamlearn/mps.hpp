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

#ifndef HAMLEARN_MPS_HPP
#define HAMLEARN_MPS_HPP

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "hamlearn/lanczos.hpp"
#include "hamlearn/lattice.hpp"

namespace hamlearn {

/// Open-boundary matrix product state of spin-1/2 sites. Site k holds one
/// (left bond x right bond) matrix per physical state, index 0 = up.
class Mps {
 public:
  using SiteTensor = std::array<Eigen::MatrixXd, 2>;

  Mps() = default;
  explicit Mps(std::vector<SiteTensor> tensors, int center = 0);

  /// Product state; bits[k] = 0 for up, 1 for down.
  static Mps product(std::span<const int> bits);
  /// Gaussian random state with bonds min(chi, 2^k, 2^(n-k)), normalized,
  /// right-canonical with the center at site 0.
  static Mps random(int site_count, int chi, std::uint64_t seed);
  /// Successive SVDs; exact when chi_max is unlimited.
  static Mps from_dense(const DenseState& state, int chi_max = 0,
                        double cutoff = 1e-14);

  int site_count() const { return static_cast<int>(tensors_.size()); }
  int center() const { return center_; }
  int bond_dim(int bond) const;  // bond k sits between sites k and k+1
  int max_bond_dim() const;

  const SiteTensor& site(int k) const { return tensors_[k]; }
  SiteTensor& site(int k) { return tensors_[k]; }

  /// Moves the orthogonality center with QR steps; sites left of it become
  /// left isometries, sites right of it right isometries.
  void canonicalize(int center);
  void normalize();
  /// Records the center without moving anything; the caller guarantees the
  /// tensors are already in that canonical form.
  void set_center(int center) { center_ = center; }
  double norm_squared() const;
  double overlap(const Mps& other) const;

  /// Largest deviation of sum_s A^T A (left) or A A^T (right) from identity.
  double isometry_error(int site, bool left) const;

 private:
  void left_qr_step(int k);
  void right_qr_step(int k);

  std::vector<SiteTensor> tensors_;
  int center_ = 0;
};

/// Matrix product operator stored as sparse automaton transitions.
struct MpoSite {
  struct Entry {
    int left = 0;
    int right = 0;
    Eigen::Matrix2d op;  // op(out, in)
  };
  int left_dim = 1;
  int right_dim = 1;
  std::vector<Entry> entries;
};

struct Mpo {
  std::vector<MpoSite> sites;

  int site_count() const { return static_cast<int>(sites.size()); }
  int bond_dim(int bond) const { return sites[bond].right_dim; }
  int max_bond_dim() const;
};

/// Finite-state-automaton MPO. Bond states are [start, channels, done],
/// one channel per (first site, operator) pair still waiting for its
/// partner, so terms of any range are supported.
Mpo build_mpo(const TermList& terms, int site_count);

/// Full contraction to a 2^n x 2^n matrix (testing, n <= 12).
Eigen::MatrixXd mpo_to_dense(const Mpo& mpo);

/// <psi|H|psi> / <psi|psi>.
double mpo_expectation(const Mpo& mpo, const Mps& state);

struct DmrgOptions {
  int chi_max = 64;
  int max_sweeps = 20;
  double energy_tolerance = 1e-9;
  double svd_cutoff = 1e-14;
  std::uint64_t seed = 2024;
  LanczosOptions local{400, 40, 1e-10, 0, false};
};

struct DmrgResult {
  double energy = 0.0;
  Mps state;
  bool converged = false;
  int sweeps = 0;
  std::vector<double> half_sweep_energies;
  double max_truncation_error = 0.0;
};

/// Two-site DMRG from a seeded random MPS. Stops when the energy change
/// over a full sweep drops below energy_tolerance.
DmrgResult dmrg_ground(const Mpo& mpo, const DmrgOptions& opts);

/// Full contraction; site_count must be <= 20.
DenseState mps_to_dense(const Mps& state);

}  // namespace hamlearn

#endif  // HAMLEARN_MPS_HPP
