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

#ifndef HAMLEARN_LATTICE_HPP
#define HAMLEARN_LATTICE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hamlearn/error.hpp"

namespace hamlearn {

enum class LatticeKind { kChain, kGrid };
enum class Boundary { kPeriodic, kOpen };

/// Unordered nearest-neighbour pair, stored with a < b.
struct Edge {
  int a = 0;
  int b = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Column-by-column boustrophedon ordering of a rows x cols grid. Even
/// columns run top to bottom, odd columns bottom to top.
class SnakeOrder {
 public:
  SnakeOrder(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int to_chain(int row, int col) const;
  std::pair<int, int> to_grid(int index) const;

 private:
  int rows_;
  int cols_;
};

class Lattice {
 public:
  static Lattice chain(int length, Boundary boundary);
  static Lattice grid(int rows, int cols, Boundary boundary);

  LatticeKind kind() const { return kind_; }
  Boundary boundary() const { return boundary_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int site_count() const { return rows_ * cols_; }

  /// Nearest-neighbour pairs in chain positions (snake order for grids),
  /// deduplicated and sorted by (min, max).
  std::vector<Edge> edges() const;

  std::string describe() const;

 private:
  Lattice(LatticeKind kind, int rows, int cols, Boundary boundary);

  LatticeKind kind_;
  int rows_;
  int cols_;
  Boundary boundary_;
};

inline std::vector<Edge> enumerate_edges(const Lattice& lattice) {
  return lattice.edges();
}

enum class Family { kQim, kXxz, kXy };

std::string_view family_name(Family family);
Family parse_family(std::string_view name);
/// "h" for QIM and XY, "Jz" for XXZ.
std::string_view param_name(Family family);

struct ModelSpec {
  Family family = Family::kQim;
  Lattice lattice = Lattice::chain(4, Boundary::kPeriodic);
  double param = 0.0;    // h (QIM, XY) or J_z (XXZ)
  double coupling = 1.0;  // J, the energy scale
};

enum class SpinOp { kX, kY, kZ };

struct TwoSiteTerm {
  int i = 0;
  int j = 0;
  SpinOp op_i = SpinOp::kZ;
  SpinOp op_j = SpinOp::kZ;
  double coeff = 0.0;
};

struct OneSiteTerm {
  int site = 0;
  SpinOp op = SpinOp::kZ;
  double coeff = 0.0;
};

/// Spin-1/2 Hamiltonian as explicit operator terms, S = sigma / 2.
struct TermList {
  int site_count = 0;
  std::vector<TwoSiteTerm> two_site;
  std::vector<OneSiteTerm> one_site;
};

/// QIM:  J sum Sz Sz - h sum Sx
/// XXZ:  sum (Sx Sx + Sy Sy + Jz Sz Sz)
/// XY:   sum (Sx Sx + Sy Sy) + h sum Sz
TermList build_terms(const ModelSpec& spec);

/// Matrix-free H v in the S^z basis. Site 0 is the most significant bit of
/// the configuration index and bit value 0 is spin up. Y operators only
/// appear in YY pairs, which are real in this basis.
class HamiltonianOperator {
 public:
  explicit HamiltonianOperator(const TermList& terms);

  std::size_t dim() const { return diagonal_.size(); }
  int site_count() const { return site_count_; }

  void apply(std::span<const double> v, std::span<double> out) const;

 private:
  // out[c ^ mask] += amp * (-1)^popcount(c & sign_mask) * v[c]
  struct FlipTerm {
    std::uint64_t mask;
    std::uint64_t sign_mask;
    double amp;
  };

  int site_count_;
  std::vector<double> diagonal_;
  std::vector<FlipTerm> flips_;
};

std::vector<double> apply_hamiltonian(const TermList& terms,
                                      std::span<const double> v);

}  // namespace hamlearn

#endif  // HAMLEARN_LATTICE_HPP
