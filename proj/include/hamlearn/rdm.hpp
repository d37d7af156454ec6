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

#ifndef HAMLEARN_RDM_HPP
#define HAMLEARN_RDM_HPP

#include <Eigen/Core>
#include <string_view>
#include <vector>

#include "hamlearn/lanczos.hpp"
#include "hamlearn/mps.hpp"

namespace hamlearn {

/// Kept sites in chain positions. The first listed site is the most
/// significant bit of the block index i.
struct SubsystemSpec {
  std::vector<int> sites;
  int size() const { return static_cast<int>(sites.size()); }
  bool contiguous() const;
};

/// Sites floor(L/2) - Lb/2 ... floor(L/2) + Lb/2 - 1 of a chain.
SubsystemSpec middle_block(int length, int block_size);

/// The two central columns of a snake-ordered grid (all rows), which are
/// contiguous in chain order.
SubsystemSpec grid_middle_block(int rows, int cols);

struct Rdm {
  int site_count = 0;
  Eigen::MatrixXd rho;  // 2^site_count square, symmetric

  double trace() const { return rho.trace(); }
  double purity() const { return rho.squaredNorm(); }  // Tr rho^2
};

Rdm rdm_dense(const DenseState& state, const SubsystemSpec& sub);

/// Environment contraction on a copy of `state`; the block must be
/// contiguous and ascending.
Rdm rdm_mps(const Mps& state, const SubsystemSpec& sub);

enum class PurifyOrdering {
  kInterleaved,   // i1 i'1 i2 i'2 ...: the Qubism image is rho itself
  kConcatenated,  // i1 i2 ... i'1 i'2 ...
};

std::string_view ordering_name(PurifyOrdering ordering);
PurifyOrdering parse_ordering(std::string_view name);

/// Configuration index of amplitude rho_{i i'} in the purified state.
std::size_t purified_index(std::size_t i, std::size_t i_prime, int block_size,
                           PurifyOrdering ordering);

/// |rho> = sum rho_{i i'} |i i'> on 2 Lb sites, not renormalized.
DenseState purify(const Rdm& rdm,
                  PurifyOrdering ordering = PurifyOrdering::kInterleaved);

/// Flips the global sign so the largest-magnitude amplitude (lowest index on
/// ties) is positive.
DenseState gauge_fix(DenseState state);

}  // namespace hamlearn

#endif  // HAMLEARN_RDM_HPP
