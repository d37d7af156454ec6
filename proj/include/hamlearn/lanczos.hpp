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

#ifndef HAMLEARN_LANCZOS_HPP
#define HAMLEARN_LANCZOS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hamlearn/error.hpp"
#include "hamlearn/lattice.hpp"

namespace hamlearn {

/// Normalized many-body amplitudes, site 0 as the most significant bit.
struct DenseState {
  int site_count = 0;
  std::vector<double> amplitudes;

  double norm_squared() const;
};

struct LanczosOptions {
  int max_iterations = 3000;  // total matrix-vector products
  int krylov_dim = 100;       // basis size before a restart
  double tolerance = 1e-9;    // on ||H psi - E psi||
  std::uint64_t seed = 12345;
  // When false, non-convergence returns the best Ritz pair with
  // converged = false instead of throwing.
  bool throw_on_failure = true;
};

class ConvergenceError : public SolverError {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : SolverError(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

using LinearOperator =
    std::function<void(std::span<const double>, std::span<double>)>;

struct LanczosResult {
  double energy = 0.0;
  std::vector<double> vector;
  double residual = 0.0;
  int iterations = 0;
  bool converged = true;
};

/// Lowest eigenpair of a symmetric operator. Restarted Lanczos with full
/// reorthogonalization; the start vector is seeded Gaussian noise unless
/// `start` is given. Throws ConvergenceError after max_iterations.
LanczosResult lanczos_ground(const LinearOperator& apply, std::size_t dim,
                             const LanczosOptions& opts,
                             std::span<const double> start = {});

struct GroundState {
  double energy = 0.0;
  DenseState state;
};

/// Exact diagonalization of a term list.
GroundState ed_ground(const TermList& terms, const LanczosOptions& opts);

}  // namespace hamlearn

#endif  // HAMLEARN_LANCZOS_HPP
