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

#include "hamlearn/lanczos.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <sstream>

#include "hamlearn/simd/kernels.hpp"

namespace hamlearn {
namespace {

double norm(std::span<const double> v) {
  return std::sqrt(simd::dot(v.data(), v.data(), v.size()));
}

void scale(std::span<double> v, double s) {
  for (double& x : v) x *= s;
}

}  // namespace

double DenseState::norm_squared() const {
  return simd::dot(amplitudes.data(), amplitudes.data(), amplitudes.size());
}

LanczosResult lanczos_ground(const LinearOperator& apply, std::size_t dim,
                             const LanczosOptions& opts,
                             std::span<const double> start) {
  if (dim == 0) throw ConfigError("lanczos: empty operator");
  if (opts.tolerance <= 0.0) throw ConfigError("lanczos: tolerance must be > 0");
  if (opts.krylov_dim < 2) throw ConfigError("lanczos: krylov_dim must be >= 2");

  std::vector<double> v(dim);
  if (!start.empty()) {
    if (start.size() != dim) throw ShapeError("lanczos: start vector size");
    std::copy(start.begin(), start.end(), v.begin());
  }
  if (start.empty() || norm(v) == 0.0) {
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double& x : v) x = gauss(rng);
  }
  scale(v, 1.0 / norm(v));

  const std::size_t max_basis =
      std::min<std::size_t>(static_cast<std::size_t>(opts.krylov_dim), dim);
  std::vector<std::vector<double>> basis;
  basis.reserve(max_basis);
  std::vector<double> w(dim);
  std::vector<double> hv(dim);
  int iterations = 0;
  double best_residual = std::numeric_limits<double>::infinity();
  LanczosResult best;

  while (true) {
    basis.clear();
    basis.push_back(v);
    std::vector<double> alpha;
    std::vector<double> beta;
    Eigen::VectorXd ritz_coeffs;
    double theta = 0.0;

    for (std::size_t j = 0;; ++j) {
      apply(basis[j], w);
      ++iterations;
      const double a = simd::dot(basis[j].data(), w.data(), dim);
      alpha.push_back(a);
      // Full reorthogonalization (twice is enough) replaces the three-term
      // recurrence subtraction.
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : basis) {
          const double c = simd::dot(q.data(), w.data(), dim);
          simd::axpy(-c, q.data(), w.data(), dim);
        }
      }
      const double b = norm(w);

      const Eigen::Index m = static_cast<Eigen::Index>(alpha.size());
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd sub(m > 1 ? m - 1 : 1);
      for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = beta[i];
      if (m == 1) {
        theta = diag(0);
        ritz_coeffs = Eigen::VectorXd::Ones(1);
      } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(diag, sub.head(m - 1), Eigen::ComputeEigenvectors);
        theta = tri.eigenvalues()(0);
        ritz_coeffs = tri.eigenvectors().col(0);
      }
      const double estimate = b * std::abs(ritz_coeffs(m - 1));
      const bool invariant = b <= 1e-13 * std::max(1.0, std::abs(theta));
      if (invariant || estimate < 0.1 * opts.tolerance ||
          basis.size() == max_basis ||
          iterations >= opts.max_iterations) {
        break;
      }
      beta.push_back(b);
      scale(w, 1.0 / b);
      basis.push_back(w);
    }

    std::vector<double> ritz(dim, 0.0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      simd::axpy(ritz_coeffs(static_cast<Eigen::Index>(i)), basis[i].data(),
                 ritz.data(), dim);
    }
    scale(ritz, 1.0 / norm(ritz));
    apply(ritz, hv);
    ++iterations;
    const double energy = simd::dot(ritz.data(), hv.data(), dim);
    simd::axpy(-energy, ritz.data(), hv.data(), dim);
    const double residual = norm(hv);
    if (residual < best_residual) {
      best_residual = residual;
      best.energy = energy;
      best.vector = ritz;
      best.residual = residual;
    }
    if (residual <= opts.tolerance) {
      best.iterations = iterations;
      return best;
    }
    if (iterations >= opts.max_iterations) {
      if (!opts.throw_on_failure) {
        best.iterations = iterations;
        best.converged = false;
        return best;
      }
      std::ostringstream os;
      os << "lanczos did not converge after " << iterations
         << " iterations (best residual " << best_residual << ")";
      throw ConvergenceError(os.str(), best_residual);
    }
    v = std::move(ritz);
  }
}

GroundState ed_ground(const TermList& terms, const LanczosOptions& opts) {
  const HamiltonianOperator op(terms);
  auto result = lanczos_ground(
      [&op](std::span<const double> in, std::span<double> out) { op.apply(in, out); },
      op.dim(), opts);
  GroundState g;
  g.energy = result.energy;
  g.state.site_count = terms.site_count;
  g.state.amplitudes = std::move(result.vector);
  return g;
}

}  // namespace hamlearn
