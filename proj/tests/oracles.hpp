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

#ifndef HAMLEARN_TESTS_ORACLES_HPP
#define HAMLEARN_TESTS_ORACLES_HPP

// Independent reference computations for the test suites. Nothing in here
// may call into the code paths it is used to check.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>
#include <random>
#include <vector>

#include "hamlearn/lattice.hpp"

namespace hamlearn::oracle {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;

inline MatrixXcd spin_matrix(SpinOp op) {
  using C = std::complex<double>;
  MatrixXcd m(2, 2);
  switch (op) {
    case SpinOp::kX:
      m << C(0, 0), C(0.5, 0), C(0.5, 0), C(0, 0);
      break;
    case SpinOp::kY:
      m << C(0, 0), C(0, -0.5), C(0, 0.5), C(0, 0);
      break;
    case SpinOp::kZ:
      m << C(0.5, 0), C(0, 0), C(0, 0), C(-0.5, 0);
      break;
  }
  return m;
}

inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Operator string I x ... x op_k x ... built left (site 0) to right.
inline MatrixXcd embed(int n, const std::vector<std::pair<int, MatrixXcd>>& ops) {
  MatrixXcd out = MatrixXcd::Identity(1, 1);
  for (int k = 0; k < n; ++k) {
    MatrixXcd local = MatrixXcd::Identity(2, 2);
    for (const auto& [site, m] : ops) {
      if (site == k) local = m;
    }
    out = kron(out, local);
  }
  return out;
}

/// Dense Hamiltonian from tensor products with the genuine (complex) Sy.
/// Small systems use explicit Kronecker products; larger ones fill the same
/// matrix elementwise as products of local 2x2 entries. Returns the real part
/// after checking the imaginary part vanishes.
inline MatrixXd kron_hamiltonian(const TermList& terms) {
  const int n = terms.site_count;
  const Eigen::Index d = Eigen::Index{1} << n;
  MatrixXcd h = MatrixXcd::Zero(d, d);
  if (n <= 8) {
    for (const auto& t : terms.two_site) {
      h += t.coeff * embed(n, {{t.i, spin_matrix(t.op_i)}, {t.j, spin_matrix(t.op_j)}});
    }
    for (const auto& t : terms.one_site) {
      h += t.coeff * embed(n, {{t.site, spin_matrix(t.op)}});
    }
  } else {
    auto bit = [n](Eigen::Index c, int site) { return (c >> (n - 1 - site)) & 1; };
    auto flip = [n](Eigen::Index c, int site) { return c ^ (Eigen::Index{1} << (n - 1 - site)); };
    for (Eigen::Index col = 0; col < d; ++col) {
      for (const auto& t : terms.two_site) {
        const MatrixXcd a = spin_matrix(t.op_i);
        const MatrixXcd b = spin_matrix(t.op_j);
        for (int fi = 0; fi < 2; ++fi) {
          for (int fj = 0; fj < 2; ++fj) {
            Eigen::Index row = col;
            if (fi) row = flip(row, t.i);
            if (fj) row = flip(row, t.j);
            h(row, col) += t.coeff * a(bit(row, t.i), bit(col, t.i)) * b(bit(row, t.j), bit(col, t.j));
          }
        }
      }
      for (const auto& t : terms.one_site) {
        const MatrixXcd a = spin_matrix(t.op);
        for (int f = 0; f < 2; ++f) {
          const Eigen::Index row = f ? flip(col, t.site) : col;
          h(row, col) += t.coeff * a(bit(row, t.site), bit(col, t.site));
        }
      }
    }
  }
  if (h.imag().cwiseAbs().maxCoeff() > 1e-14) {
    throw std::runtime_error("oracle Hamiltonian is not real");
  }
  return h.real();
}

inline double dense_ground_energy(const MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Partial trace by explicit summation over every configuration pair.
inline MatrixXd partial_trace(const std::vector<double>& psi, int n,
                              const std::vector<int>& keep) {
  const std::size_t d = std::size_t{1} << keep.size();
  MatrixXd rho = MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  auto bit = [n](std::size_t c, int site) { return (c >> (n - 1 - site)) & 1u; };
  for (std::size_t c = 0; c < psi.size(); ++c) {
    for (std::size_t cp = 0; cp < psi.size(); ++cp) {
      bool same_rest = true;
      for (int s = 0; s < n && same_rest; ++s) {
        bool kept = false;
        for (int k : keep) kept |= (k == s);
        if (!kept && bit(c, s) != bit(cp, s)) same_rest = false;
      }
      if (!same_rest) continue;
      std::size_t i = 0, ip = 0;
      for (int k : keep) {
        i = (i << 1) | bit(c, k);
        ip = (ip << 1) | bit(cp, k);
      }
      rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(ip)) += psi[c] * psi[cp];
    }
  }
  return rho;
}

inline std::vector<double> random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(std::size_t{1} << n);
  double s = 0.0;
  for (double& x : v) {
    x = g(rng);
    s += x * x;
  }
  for (double& x : v) x /= std::sqrt(s);
  return v;
}

}  // namespace hamlearn::oracle

#endif  // HAMLEARN_TESTS_ORACLES_HPP
