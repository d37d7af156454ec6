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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hamlearn/error.hpp"
#include "hamlearn/rdm.hpp"
#include "oracles.hpp"

using namespace hamlearn;
using Eigen::MatrixXd;

namespace {

DenseState basis(int n, std::vector<std::pair<std::size_t, double>> entries) {
  DenseState s{n, std::vector<double>(std::size_t{1} << n, 0.0)};
  for (auto [c, a] : entries) s.amplitudes[c] = a;
  return s;
}

void expect_valid_rdm(const Rdm& r) {
  EXPECT_NEAR(r.trace(), 1.0, 1e-10);
  EXPECT_LE((r.rho - r.rho.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(r.rho, Eigen::EigenvaluesOnly);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
  EXPECT_GE(r.purity(), std::pow(2.0, -r.site_count) - 1e-12);
  EXPECT_LE(r.purity(), 1.0 + 1e-12);
}

}  // namespace

TEST(RdmDense, ProductState) {
  // |up down>: site 1 carries bit 1
  const Rdm r = rdm_dense(basis(2, {{1, 1.0}}), {{0}});
  EXPECT_EQ(r.site_count, 1);
  EXPECT_NEAR(r.rho(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(r.rho(1, 1), 0.0, 1e-15);
  EXPECT_NEAR(r.rho(0, 1), 0.0, 1e-15);
}

TEST(RdmDense, BellState) {
  const double a = 1.0 / std::sqrt(2.0);
  const Rdm r = rdm_dense(basis(2, {{0, a}, {3, a}}), {{0}});
  EXPECT_NEAR(r.rho(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(r.rho(1, 1), 0.5, 1e-15);
  EXPECT_NEAR(r.rho(0, 1), 0.0, 1e-15);
}

TEST(RdmDense, GhzMiddlePair) {
  const double a = 1.0 / std::sqrt(2.0);
  const Rdm r = rdm_dense(basis(4, {{0, a}, {15, a}}), {{1, 2}});
  MatrixXd expect = MatrixXd::Zero(4, 4);
  expect(0, 0) = expect(3, 3) = 0.5;
  EXPECT_LE((r.rho - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(RdmDense, WholeSystemIsProjector) {
  std::mt19937_64 rng(1);
  DenseState s{3, oracle::random_state(3, rng)};
  const Rdm r = rdm_dense(s, {{0, 1, 2}});
  EXPECT_NEAR(r.purity(), 1.0, 1e-12);
}

TEST(RdmDense, RejectsBadSubsystems) {
  DenseState s = basis(3, {{0, 1.0}});
  EXPECT_THROW(rdm_dense(s, {{0, 0}}), ConfigError);
  EXPECT_THROW(rdm_dense(s, {{3}}), ConfigError);
  EXPECT_THROW(rdm_dense(s, {{}}), ConfigError);
}

TEST(RdmDense, InvariantsAndOracleOnRandomStates) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> size(2, 8);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = size(rng);
    DenseState s{n, oracle::random_state(n, rng)};
    std::vector<int> all(n);
    for (int k = 0; k < n; ++k) all[k] = k;
    std::shuffle(all.begin(), all.end(), rng);
    const int lb = std::uniform_int_distribution<int>(1, std::min(n, 4))(rng);
    std::vector<int> keep(all.begin(), all.begin() + lb);
    const Rdm r = rdm_dense(s, {keep});
    expect_valid_rdm(r);
    EXPECT_LE((r.rho - oracle::partial_trace(s.amplitudes, n, keep)).cwiseAbs().maxCoeff(), 1e-12);
    DenseState neg = s;
    for (double& x : neg.amplitudes) x = -x;
    EXPECT_EQ(rdm_dense(neg, {keep}).rho, r.rho);
  }
}

TEST(Subsystem, Placement) {
  EXPECT_EQ(middle_block(16, 6).sites, (std::vector<int>{5, 6, 7, 8, 9, 10}));
  EXPECT_EQ(middle_block(12, 4).sites, (std::vector<int>{4, 5, 6, 7}));
  EXPECT_EQ(middle_block(64, 8).sites.front(), 28);
  const SubsystemSpec g = grid_middle_block(4, 16);
  EXPECT_EQ(g.size(), 8);
  EXPECT_TRUE(g.contiguous());
  EXPECT_EQ(g.sites.front(), 28);
  EXPECT_EQ(g.sites.back(), 35);
  EXPECT_THROW(middle_block(4, 6), ConfigError);
}

TEST(RdmMps, ProductStateIsPure) {
  const Rdm r = rdm_mps(Mps::product(std::vector<int>{0, 1, 1, 0, 1}), {{1, 2, 3}});
  EXPECT_NEAR(r.purity(), 1.0, 1e-12);
  EXPECT_NEAR(r.rho(6, 6), 1.0, 1e-12);  // bits 1,1,0
}

TEST(RdmMps, MatchesDensePathOnDmrgState) {
  const TermList t = build_terms({Family::kQim, Lattice::chain(12, Boundary::kPeriodic), 0.5});
  const auto g = dmrg_ground(build_mpo(t, 12), DmrgOptions{});
  const SubsystemSpec sub = middle_block(12, 4);
  const Rdm via_mps = rdm_mps(g.state, sub);
  const Rdm via_dense = rdm_dense(mps_to_dense(g.state), sub);
  expect_valid_rdm(via_mps);
  EXPECT_LE((via_mps.rho - via_dense.rho).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(RdmMps, MatchesDensePathOnRandomMps) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Mps m = Mps::random(10, 8, seed);
    const DenseState d = mps_to_dense(m);
    for (int start : {0, 3, 7}) {
      const SubsystemSpec sub{{start, start + 1, start + 2}};
      const Rdm a = rdm_mps(m, sub);
      expect_valid_rdm(a);
      EXPECT_LE((a.rho - rdm_dense(d, sub).rho).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(RdmMps, RejectsNonContiguousBlock) {
  EXPECT_THROW(rdm_mps(Mps::random(6, 4, 1), {{1, 3}}), ConfigError);
}

TEST(Purify, MaximallyMixedQubit) {
  Rdm r{1, MatrixXd::Identity(2, 2) * 0.5};
  const DenseState p = purify(r);
  EXPECT_EQ(p.site_count, 2);
  EXPECT_EQ(p.amplitudes, (std::vector<double>{0.5, 0, 0, 0.5}));
  EXPECT_NEAR(p.norm_squared(), 0.5, 1e-15);
}

TEST(Purify, PureStateOuterProduct) {
  std::mt19937_64 rng(4);
  const auto psi = oracle::random_state(2, rng);
  Rdm r{2, MatrixXd::Zero(4, 4)};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.rho(i, j) = psi[i] * psi[j];
  const DenseState p = purify(r);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      EXPECT_NEAR(p.amplitudes[purified_index(i, j, 2, PurifyOrdering::kInterleaved)],
                  psi[i] * psi[j], 1e-15);
  EXPECT_NEAR(p.norm_squared(), 1.0, 1e-12);
}

TEST(Purify, DiagonalTwoQubit) {
  Rdm r{2, MatrixXd::Zero(4, 4)};
  r.rho(0, 0) = r.rho(3, 3) = 0.5;
  const DenseState p = purify(r);
  EXPECT_EQ(p.site_count, 4);
  // interleave(00, 00) = 0000, interleave(11, 11) = 1111
  EXPECT_EQ(p.amplitudes[0], 0.5);
  EXPECT_EQ(p.amplitudes[15], 0.5);
  double rest = 0;
  for (std::size_t c = 1; c < 15; ++c) rest += std::abs(p.amplitudes[c]);
  EXPECT_EQ(rest, 0.0);
}

TEST(Purify, IndexOrderings) {
  // i = 10, i' = 01 -> interleaved 1001, concatenated 1001 (b=2); i=11,i'=00
  EXPECT_EQ(purified_index(0b10, 0b01, 2, PurifyOrdering::kInterleaved), 0b1001u);
  EXPECT_EQ(purified_index(0b11, 0b00, 2, PurifyOrdering::kInterleaved), 0b1010u);
  EXPECT_EQ(purified_index(0b11, 0b00, 2, PurifyOrdering::kConcatenated), 0b1100u);
  EXPECT_EQ(parse_ordering("concatenated"), PurifyOrdering::kConcatenated);
  EXPECT_EQ(ordering_name(PurifyOrdering::kInterleaved), "interleaved");
  EXPECT_THROW(parse_ordering("zigzag"), ConfigError);
}

TEST(Purify, PartialTraceGivesRhoSquared) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int lb = 1 + trial % 3;
    DenseState s{lb + 3, oracle::random_state(lb + 3, rng)};
    std::vector<int> keep(lb);
    for (int k = 0; k < lb; ++k) keep[k] = k + 1;
    const Rdm r = rdm_dense(s, {keep});
    for (PurifyOrdering o : {PurifyOrdering::kInterleaved, PurifyOrdering::kConcatenated}) {
      const DenseState p = purify(r, o);
      EXPECT_NEAR(p.norm_squared(), r.purity(), 1e-10);
      std::vector<int> rows(lb);
      for (int k = 0; k < lb; ++k) rows[k] = o == PurifyOrdering::kInterleaved ? 2 * k : k;
      const MatrixXd traced = oracle::partial_trace(p.amplitudes, 2 * lb, rows);
      EXPECT_LE((traced - r.rho * r.rho).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Purify, RejectsZeroMatrix) {
  EXPECT_THROW(purify(Rdm{1, MatrixXd::Zero(2, 2)}), ConfigError);
}

TEST(GaugeFix, FlipsNegativeLeader) {
  const DenseState g = gauge_fix(basis(2, {{0, -1.0}}));
  EXPECT_EQ(g.amplitudes[0], 1.0);
}

TEST(GaugeFix, TiesPickLowestIndex) {
  const DenseState g = gauge_fix(basis(2, {{1, -0.5}, {2, 0.5}}));
  EXPECT_EQ(g.amplitudes[1], 0.5);
  EXPECT_EQ(g.amplitudes[2], -0.5);
}

TEST(GaugeFix, SignInvariantAndIdempotent) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    DenseState s{5, oracle::random_state(5, rng)};
    DenseState neg = s;
    for (double& x : neg.amplitudes) x = -x;
    const DenseState g = gauge_fix(s);
    EXPECT_EQ(g.amplitudes, gauge_fix(neg).amplitudes);
    EXPECT_EQ(gauge_fix(g).amplitudes, g.amplitudes);
  }
}
