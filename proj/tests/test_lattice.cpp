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

#include <random>

#include "hamlearn/lattice.hpp"
#include "oracles.hpp"

using namespace hamlearn;

TEST(Lattice, PeriodicChainEdges) {
  const auto edges = Lattice::chain(4, Boundary::kPeriodic).edges();
  const std::vector<Edge> expected{{0, 1}, {0, 3}, {1, 2}, {2, 3}};
  EXPECT_EQ(edges, expected);
}

TEST(Lattice, OpenChainEdges) {
  const auto edges = Lattice::chain(3, Boundary::kOpen).edges();
  const std::vector<Edge> expected{{0, 1}, {1, 2}};
  EXPECT_EQ(edges, expected);
}

TEST(Lattice, EdgeCounts) {
  for (int l = 3; l < 20; ++l) {
    EXPECT_EQ(Lattice::chain(l, Boundary::kPeriodic).edges().size(), static_cast<std::size_t>(l));
  }
  EXPECT_EQ(Lattice::grid(4, 16, Boundary::kPeriodic).edges().size(), 128u);
  EXPECT_EQ(Lattice::grid(4, 8, Boundary::kPeriodic).edges().size(), 64u);
  EXPECT_EQ(Lattice::grid(3, 3, Boundary::kPeriodic).edges().size(), 18u);
  EXPECT_EQ(Lattice::grid(2, 3, Boundary::kOpen).edges().size(), 7u);
}

TEST(Lattice, RejectsShortPeriodicExtent) {
  EXPECT_THROW(Lattice::chain(2, Boundary::kPeriodic), ConfigError);
  EXPECT_THROW(Lattice::grid(2, 8, Boundary::kPeriodic), ConfigError);
  EXPECT_NO_THROW(Lattice::chain(2, Boundary::kOpen));
}

TEST(Lattice, GridEdgesAreNearestNeighboursInSnakeOrder) {
  const Lattice lat = Lattice::grid(4, 6, Boundary::kPeriodic);
  const SnakeOrder snake(4, 6);
  for (const Edge& e : lat.edges()) {
    ASSERT_LT(e.a, e.b);
    auto [ra, ca] = snake.to_grid(e.a);
    auto [rb, cb] = snake.to_grid(e.b);
    const int dr = std::min(std::abs(ra - rb), 4 - std::abs(ra - rb));
    const int dc = std::min(std::abs(ca - cb), 6 - std::abs(ca - cb));
    EXPECT_EQ(dr + dc, 1);
  }
}

TEST(SnakeOrder, TwoByTwo) {
  const SnakeOrder s(2, 2);
  EXPECT_EQ(s.to_chain(0, 0), 0);
  EXPECT_EQ(s.to_chain(1, 0), 1);
  EXPECT_EQ(s.to_chain(1, 1), 2);
  EXPECT_EQ(s.to_chain(0, 1), 3);
}

TEST(SnakeOrder, MiddleColumnsOfFourBySixteen) {
  const SnakeOrder s(4, 16);
  std::vector<int> got;
  for (int c = 7; c <= 8; ++c)
    for (int r = 0; r < 4; ++r) got.push_back(s.to_chain(r, c));
  std::sort(got.begin(), got.end());
  for (int k = 0; k < 8; ++k) EXPECT_EQ(got[k], 28 + k);
}

TEST(SnakeOrder, Bijective) {
  for (int rows = 1; rows <= 5; ++rows) {
    for (int cols = 1; cols <= 7; ++cols) {
      const SnakeOrder s(rows, cols);
      std::vector<int> seen(rows * cols, 0);
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          const int k = s.to_chain(r, c);
          ASSERT_GE(k, 0);
          ASSERT_LT(k, rows * cols);
          ++seen[k];
          EXPECT_EQ(s.to_grid(k), std::make_pair(r, c));
        }
      }
      for (int v : seen) EXPECT_EQ(v, 1);
    }
  }
}

TEST(BuildTerms, QimChain64) {
  const ModelSpec spec{Family::kQim, Lattice::chain(64, Boundary::kPeriodic), 0.7};
  const TermList t = build_terms(spec);
  ASSERT_EQ(t.two_site.size(), 64u);
  ASSERT_EQ(t.one_site.size(), 64u);
  for (const auto& term : t.two_site) {
    EXPECT_EQ(term.op_i, SpinOp::kZ);
    EXPECT_EQ(term.op_j, SpinOp::kZ);
    EXPECT_DOUBLE_EQ(term.coeff, 1.0);
  }
  for (const auto& term : t.one_site) {
    EXPECT_EQ(term.op, SpinOp::kX);
    EXPECT_DOUBLE_EQ(term.coeff, -0.7);
  }
}

TEST(BuildTerms, XxzWithoutAnisotropy) {
  const TermList t = build_terms({Family::kXxz, Lattice::chain(4, Boundary::kPeriodic), 0.0});
  EXPECT_EQ(t.two_site.size(), 8u);
  EXPECT_TRUE(t.one_site.empty());
  int xx = 0, yy = 0;
  for (const auto& term : t.two_site) {
    xx += term.op_i == SpinOp::kX;
    yy += term.op_i == SpinOp::kY;
  }
  EXPECT_EQ(xx, 4);
  EXPECT_EQ(yy, 4);
}

TEST(BuildTerms, XyOpenPair) {
  const TermList t = build_terms({Family::kXy, Lattice::chain(2, Boundary::kOpen), 1.0});
  ASSERT_EQ(t.two_site.size(), 2u);
  ASSERT_EQ(t.one_site.size(), 2u);
  for (const auto& term : t.one_site) {
    EXPECT_EQ(term.op, SpinOp::kZ);
    EXPECT_DOUBLE_EQ(term.coeff, 1.0);
  }
}

TEST(BuildTerms, RejectsNonFiniteParam) {
  EXPECT_THROW(build_terms({Family::kQim, Lattice::chain(4, Boundary::kPeriodic),
                            std::numeric_limits<double>::infinity()}),
               ConfigError);
  EXPECT_THROW(parse_family("heisenberg"), ConfigError);
}

TEST(ApplyHamiltonian, WorkedExamples) {
  {
    const auto t = build_terms({Family::kQim, Lattice::chain(2, Boundary::kOpen), 0.0});
    const auto out = apply_hamiltonian(t, std::vector<double>{1, 0, 0, 0});
    EXPECT_NEAR(out[0], 0.25, 1e-15);
    EXPECT_NEAR(out[1] + out[2] + out[3], 0.0, 1e-15);
  }
  {
    const auto t = build_terms({Family::kQim, Lattice::chain(1, Boundary::kOpen), 0.4});
    const auto out = apply_hamiltonian(t, std::vector<double>{1, 0});
    EXPECT_NEAR(out[0], 0.0, 1e-15);
    EXPECT_NEAR(out[1], -0.2, 1e-15);
  }
  {
    const auto t = build_terms({Family::kXy, Lattice::chain(2, Boundary::kOpen), 2.0});
    const auto out = apply_hamiltonian(t, std::vector<double>{0, 0, 0, 1});
    EXPECT_NEAR(out[3], -2.0, 1e-15);
    EXPECT_NEAR(out[0] + out[1] + out[2], 0.0, 1e-15);
  }
}

TEST(ApplyHamiltonian, DimensionMismatch) {
  const auto t = build_terms({Family::kQim, Lattice::chain(3, Boundary::kOpen), 0.1});
  EXPECT_THROW(apply_hamiltonian(t, std::vector<double>(4)), ShapeError);
}

TEST(ApplyHamiltonian, MatchesKroneckerOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (Family f : {Family::kQim, Family::kXxz, Family::kXy}) {
    for (int n = 2; n <= 6; ++n) {
      const Boundary b = n >= 3 ? Boundary::kPeriodic : Boundary::kOpen;
      const TermList t = build_terms({f, Lattice::chain(n, b), u(rng)});
      const auto h = oracle::kron_hamiltonian(t);
      const HamiltonianOperator op(t);
      for (Eigen::Index c = 0; c < h.cols(); ++c) {
        std::vector<double> e(h.rows(), 0.0), out(h.rows());
        e[c] = 1.0;
        op.apply(e, out);
        for (Eigen::Index r = 0; r < h.rows(); ++r) ASSERT_NEAR(out[r], h(r, c), 1e-14);
      }
    }
  }
}

TEST(ApplyHamiltonian, MixedXzTermMatchesOracle) {
  TermList t;
  t.site_count = 3;
  t.two_site.push_back({0, 2, SpinOp::kX, SpinOp::kZ, 0.7});
  t.two_site.push_back({1, 2, SpinOp::kY, SpinOp::kY, -1.3});
  t.one_site.push_back({1, SpinOp::kX, 0.2});
  const auto h = oracle::kron_hamiltonian(t);
  const HamiltonianOperator op(t);
  for (Eigen::Index c = 0; c < 8; ++c) {
    std::vector<double> e(8, 0.0), out(8);
    e[c] = 1.0;
    op.apply(e, out);
    for (Eigen::Index r = 0; r < 8; ++r) EXPECT_NEAR(out[r], h(r, c), 1e-15);
  }
  t.two_site.push_back({0, 1, SpinOp::kX, SpinOp::kY, 1.0});
  EXPECT_THROW(HamiltonianOperator{t}, ConfigError);
}

TEST(ApplyHamiltonian, HermitianAndLinear) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (Family f : {Family::kQim, Family::kXxz, Family::kXy}) {
    for (int n : {4, 7, 10}) {
      const TermList t = build_terms({f, Lattice::chain(n, Boundary::kPeriodic), 0.37});
      const HamiltonianOperator op(t);
      const std::size_t d = op.dim();
      std::vector<double> u(d), v(d), hu(d), hv(d), mix(d), hmix(d);
      for (auto& x : u) x = g(rng);
      for (auto& x : v) x = g(rng);
      op.apply(u, hu);
      op.apply(v, hv);
      double uhv = 0, hvu = 0, scale = 0;
      for (std::size_t i = 0; i < d; ++i) {
        uhv += u[i] * hv[i];
        hvu += hu[i] * v[i];
        scale += std::abs(u[i] * hv[i]);
      }
      EXPECT_NEAR(uhv, hvu, 1e-12 * scale);
      const double a = 0.3, b = -1.7;
      for (std::size_t i = 0; i < d; ++i) mix[i] = a * u[i] + b * v[i];
      op.apply(mix, hmix);
      for (std::size_t i = 0; i < d; ++i) {
        ASSERT_NEAR(hmix[i], a * hu[i] + b * hv[i], 1e-12);
      }
    }
  }
}
