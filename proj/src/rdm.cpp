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

#include "hamlearn/rdm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hamlearn {

bool SubsystemSpec::contiguous() const {
  for (std::size_t k = 1; k < sites.size(); ++k) {
    if (sites[k] != sites[k - 1] + 1) return false;
  }
  return true;
}

SubsystemSpec middle_block(int length, int block_size) {
  if (block_size < 1 || block_size > length) {
    throw ConfigError("middle block size must be in [1, L]");
  }
  SubsystemSpec sub;
  const int first = length / 2 - block_size / 2;
  for (int k = 0; k < block_size; ++k) sub.sites.push_back(first + k);
  return sub;
}

SubsystemSpec grid_middle_block(int rows, int cols) {
  if (cols < 2) throw ConfigError("grid middle block needs at least two columns");
  const SnakeOrder snake(rows, cols);
  const int c0 = cols / 2 - 1;
  SubsystemSpec sub;
  for (int c = c0; c <= c0 + 1; ++c) {
    for (int r = 0; r < rows; ++r) sub.sites.push_back(snake.to_chain(r, c));
  }
  std::sort(sub.sites.begin(), sub.sites.end());
  return sub;
}

namespace {

void validate(const SubsystemSpec& sub, int site_count) {
  if (sub.sites.empty()) throw ConfigError("subsystem is empty");
  std::vector<int> sorted = sub.sites;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError("subsystem sites must be distinct");
  }
  if (sorted.front() < 0 || sorted.back() >= site_count) {
    throw ConfigError("subsystem site out of range");
  }
  if (sub.size() > 14) throw ConfigError("subsystem larger than 14 sites");
}

}  // namespace

Rdm rdm_dense(const DenseState& state, const SubsystemSpec& sub) {
  const int n = state.site_count;
  validate(sub, n);
  if (state.amplitudes.size() != (std::size_t{1} << n)) {
    throw ShapeError("rdm_dense: amplitude count does not match site count");
  }
  const int kept = sub.size();
  std::vector<bool> is_kept(n, false);
  for (int s : sub.sites) is_kept[s] = true;
  std::vector<int> rest;
  for (int s = 0; s < n; ++s) {
    if (!is_kept[s]) rest.push_back(s);
  }
  // psi as a (2^kept x 2^rest) matrix
  Eigen::MatrixXd psi(Eigen::Index{1} << kept, Eigen::Index{1} << rest.size());
  for (std::size_t c = 0; c < state.amplitudes.size(); ++c) {
    std::size_t i = 0, e = 0;
    for (int s : sub.sites) i = (i << 1) | ((c >> (n - 1 - s)) & 1u);
    for (int s : rest) e = (e << 1) | ((c >> (n - 1 - s)) & 1u);
    psi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e)) = state.amplitudes[c];
  }
  Rdm out;
  out.site_count = kept;
  out.rho = psi * psi.transpose();
  return out;
}

Rdm rdm_mps(const Mps& state, const SubsystemSpec& sub) {
  validate(sub, state.site_count());
  if (!sub.contiguous()) throw ConfigError("rdm_mps: block must be contiguous and ascending");
  Mps psi = state;
  const int first = sub.sites.front();
  psi.canonicalize(first);
  std::vector<Eigen::MatrixXd> blocks{psi.site(first)[0], psi.site(first)[1]};
  for (int k = 1; k < sub.size(); ++k) {
    const auto& a = psi.site(first + k);
    std::vector<Eigen::MatrixXd> next;
    next.reserve(2 * blocks.size());
    for (const auto& m : blocks) {
      next.push_back(m * a[0]);
      next.push_back(m * a[1]);
    }
    blocks = std::move(next);
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(blocks.size());
  const Eigen::Index cols = blocks[0].size();
  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    x.row(i) = Eigen::Map<const Eigen::RowVectorXd>(blocks[i].data(), cols);
  }
  Rdm out;
  out.site_count = sub.size();
  out.rho = x * x.transpose();
  out.rho /= out.rho.trace();
  return out;
}

std::string_view ordering_name(PurifyOrdering ordering) {
  return ordering == PurifyOrdering::kInterleaved ? "interleaved" : "concatenated";
}

PurifyOrdering parse_ordering(std::string_view name) {
  if (name == "interleaved") return PurifyOrdering::kInterleaved;
  if (name == "concatenated") return PurifyOrdering::kConcatenated;
  throw ConfigError("unknown purification ordering: " + std::string(name));
}

std::size_t purified_index(std::size_t i, std::size_t i_prime, int block_size,
                           PurifyOrdering ordering) {
  if (ordering == PurifyOrdering::kConcatenated) {
    return (i << block_size) | i_prime;
  }
  std::size_t c = 0;
  for (int t = block_size - 1; t >= 0; --t) {
    c = (c << 2) | (((i >> t) & 1u) << 1) | ((i_prime >> t) & 1u);
  }
  return c;
}

DenseState purify(const Rdm& rdm, PurifyOrdering ordering) {
  const int lb = rdm.site_count;
  const Eigen::Index d = rdm.rho.rows();
  if (d != (Eigen::Index{1} << lb) || rdm.rho.cols() != d) {
    throw ShapeError("purify: rho has the wrong shape");
  }
  if (rdm.rho.cwiseAbs().maxCoeff() == 0.0) throw ConfigError("purify: zero matrix");
  DenseState out;
  out.site_count = 2 * lb;
  out.amplitudes.assign(static_cast<std::size_t>(d * d), 0.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index ip = 0; ip < d; ++ip) {
      out.amplitudes[purified_index(static_cast<std::size_t>(i),
                                    static_cast<std::size_t>(ip), lb, ordering)] =
          rdm.rho(i, ip);
    }
  }
  return out;
}

DenseState gauge_fix(DenseState state) {
  std::size_t best = 0;
  double best_abs = -1.0;
  for (std::size_t c = 0; c < state.amplitudes.size(); ++c) {
    const double a = std::abs(state.amplitudes[c]);
    if (a > best_abs) {
      best_abs = a;
      best = c;
    }
  }
  if (!state.amplitudes.empty() && state.amplitudes[best] < 0.0) {
    for (double& a : state.amplitudes) a = -a;
  }
  return state;
}

}  // namespace hamlearn
