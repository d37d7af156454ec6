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

#include "hamlearn/data/splits.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hamlearn/error.hpp"

namespace hamlearn::data {

namespace {

constexpr double kCollision = 1e-12;

struct Interval {
  double lo;
  double hi;
  double length() const { return hi - lo; }
};

std::vector<double> midpoint_side(const Interval& iv, int n, double shift_fraction) {
  std::vector<double> out;
  const double step = iv.length() / n;
  for (int k = 0; k < n; ++k) out.push_back(iv.lo + (k + 0.5 + shift_fraction) * step);
  return out;
}

std::pair<int, int> allocate(const Interval& left, const Interval& right, int count) {
  const double total = left.length() + right.length();
  const int n_left = static_cast<int>(std::floor(count * left.length() / total + 0.5));
  return {n_left, count - n_left};
}

bool collides(const std::vector<double>& a, const std::vector<double>& b) {
  for (double x : a) {
    auto it = std::lower_bound(b.begin(), b.end(), x - kCollision);
    if (it != b.end() && std::abs(*it - x) <= kCollision) return true;
  }
  return false;
}

std::vector<double> uniform_draws(const Interval& left, const Interval& right, int count,
                                  std::mt19937_64& rng, const std::vector<double>& avoid) {
  const double total = left.length() + right.length();
  std::uniform_real_distribution<double> u(0.0, total);
  std::vector<double> out;
  while (static_cast<int>(out.size()) < count) {
    const double r = u(rng);
    const double x = r < left.length() ? left.lo + r : right.lo + (r - left.length());
    if (x <= 0.0 || x >= 1.0) continue;
    if (collides({x}, avoid) || collides({x}, out)) continue;
    out.push_back(x);
    std::sort(out.begin(), out.end());
  }
  return out;
}

}  // namespace

void SplitSpec::validate() const {
  if (!(delta >= 0.0 && delta < 1.0)) throw ConfigError("delta must be in [0, 1)");
  if (n_train < 2) throw ConfigError("n_train must be >= 2");
  if (n_test < 1) throw ConfigError("n_test must be >= 1");
  if (n_gen < 0) throw ConfigError("n_gen must be >= 0");
  if (delta > 0.0 && n_gen < 1) throw ConfigError("n_gen must be >= 1 when delta > 0");
  if (dh && !(*dh > 0.0)) throw ConfigError("dh must be > 0");
}

SplitValues sample_splits(const SplitSpec& spec) {
  spec.validate();
  const Interval left{0.0, 0.5 - spec.delta / 2};
  const Interval right{0.5 + spec.delta / 2, 1.0};
  SplitValues v;
  if (spec.random) {
    std::mt19937_64 rng(spec.seed);
    v.train = uniform_draws(left, right, spec.n_train, rng, {});
    v.test = uniform_draws(left, right, spec.n_test, rng, v.train);
  } else {
    const auto [train_left, train_right] = allocate(left, right, spec.n_train);
    const auto [test_left, test_right] = allocate(left, right, spec.n_test);
    v.train = midpoint_side(left, train_left, 0.0);
    const auto tr = midpoint_side(right, train_right, 0.0);
    v.train.insert(v.train.end(), tr.begin(), tr.end());
    // Each side of the test grid moves off the training points by the first
    // fraction of its own step that clears them.
    for (auto [iv, n] : {std::pair{left, test_left}, std::pair{right, test_right}}) {
      bool placed = n == 0;
      for (double shift : {0.0, 0.25, -0.25, 0.125, -0.125, 0.375, -0.375}) {
        if (placed) break;
        auto side = midpoint_side(iv, n, shift);
        if (!collides(side, v.train)) {
          v.test.insert(v.test.end(), side.begin(), side.end());
          placed = true;
        }
      }
      if (!placed) throw ConfigError("testing grid collides with the training grid; change n_test");
    }
  }
  if (spec.delta > 0.0) {
    const double dh = spec.gen_spacing();
    for (int k = 0; k < spec.n_gen; ++k) {
      v.gen.push_back(0.5 - (spec.n_gen / 2.0 - k - 0.5) * dh);
    }
    if (v.gen.front() <= left.hi || v.gen.back() >= right.lo) {
      throw ConfigError("generalizing grid does not fit inside the gap; reduce n_gen or dh");
    }
  }
  return v;
}

}  // namespace hamlearn::data
