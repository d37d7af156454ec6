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

#ifndef HAMLEARN_DATA_SPLITS_HPP
#define HAMLEARN_DATA_SPLITS_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace hamlearn::data {

/// Parameter values live in (0, 1). Training and testing values avoid the
/// gap (0.5 - delta/2, 0.5 + delta/2); generalizing values sit inside it.
struct SplitSpec {
  int n_train = 200;
  int n_test = 50;
  double delta = 0.0;
  int n_gen = 40;
  std::optional<double> dh;  // spacing of the generalizing grid; unset = delta / n_gen
  bool random = false;       // uniform draws instead of grids
  std::uint64_t seed = 0;    // random mode only

  void validate() const;
  double gen_spacing() const { return dh ? *dh : delta / n_gen; }
};

struct SplitValues {
  std::vector<double> train;
  std::vector<double> test;
  std::vector<double> gen;  // empty when delta = 0
};

/// Grid mode: each side of the gap gets a share of the points proportional
/// to its length (ties to the left) placed at interval midpoints; the test
/// grid is built the same way with its own count, each side shifted by a
/// fraction of its step if it would meet a training value. The generalizing grid is
/// 0.5 - (n_gen/2 - k - 1/2) dh for k = 0 .. n_gen - 1. All lists ascend.
SplitValues sample_splits(const SplitSpec& spec);

}  // namespace hamlearn::data

#endif  // HAMLEARN_DATA_SPLITS_HPP
