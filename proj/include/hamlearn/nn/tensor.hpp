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

#ifndef HAMLEARN_NN_TENSOR_HPP
#define HAMLEARN_NN_TENSOR_HPP

#include <cstddef>
#include <vector>

namespace hamlearn::nn {

/// Batch, channels, height, width.
struct Shape {
  int n = 0;
  int c = 0;
  int h = 0;
  int w = 0;

  std::size_t size() const { return std::size_t(n) * c * h * w; }
  std::size_t sample_size() const { return std::size_t(c) * h * w; }
  Shape with_batch(int batch) const { return {batch, c, h, w}; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Dense NCHW tensor of doubles.
struct Tensor4 {
  Shape shape;
  std::vector<double> data;

  Tensor4() = default;
  explicit Tensor4(Shape s, double fill = 0.0) : shape(s), data(s.size(), fill) {}

  double& at(int b, int ch, int y, int x) { return data[index(b, ch, y, x)]; }
  double at(int b, int ch, int y, int x) const { return data[index(b, ch, y, x)]; }
  double* sample(int b) { return data.data() + std::size_t(b) * shape.sample_size(); }
  const double* sample(int b) const { return data.data() + std::size_t(b) * shape.sample_size(); }

 private:
  std::size_t index(int b, int ch, int y, int x) const {
    return ((std::size_t(b) * shape.c + ch) * shape.h + y) * shape.w + x;
  }
};

}  // namespace hamlearn::nn

#endif  // HAMLEARN_NN_TENSOR_HPP
