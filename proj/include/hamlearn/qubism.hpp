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

#ifndef HAMLEARN_QUBISM_HPP
#define HAMLEARN_QUBISM_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "hamlearn/lanczos.hpp"

namespace hamlearn {

/// 1-based pixel coordinates: x is the row, y the column.
struct Pixel {
  int x = 1;
  int y = 1;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Qubism map of an n-spin configuration X1 Y1 X2 Y2 ... (site 0 is X1 and
/// the most significant bit of `config`):
///   x = sum_i X_i 2^(n/2 - i) + 1,   y = sum_i Y_i 2^(n/2 - i) + 1.
Pixel qubism_index(std::uint64_t config, int n);

/// Inverse of qubism_index.
std::uint64_t qubism_config(Pixel pixel, int n);

struct QubismImage {
  int side = 0;
  std::vector<double> pixels;                     // row-major, raw amplitudes
  std::optional<std::vector<double>> normalized;  // min-max rescaled to [0, 1]

  double at(int x, int y) const { return pixels[(x - 1) * side + (y - 1)]; }
};

/// Places every amplitude of an even-n state on its Qubism pixel.
QubismImage qubism_map(const DenseState& state);

/// Per-image affine rescale onto [0, 1]; a constant image maps to zeros.
QubismImage normalize_image(QubismImage image);

/// Raw min-max rescale used by normalize_image.
std::vector<double> minmax_normalize(std::span<const double> values);

/// 8-bit grayscale PNG of the normalized view, row x = 1 at the top,
/// gray = round(255 * value). Byte-identical output for identical input.
std::vector<std::uint8_t> encode_png(const QubismImage& image);
void render_png(const QubismImage& image, const std::filesystem::path& path);

/// Float image file: "QIMG", u16 version, u32 side, side^2 f64, all
/// little-endian, row-major.
inline constexpr std::uint16_t kQimgVersion = 1;

std::vector<std::uint8_t> encode_qimg(int side, std::span<const double> pixels);
void write_qimg(const std::filesystem::path& path, int side,
                std::span<const double> pixels);

struct FloatImage {
  int side = 0;
  std::vector<double> pixels;
};
FloatImage decode_qimg(std::span<const std::uint8_t> bytes);
FloatImage read_qimg(const std::filesystem::path& path);

/// Raw state file: "QSTA", u16 version, u32 site count, 2^n f64.
void write_state(const std::filesystem::path& path, const DenseState& state);
DenseState read_state(const std::filesystem::path& path);

}  // namespace hamlearn

#endif  // HAMLEARN_QUBISM_HPP
