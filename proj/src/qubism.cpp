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

#include "hamlearn/qubism.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>

#include "hamlearn/util/binary_io.hpp"

namespace hamlearn {

Pixel qubism_index(std::uint64_t config, int n) {
  if (n <= 0 || n % 2 != 0) throw ConfigError("qubism needs an even number of spins");
  if (n > 62) throw ConfigError("qubism: too many spins");
  const int half = n / 2;
  int x = 0, y = 0;
  for (int i = 0; i < half; ++i) {
    const int xs = 2 * i;  // site of X_{i+1}
    const int ys = 2 * i + 1;
    x = (x << 1) | static_cast<int>((config >> (n - 1 - xs)) & 1u);
    y = (y << 1) | static_cast<int>((config >> (n - 1 - ys)) & 1u);
  }
  return {x + 1, y + 1};
}

std::uint64_t qubism_config(Pixel pixel, int n) {
  if (n <= 0 || n % 2 != 0) throw ConfigError("qubism needs an even number of spins");
  const int half = n / 2;
  const std::uint64_t x = static_cast<std::uint64_t>(pixel.x - 1);
  const std::uint64_t y = static_cast<std::uint64_t>(pixel.y - 1);
  std::uint64_t c = 0;
  for (int i = half - 1; i >= 0; --i) {
    c = (c << 2) | (((x >> i) & 1u) << 1) | ((y >> i) & 1u);
  }
  return c;
}

QubismImage qubism_map(const DenseState& state) {
  const int n = state.site_count;
  if (n <= 0 || n % 2 != 0) throw ConfigError("qubism_map needs an even number of spins");
  if (state.amplitudes.size() != (std::size_t{1} << n)) {
    throw ShapeError("qubism_map: amplitude count does not match site count");
  }
  QubismImage img;
  img.side = 1 << (n / 2);
  img.pixels.assign(state.amplitudes.size(), 0.0);
  for (std::size_t c = 0; c < state.amplitudes.size(); ++c) {
    const Pixel p = qubism_index(c, n);
    img.pixels[static_cast<std::size_t>(p.x - 1) * img.side + (p.y - 1)] = state.amplitudes[c];
  }
  return img;
}

std::vector<double> minmax_normalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - *lo) / range;
  return out;
}

QubismImage normalize_image(QubismImage image) {
  image.normalized = minmax_normalize(image.pixels);
  return image;
}

namespace {

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_chunk(std::vector<std::uint8_t>& out, const char* type,
               const std::vector<std::uint8_t>& data) {
  put_be32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const uLong crc = crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start));
  put_be32(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

std::vector<std::uint8_t> encode_png(const QubismImage& image) {
  if (!image.normalized) throw ConfigError("render_png needs a normalized image");
  const auto& v = *image.normalized;
  const int side = image.side;
  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(side) * (side + 1));
  for (int r = 0; r < side; ++r) {
    raw.push_back(0);  // filter: none
    for (int c = 0; c < side; ++c) {
      const double g = std::clamp(v[static_cast<std::size_t>(r) * side + c], 0.0, 1.0);
      raw.push_back(static_cast<std::uint8_t>(std::lround(255.0 * g)));
    }
  }
  uLongf zlen = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> z(zlen);
  if (compress2(z.data(), &zlen, raw.data(), static_cast<uLong>(raw.size()), 9) != Z_OK) {
    throw IoError("png: deflate failed");
  }
  z.resize(zlen);

  std::vector<std::uint8_t> out{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  std::vector<std::uint8_t> ihdr;
  put_be32(ihdr, static_cast<std::uint32_t>(side));
  put_be32(ihdr, static_cast<std::uint32_t>(side));
  ihdr.insert(ihdr.end(), {8, 0, 0, 0, 0});  // 8-bit gray, no interlace
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT", z);
  put_chunk(out, "IEND", {});
  return out;
}

void render_png(const QubismImage& image, const std::filesystem::path& path) {
  util::write_file(path, encode_png(image));
}

std::vector<std::uint8_t> encode_qimg(int side, std::span<const double> pixels) {
  if (side <= 0 || pixels.size() != static_cast<std::size_t>(side) * side) {
    throw ShapeError("qimg: pixel count must be side^2");
  }
  util::ByteWriter w;
  w.bytes("QIMG");
  w.u16(kQimgVersion);
  w.u32(static_cast<std::uint32_t>(side));
  w.f64s(pixels);
  return std::move(w.data());
}

void write_qimg(const std::filesystem::path& path, int side,
                std::span<const double> pixels) {
  util::write_file(path, encode_qimg(side, pixels));
}

FloatImage decode_qimg(std::span<const std::uint8_t> bytes) {
  util::ByteReader r(bytes, "qimg");
  r.expect_magic("QIMG");
  if (r.u16() != kQimgVersion) throw IoError("qimg: unsupported version");
  FloatImage img;
  img.side = static_cast<int>(r.u32());
  const std::size_t count = static_cast<std::size_t>(img.side) * img.side;
  if (r.remaining() != count * 8) throw IoError("qimg: size does not match header");
  img.pixels.resize(count);
  for (double& p : img.pixels) p = r.f64();
  return img;
}

FloatImage read_qimg(const std::filesystem::path& path) {
  try {
    return decode_qimg(util::read_file(path));
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_state(const std::filesystem::path& path, const DenseState& state) {
  util::ByteWriter w;
  w.bytes("QSTA");
  w.u16(1);
  w.u32(static_cast<std::uint32_t>(state.site_count));
  w.f64s(state.amplitudes);
  util::write_file(path, w.data());
}

DenseState read_state(const std::filesystem::path& path) {
  const auto bytes = util::read_file(path);
  util::ByteReader r(bytes, path.string());
  r.expect_magic("QSTA");
  if (r.u16() != 1) throw IoError(path.string() + ": unsupported state version");
  DenseState s;
  s.site_count = static_cast<int>(r.u32());
  if (s.site_count < 0 || s.site_count > 30 ||
      r.remaining() != (std::size_t{8} << s.site_count)) {
    throw IoError(path.string() + ": state size does not match header");
  }
  s.amplitudes.resize(std::size_t{1} << s.site_count);
  for (double& a : s.amplitudes) a = r.f64();
  return s;
}

}  // namespace hamlearn
