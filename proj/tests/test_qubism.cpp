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
#include <filesystem>
#include <random>
#include <set>

#include "hamlearn/error.hpp"
#include "hamlearn/qubism.hpp"
#include "hamlearn/rdm.hpp"
#include "hamlearn/util/binary_io.hpp"
#include "oracles.hpp"
#include "png_reader.hpp"

using namespace hamlearn;
using hamlearn::oracle::decode_gray_png;
using hamlearn::oracle::DecodedPng;

namespace {

DenseState ghz4() {
  DenseState s{4, std::vector<double>(16, 0.0)};
  s.amplitudes[0] = s.amplitudes[15] = 1.0 / std::sqrt(2.0);
  return s;
}

}  // namespace

TEST(QubismIndex, WorkedExamples) {
  EXPECT_EQ(qubism_index(0b1010, 4), (Pixel{4, 1}));
  EXPECT_EQ(qubism_index(0, 4), (Pixel{1, 1}));
  EXPECT_EQ(qubism_index(0b1111, 4), (Pixel{4, 4}));
  EXPECT_EQ(qubism_index(0b01, 2), (Pixel{1, 2}));
  EXPECT_THROW(qubism_index(0, 3), ConfigError);
}

TEST(QubismIndex, BijectionUpToSixteenSpins) {
  for (int n = 2; n <= 16; n += 2) {
    const std::uint64_t count = std::uint64_t{1} << n;
    const int side = 1 << (n / 2);
    std::vector<char> seen(count, 0);
    for (std::uint64_t c = 0; c < count; ++c) {
      const Pixel p = qubism_index(c, n);
      ASSERT_GE(p.x, 1);
      ASSERT_GE(p.y, 1);
      ASSERT_LE(p.x, side);
      ASSERT_LE(p.y, side);
      const std::size_t slot = static_cast<std::size_t>(p.x - 1) * side + (p.y - 1);
      ASSERT_FALSE(seen[slot]);
      seen[slot] = 1;
      ASSERT_EQ(qubism_config(p, n), c);
    }
  }
}

TEST(QubismIndex, LastPairFlipStaysInTwoByTwoBlock) {
  for (int n : {4, 8, 12}) {
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << n); c += 7) {
      const Pixel p = qubism_index(c, n);
      for (std::uint64_t f : {1u, 2u, 3u}) {
        const Pixel q = qubism_index(c ^ f, n);
        EXPECT_LE(std::abs(p.x - q.x), 1);
        EXPECT_LE(std::abs(p.y - q.y), 1);
      }
    }
  }
}

TEST(QubismMap, BasisState) {
  DenseState s{4, std::vector<double>(16, 0.0)};
  s.amplitudes[0b1010] = 1.0;
  const QubismImage img = qubism_map(s);
  EXPECT_EQ(img.side, 4);
  EXPECT_EQ(img.at(4, 1), 1.0);
  double total = 0;
  for (double v : img.pixels) total += std::abs(v);
  EXPECT_EQ(total, 1.0);
}

TEST(QubismMap, Ghz) {
  const QubismImage img = qubism_map(ghz4());
  EXPECT_NEAR(img.at(1, 1), 0.70711, 1e-5);
  EXPECT_NEAR(img.at(4, 4), 0.70711, 1e-5);
  int nonzero = 0;
  for (double v : img.pixels) nonzero += v != 0.0;
  EXPECT_EQ(nonzero, 2);
}

TEST(QubismMap, PurifiedRhoIsTheMatrix) {
  const QubismImage img = qubism_map(purify(Rdm{1, Eigen::MatrixXd::Identity(2, 2) * 0.5}));
  EXPECT_EQ(img.pixels, (std::vector<double>{0.5, 0, 0, 0.5}));
  std::mt19937_64 rng(2);
  DenseState s{7, oracle::random_state(7, rng)};
  const Rdm r = rdm_dense(s, {{2, 3, 4}});
  const QubismImage m = qubism_map(purify(r));
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) EXPECT_EQ(m.at(i + 1, j + 1), r.rho(i, j));
}

TEST(QubismMap, PreservesNorm) {
  std::mt19937_64 rng(3);
  for (int n : {2, 6, 10}) {
    DenseState s{n, oracle::random_state(n, rng)};
    for (double& a : s.amplitudes) a *= 1.7;
    const QubismImage img = qubism_map(s);
    double sq = 0;
    for (double v : img.pixels) sq += v * v;
    EXPECT_NEAR(sq, s.norm_squared(), 1e-10);
  }
  EXPECT_THROW(qubism_map(DenseState{3, std::vector<double>(8, 0.1)}), ConfigError);
}

TEST(Normalize, Examples) {
  EXPECT_EQ(minmax_normalize(std::vector<double>{-0.5, 0.0, 0.5}),
            (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(minmax_normalize(std::vector<double>{0.3, 0.3, 0.3, 0.3}),
            (std::vector<double>(4, 0.0)));
}

TEST(Normalize, IdempotentAndSpansUnitRange) {
  std::mt19937_64 rng(6);
  DenseState s{6, oracle::random_state(6, rng)};
  const QubismImage once = normalize_image(qubism_map(s));
  ASSERT_TRUE(once.normalized.has_value());
  const auto& v = *once.normalized;
  EXPECT_EQ(*std::min_element(v.begin(), v.end()), 0.0);
  EXPECT_EQ(*std::max_element(v.begin(), v.end()), 1.0);
  EXPECT_EQ(minmax_normalize(v), v);
  // raw pixels are untouched
  EXPECT_EQ(once.pixels, qubism_map(s).pixels);
}

TEST(Png, IdentityImage) {
  QubismImage img{2, {1, 0, 0, 1}, std::nullopt};
  EXPECT_THROW(encode_png(img), ConfigError);
  img = normalize_image(img);
  const DecodedPng png = decode_gray_png(encode_png(img));
  EXPECT_EQ(png.width, 2);
  EXPECT_EQ(png.height, 2);
  EXPECT_EQ(png.rows, (std::vector<std::vector<int>>{{255, 0}, {0, 255}}));
}

TEST(Png, GhzHasTwoWhitePixels) {
  const DecodedPng png = decode_gray_png(encode_png(normalize_image(qubism_map(ghz4()))));
  int white = 0, black = 0;
  for (const auto& r : png.rows)
    for (int g : r) {
      white += g == 255;
      black += g == 0;
    }
  EXPECT_EQ(white, 2);
  EXPECT_EQ(black, 14);
  EXPECT_EQ(png.rows[0][0], 255);
  EXPECT_EQ(png.rows[3][3], 255);
}

TEST(Png, RoundsToNearestGray) {
  QubismImage img{2, {0.0, 0.5, 0.25, 1.0}, std::nullopt};
  img = normalize_image(img);
  const DecodedPng png = decode_gray_png(encode_png(img));
  EXPECT_EQ(png.rows[0][1], 128);  // round(127.5)
  EXPECT_EQ(png.rows[1][0], 64);   // round(63.75)
}

TEST(Png, DeterministicFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "hamlearn_png_test";
  const QubismImage img = normalize_image(qubism_map(ghz4()));
  render_png(img, dir / "a.png");
  render_png(img, dir / "b.png");
  EXPECT_EQ(util::read_file(dir / "a.png"), util::read_file(dir / "b.png"));
  std::filesystem::remove_all(dir);
}

TEST(Qimg, RoundTripAndLayout) {
  const std::vector<double> px{0.0, 0.25, -1.5, 1e-300};
  const auto bytes = encode_qimg(2, px);
  ASSERT_EQ(bytes.size(), 4u + 2u + 4u + 4u * 8u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "QIMG");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 0);
  EXPECT_EQ(bytes[6], 2);
  const FloatImage back = decode_qimg(bytes);
  EXPECT_EQ(back.side, 2);
  EXPECT_EQ(back.pixels, px);
}

TEST(Qimg, RejectsCorruptInput) {
  auto bytes = encode_qimg(2, std::vector<double>{1, 2, 3, 4});
  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_THROW(decode_qimg(truncated), IoError);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_qimg(bad_magic), IoError);
  auto bad_version = bytes;
  bad_version[4] = 9;
  EXPECT_THROW(decode_qimg(bad_version), IoError);
  EXPECT_THROW(read_qimg("/nonexistent/dir/x.qimg"), IoError);
}

TEST(StateFile, RoundTrip) {
  std::mt19937_64 rng(10);
  DenseState s{6, oracle::random_state(6, rng)};
  const auto path = std::filesystem::temp_directory_path() / "hamlearn_state_test.qsta";
  write_state(path, s);
  const DenseState back = read_state(path);
  EXPECT_EQ(back.site_count, 6);
  EXPECT_EQ(back.amplitudes, s.amplitudes);
  std::filesystem::remove(path);
}
