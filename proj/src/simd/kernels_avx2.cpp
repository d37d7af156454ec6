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

// Compiled with -mavx2 -mfma. Only reached through the dispatcher after a
// CPUID check. Keep standard-library templates out of this file so no
// AVX-encoded instantiation can be picked by the linker for other TUs.

#include <immintrin.h>

#include <cstring>

#include "hamlearn/simd/kernels.hpp"

namespace hamlearn::simd::avx2 {
namespace {

// Heap scratch with internal linkage (see the note above on templates).
class Scratch {
 public:
  explicit Scratch(std::size_t count) : data_(new double[count]()) {}
  ~Scratch() { delete[] data_; }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
  double* data() { return data_; }

 private:
  double* data_;
};

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// C rows [0, R) x cols [0, 8) of a block. A element (r, p) lives at
// a[r * a_rs + p * a_ks], which covers both A and A^T.
template <int R>
inline void block_r8(std::size_t k, const double* a, std::size_t a_rs,
                     std::size_t a_ks, const double* b, std::size_t ldb,
                     double* c, std::size_t ldc, bool accumulate) {
  __m256d acc0[R];
  __m256d acc1[R];
  for (int r = 0; r < R; ++r) {
    acc0[r] = _mm256_setzero_pd();
    acc1[r] = _mm256_setzero_pd();
  }
  for (std::size_t p = 0; p < k; ++p) {
    const __m256d b0 = _mm256_loadu_pd(b + p * ldb);
    const __m256d b1 = _mm256_loadu_pd(b + p * ldb + 4);
    for (int r = 0; r < R; ++r) {
      const __m256d av = _mm256_broadcast_sd(a + r * a_rs + p * a_ks);
      acc0[r] = _mm256_fmadd_pd(av, b0, acc0[r]);
      acc1[r] = _mm256_fmadd_pd(av, b1, acc1[r]);
    }
  }
  for (int r = 0; r < R; ++r) {
    double* cr = c + r * ldc;
    if (accumulate) {
      acc0[r] = _mm256_add_pd(acc0[r], _mm256_loadu_pd(cr));
      acc1[r] = _mm256_add_pd(acc1[r], _mm256_loadu_pd(cr + 4));
    }
    _mm256_storeu_pd(cr, acc0[r]);
    _mm256_storeu_pd(cr + 4, acc1[r]);
  }
}

template <int R>
inline void block_r4(std::size_t k, const double* a, std::size_t a_rs,
                     std::size_t a_ks, const double* b, std::size_t ldb,
                     double* c, std::size_t ldc, bool accumulate) {
  __m256d acc[R];
  for (int r = 0; r < R; ++r) acc[r] = _mm256_setzero_pd();
  for (std::size_t p = 0; p < k; ++p) {
    const __m256d b0 = _mm256_loadu_pd(b + p * ldb);
    for (int r = 0; r < R; ++r) {
      const __m256d av = _mm256_broadcast_sd(a + r * a_rs + p * a_ks);
      acc[r] = _mm256_fmadd_pd(av, b0, acc[r]);
    }
  }
  for (int r = 0; r < R; ++r) {
    double* cr = c + r * ldc;
    if (accumulate) acc[r] = _mm256_add_pd(acc[r], _mm256_loadu_pd(cr));
    _mm256_storeu_pd(cr, acc[r]);
  }
}

inline void block_scalar(std::size_t rows, std::size_t cols, std::size_t k,
                         const double* a, std::size_t a_rs, std::size_t a_ks,
                         const double* b, std::size_t ldb, double* c,
                         std::size_t ldc, bool accumulate) {
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < cols; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s = __builtin_fma(a[r * a_rs + p * a_ks], b[p * ldb + j], s);
      c[r * ldc + j] = accumulate ? c[r * ldc + j] + s : s;
    }
  }
}

template <int W>
inline void dispatch_rows(std::size_t rows, std::size_t k, const double* a,
                          std::size_t a_rs, std::size_t a_ks, const double* b,
                          std::size_t ldb, double* c, std::size_t ldc,
                          bool accumulate) {
  if constexpr (W == 8) {
    switch (rows) {
      case 4: block_r8<4>(k, a, a_rs, a_ks, b, ldb, c, ldc, accumulate); break;
      case 3: block_r8<3>(k, a, a_rs, a_ks, b, ldb, c, ldc, accumulate); break;
      case 2: block_r8<2>(k, a, a_rs, a_ks, b, ldb, c, ldc, accumulate); break;
      default: block_r8<1>(k, a, a_rs, a_ks, b, ldb, c, ldc, accumulate); break;
    }
  } else {
    switch (rows) {
      case 4: block_r4<4>(k, a, a_rs, a_ks, b, ldb, c, ldc, accumulate); break;
      case 3: block_r4<3>(k, a, a_rs, a_ks, b, ldb, c, ldc, accumulate); break;
      case 2: block_r4<2>(k, a, a_rs, a_ks, b, ldb, c, ldc, accumulate); break;
      default: block_r4<1>(k, a, a_rs, a_ks, b, ldb, c, ldc, accumulate); break;
    }
  }
}

// Column panels outermost. Each k x W slice of B is packed contiguously
// first (power-of-two row strides would otherwise map every row to the same
// cache set) and then stays in L1 while every row block of A streams past.
void gemm_strided_a(std::size_t m, std::size_t n, std::size_t k,
                    const double* a, std::size_t a_rs, std::size_t a_ks,
                    const double* b, std::size_t ldb, double* c,
                    std::size_t ldc, bool accumulate) {
  Scratch packed(k * 8);
  auto pack = [&](std::size_t j, std::size_t w) {
    for (std::size_t p = 0; p < k; ++p) {
      std::memcpy(packed.data() + p * w, b + p * ldb + j, w * sizeof(double));
    }
  };
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    pack(j, 8);
    for (std::size_t i = 0; i < m; i += 4) {
      const std::size_t rows = m - i < 4 ? m - i : 4;
      dispatch_rows<8>(rows, k, a + i * a_rs, a_rs, a_ks, packed.data(), 8,
                       c + i * ldc + j, ldc, accumulate);
    }
  }
  for (; j + 4 <= n; j += 4) {
    pack(j, 4);
    for (std::size_t i = 0; i < m; i += 4) {
      const std::size_t rows = m - i < 4 ? m - i : 4;
      dispatch_rows<4>(rows, k, a + i * a_rs, a_rs, a_ks, packed.data(), 4,
                       c + i * ldc + j, ldc, accumulate);
    }
  }
  if (j < n) {
    block_scalar(m, n - j, k, a, a_rs, a_ks, b + j, ldb, c + j, ldc,
                 accumulate);
  }
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             std::size_t lda, const double* b, std::size_t ldb, double* c,
             std::size_t ldc, bool accumulate) {
  gemm_strided_a(m, n, k, a, lda, 1, b, ldb, c, ldc, accumulate);
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             std::size_t lda, const double* b, std::size_t ldb, double* c,
             std::size_t ldc, bool accumulate) {
  gemm_strided_a(m, n, k, a, 1, lda, b, ldb, c, ldc, accumulate);
}

// Every element of C = A B^T is reduced in the same order (one 4-lane
// accumulator over k rounded down to a multiple of 4, horizontal sum, scalar
// tail) however the loops are blocked, so results do not depend on m or n.
// The 4-lane partial sums live in a buffer so k can be split into chunks
// that keep a block of B rows in L1.
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a,
             std::size_t lda, const double* b, std::size_t ldb, double* c,
             std::size_t ldc, bool accumulate) {
  constexpr std::size_t kChunk = 256;
  constexpr std::size_t kRowBlock = 8;
  const std::size_t k4 = k & ~static_cast<std::size_t>(3);
  Scratch partial(m * n * 4);
  auto lanes = [&](std::size_t i, std::size_t j) { return partial.data() + (i * n + j) * 4; };

  for (std::size_t p0 = 0; p0 < k4; p0 += kChunk) {
    const std::size_t p1 = p0 + kChunk < k4 ? p0 + kChunk : k4;
    for (std::size_t j0 = 0; j0 < n; j0 += kRowBlock) {
      const std::size_t j1 = j0 + kRowBlock < n ? j0 + kRowBlock : n;
      std::size_t i = 0;
      for (; i + 2 <= m; i += 2) {
        const double* a0 = a + i * lda;
        const double* a1 = a0 + lda;
        std::size_t j = j0;
        for (; j + 4 <= j1; j += 4) {
          const double* b0 = b + j * ldb;
          const double* b1 = b0 + ldb;
          const double* b2 = b1 + ldb;
          const double* b3 = b2 + ldb;
          __m256d s00 = _mm256_loadu_pd(lanes(i, j)), s01 = _mm256_loadu_pd(lanes(i, j + 1));
          __m256d s02 = _mm256_loadu_pd(lanes(i, j + 2)), s03 = _mm256_loadu_pd(lanes(i, j + 3));
          __m256d s10 = _mm256_loadu_pd(lanes(i + 1, j)), s11 = _mm256_loadu_pd(lanes(i + 1, j + 1));
          __m256d s12 = _mm256_loadu_pd(lanes(i + 1, j + 2)), s13 = _mm256_loadu_pd(lanes(i + 1, j + 3));
          for (std::size_t p = p0; p < p1; p += 4) {
            const __m256d va0 = _mm256_loadu_pd(a0 + p);
            const __m256d va1 = _mm256_loadu_pd(a1 + p);
            const __m256d vb0 = _mm256_loadu_pd(b0 + p);
            const __m256d vb1 = _mm256_loadu_pd(b1 + p);
            const __m256d vb2 = _mm256_loadu_pd(b2 + p);
            const __m256d vb3 = _mm256_loadu_pd(b3 + p);
            s00 = _mm256_fmadd_pd(va0, vb0, s00);
            s01 = _mm256_fmadd_pd(va0, vb1, s01);
            s02 = _mm256_fmadd_pd(va0, vb2, s02);
            s03 = _mm256_fmadd_pd(va0, vb3, s03);
            s10 = _mm256_fmadd_pd(va1, vb0, s10);
            s11 = _mm256_fmadd_pd(va1, vb1, s11);
            s12 = _mm256_fmadd_pd(va1, vb2, s12);
            s13 = _mm256_fmadd_pd(va1, vb3, s13);
          }
          _mm256_storeu_pd(lanes(i, j), s00);
          _mm256_storeu_pd(lanes(i, j + 1), s01);
          _mm256_storeu_pd(lanes(i, j + 2), s02);
          _mm256_storeu_pd(lanes(i, j + 3), s03);
          _mm256_storeu_pd(lanes(i + 1, j), s10);
          _mm256_storeu_pd(lanes(i + 1, j + 1), s11);
          _mm256_storeu_pd(lanes(i + 1, j + 2), s12);
          _mm256_storeu_pd(lanes(i + 1, j + 3), s13);
        }
        for (; j < j1; ++j) {
          const double* bj = b + j * ldb;
          __m256d s0 = _mm256_loadu_pd(lanes(i, j)), s1 = _mm256_loadu_pd(lanes(i + 1, j));
          for (std::size_t p = p0; p < p1; p += 4) {
            const __m256d vb = _mm256_loadu_pd(bj + p);
            s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a0 + p), vb, s0);
            s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a1 + p), vb, s1);
          }
          _mm256_storeu_pd(lanes(i, j), s0);
          _mm256_storeu_pd(lanes(i + 1, j), s1);
        }
      }
      for (; i < m; ++i) {
        const double* ai = a + i * lda;
        for (std::size_t j = j0; j < j1; ++j) {
          const double* bj = b + j * ldb;
          __m256d s0 = _mm256_loadu_pd(lanes(i, j));
          for (std::size_t p = p0; p < p1; p += 4) {
            s0 = _mm256_fmadd_pd(_mm256_loadu_pd(ai + p), _mm256_loadu_pd(bj + p), s0);
          }
          _mm256_storeu_pd(lanes(i, j), s0);
        }
      }
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a + i * lda;
    for (std::size_t j = 0; j < n; ++j) {
      const double* bj = b + j * ldb;
      double r = hsum(_mm256_loadu_pd(lanes(i, j)));
      for (std::size_t p = k4; p < k; ++p) r = __builtin_fma(ai[p], bj[p], r);
      double* dst = c + i * ldc + j;
      *dst = accumulate ? *dst + r : r;
    }
  }
}

}  // namespace hamlearn::simd::avx2
