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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "hamlearn/simd/kernels.hpp"

namespace hamlearn::simd {
namespace {

constexpr KernelTable kScalarTable{&scalar::dot, &scalar::axpy,
                                   &scalar::gemm_nn, &scalar::gemm_nt,
                                   &scalar::gemm_tn};
#ifdef HAMLEARN_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2Table{&avx2::dot, &avx2::axpy, &avx2::gemm_nn,
                                 &avx2::gemm_nt, &avx2::gemm_tn};
#endif

Isa initial_isa() {
  Isa isa = detected_isa();
  if (const char* env = std::getenv("HAMLEARN_SIMD")) {
    const std::string v(env);
    if (v == "scalar") {
      isa = Isa::kScalar;
    } else if (v == "avx2" && isa_supported(Isa::kAvx2)) {
      isa = Isa::kAvx2;
    }
  }
  return isa;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#ifdef HAMLEARN_HAVE_AVX2_KERNELS
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() {
  return isa_supported(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::runtime_error("ISA not supported on this machine: " +
                             std::string(isa_name(isa)));
  }
  active().store(isa, std::memory_order_relaxed);
}

const KernelTable& kernels_for(Isa isa) {
#ifdef HAMLEARN_HAVE_AVX2_KERNELS
  if (isa == Isa::kAvx2) return kAvx2Table;
#endif
  (void)isa;
  return kScalarTable;
}

const KernelTable& kernels() { return kernels_for(active_isa()); }

}  // namespace hamlearn::simd
