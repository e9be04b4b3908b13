// Copyright 2026 The Chiller HRL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "chiller/simd/kernels.hpp"

namespace chiller::simd {

#if defined(CHILLER_HAVE_AVX2_TU)
const KernelTable& avx2_kernel_table();
#endif

namespace {

bool cpu_has_avx2() {
#if defined(CHILLER_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  const char* forced = std::getenv("CHILLER_SIMD");
  if (forced != nullptr) {
    const std::string choice(forced);
    if (choice == "scalar") return scalar_kernels();
    if (choice == "avx2") {
      if (const KernelTable* t = avx2_kernels()) return *t;
      throw std::runtime_error("CHILLER_SIMD=avx2 requested but unavailable");
    }
  }
  if (const KernelTable* t = avx2_kernels()) return *t;
  return scalar_kernels();
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

const KernelTable* avx2_kernels() {
#if defined(CHILLER_HAVE_AVX2_TU)
  static const bool supported = cpu_has_avx2();
  if (supported) return &avx2_kernel_table();
#endif
  return nullptr;
}

bool isa_available(Isa isa) {
  return isa == Isa::kScalar || avx2_kernels() != nullptr;
}

const KernelTable& kernels() {
  static const KernelTable& table = select();
  return table;
}

const KernelTable& kernels_for(Isa isa) {
  if (isa == Isa::kAvx2) {
    if (const KernelTable* t = avx2_kernels()) return *t;
    throw std::runtime_error("avx2 kernels unavailable on this machine");
  }
  return scalar_kernels();
}

}  // namespace chiller::simd
