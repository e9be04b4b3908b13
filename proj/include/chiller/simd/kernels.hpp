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

#pragma once

// Dense double-precision kernels used by the value network.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The active table is chosen once at first use from the
// CPU feature set; CHILLER_SIMD=scalar|avx2 in the environment overrides it.
// The variants are not bit-identical (FMA contraction and the lane-wise
// reduction order differ) but each is deterministic on its own.

#include <cstddef>
#include <span>
#include <string_view>

namespace chiller::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);

struct AdamCoefficients {
  double learning_rate;
  double beta1;
  double beta2;
  double epsilon;
  // 1 - beta^t for the current step, precomputed by the caller.
  double bias_correction1;
  double bias_correction2;
};

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y[r] = bias[r] + sum_c w[r * cols + c] * x[c]
  void (*gemv)(const double* w, const double* bias, const double* x, double* y,
               std::size_t rows, std::size_t cols);
  // In-place Adam update of params from grads with first/second moments.
  void (*adam)(double* params, const double* grads, double* m, double* v,
               std::size_t n, const AdamCoefficients& c);
};

const KernelTable& scalar_kernels();

// Returns nullptr when the variant was not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();

bool isa_available(Isa isa);

// The dispatched table. Selected once; thread-safe.
const KernelTable& kernels();

const KernelTable& kernels_for(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return kernels().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  kernels().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace chiller::simd
