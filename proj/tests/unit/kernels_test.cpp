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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "chiller/simd/kernels.hpp"

namespace chiller::simd {
namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

// Relative closeness scaled by the magnitude of the summands, since the
// variants reduce in different orders.
void expect_close(double a, double b, double magnitude) {
  EXPECT_NEAR(a, b, 1e-13 * std::max(1.0, magnitude));
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!isa_available(Isa::kAvx2)) GTEST_SKIP() << "AVX2 not available";
  }
  const KernelTable& ref = kernels_for(Isa::kScalar);
  const KernelTable* fast = avx2_kernels();
};

TEST_F(KernelEquivalence, DotMatchesScalarForAllTailLengths) {
  std::mt19937_64 rng(1);
  for (std::size_t n = 0; n <= 67; ++n) {
    const auto a = random_vector(n, rng);
    const auto b = random_vector(n, rng);
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);
    expect_close(ref.dot(a.data(), b.data(), n), fast->dot(a.data(), b.data(), n), mag);
  }
}

TEST_F(KernelEquivalence, AxpyMatchesScalar) {
  std::mt19937_64 rng(2);
  for (std::size_t n = 0; n <= 37; ++n) {
    const auto x = random_vector(n, rng);
    auto y1 = random_vector(n, rng);
    auto y2 = y1;
    ref.axpy(0.37, x.data(), y1.data(), n);
    fast->axpy(0.37, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) expect_close(y1[i], y2[i], 4.0);
  }
}

TEST_F(KernelEquivalence, GemvMatchesScalarOnNetworkShapes) {
  std::mt19937_64 rng(3);
  const std::pair<std::size_t, std::size_t> shapes[] = {
      {64, 14}, {64, 18}, {64, 64}, {100, 64}, {10, 64}, {25, 64}, {3, 5}};
  for (auto [rows, cols] : shapes) {
    const auto w = random_vector(rows * cols, rng);
    const auto bias = random_vector(rows, rng);
    const auto x = random_vector(cols, rng);
    std::vector<double> y1(rows), y2(rows);
    ref.gemv(w.data(), bias.data(), x.data(), y1.data(), rows, cols);
    fast->gemv(w.data(), bias.data(), x.data(), y2.data(), rows, cols);
    for (std::size_t r = 0; r < rows; ++r) expect_close(y1[r], y2[r], 4.0 * cols);
  }
}

TEST_F(KernelEquivalence, AdamMatchesScalarOverManySteps) {
  std::mt19937_64 rng(4);
  const std::size_t n = 1029;
  auto p1 = random_vector(n, rng);
  auto p2 = p1;
  std::vector<double> m1(n, 0.0), v1(n, 0.0), m2(n, 0.0), v2(n, 0.0);
  for (int step = 1; step <= 50; ++step) {
    const auto g = random_vector(n, rng);
    const AdamCoefficients c{1e-3, 0.9, 0.999, 1e-8, 1.0 - std::pow(0.9, step),
                             1.0 - std::pow(0.999, step)};
    ref.adam(p1.data(), g.data(), m1.data(), v1.data(), n, c);
    fast->adam(p2.data(), g.data(), m2.data(), v2.data(), n, c);
  }
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_NEAR(p1[i], p2[i], 1e-12);
    EXPECT_NEAR(m1[i], m2[i], 1e-12);
    EXPECT_NEAR(v1[i], v2[i], 1e-12);
  }
}

TEST(Kernels, ScalarReferenceValues) {
  const KernelTable& k = scalar_kernels();
  const double a[] = {1.0, 2.0, 3.0};
  const double b[] = {4.0, -5.0, 6.0};
  EXPECT_DOUBLE_EQ(k.dot(a, b, 3), 12.0);
  double y[] = {1.0, 1.0, 1.0};
  k.axpy(2.0, a, y, 3);
  EXPECT_DOUBLE_EQ(y[2], 7.0);
  EXPECT_DOUBLE_EQ(k.dot(a, b, 0), 0.0);
}

TEST(Kernels, DispatchedTableIsStableAndNamed) {
  const KernelTable& first = kernels();
  EXPECT_EQ(&first, &kernels());
  EXPECT_FALSE(isa_name(first.isa).empty());
  EXPECT_TRUE(isa_available(Isa::kScalar));
}

}  // namespace
}  // namespace chiller::simd
