// Copyright 2026 The EUPG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstring>
#include <numeric>

#include "eupg/common/rng.h"
#include "eupg/kernels/kernels.h"
#include "support/fixtures.h"

namespace eupg::kernels {
namespace {

bool BitEqual(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Sparse inputs exercise the zero-skipping paths.
std::vector<double> SparseRandom(size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.Uniform() < 0.7 ? 0.0 : rng.Uniform() - 0.3;
  return v;
}

class KernelsTest : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    saved_ = MaxThreads();
    SetThreads(GetParam());
  }
  void TearDown() override { SetThreads(saved_); }
  int saved_ = 1;
};

TEST_P(KernelsTest, SquaredDistancesMatchSerial) {
  Rng rng(1);
  for (size_t dim : {1u, 7u, 108u}) {
    const size_t n = 3000;
    const auto pts = testing::RandomPoints(n, dim, rng);
    std::vector<size_t> rows(n / 2);
    for (size_t i = 0; i < rows.size(); ++i) rows[i] = 2 * i + 1;
    const auto q = testing::RandomPoints(1, dim, rng);
    std::vector<double> a(rows.size()), b(rows.size());
    serial::SquaredDistances(pts, dim, rows, q, a);
    parallel::SquaredDistances(pts, dim, rows, q, b);
    EXPECT_TRUE(BitEqual(a, b));
    double ref = 0.0;
    for (size_t d = 0; d < dim; ++d) {
      const double diff = pts[rows[5] * dim + d] - q[d];
      ref += diff * diff;
    }
    EXPECT_EQ(a[5], ref);
  }
}

TEST_P(KernelsTest, ColumnMeansMatchSerial) {
  Rng rng(2);
  const size_t n = 5000, dim = 40;
  const auto pts = testing::RandomPoints(n, dim, rng);
  std::vector<size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  std::vector<double> a(dim), b(dim);
  serial::ColumnMeans(pts, dim, rows, a);
  parallel::ColumnMeans(pts, dim, rows, b);
  EXPECT_TRUE(BitEqual(a, b));
  double sum = 0.0;
  for (size_t r = 0; r < n; ++r) sum += pts[r * dim + 3];
  EXPECT_EQ(a[3], sum / n);
}

TEST_P(KernelsTest, DenseKernelsMatchSerial) {
  Rng rng(3);
  for (auto [batch, in, out] : std::vector<std::tuple<size_t, size_t, size_t>>{
           {512, 108, 128}, {37, 5, 4}, {1000, 128, 2}}) {
    const auto x = SparseRandom(batch * in, rng);
    const auto w = SparseRandom(in * out, rng);
    const auto bias = SparseRandom(out, rng);
    const auto dz = SparseRandom(batch * out, rng);
    std::vector<double> z1(batch * out), z2(batch * out);
    serial::AffineForward(x, batch, in, w, bias, out, z1);
    parallel::AffineForward(x, batch, in, w, bias, out, z2);
    EXPECT_TRUE(BitEqual(z1, z2));

    std::vector<double> dw1(in * out), dw2(in * out), db1(out), db2(out);
    serial::WeightGradients(dz, x, batch, in, out, dw1, db1);
    parallel::WeightGradients(dz, x, batch, in, out, dw2, db2);
    EXPECT_TRUE(BitEqual(dw1, dw2));
    EXPECT_TRUE(BitEqual(db1, db2));

    std::vector<double> dx1(batch * in), dx2(batch * in);
    serial::InputGradients(dz, w, batch, in, out, dx1);
    parallel::InputGradients(dz, w, batch, in, out, dx2);
    EXPECT_TRUE(BitEqual(dx1, dx2));

    // Spot-check against the textbook definitions.
    const size_t i = batch / 2, j = out - 1, k = in / 2;
    double zr = bias[j], dwr = 0.0, dxr = 0.0;
    for (size_t kk = 0; kk < in; ++kk) zr += x[i * in + kk] * w[kk * out + j];
    for (size_t ii = 0; ii < batch; ++ii) dwr += x[ii * in + k] * dz[ii * out + j];
    for (size_t jj = 0; jj < out; ++jj) dxr += dz[i * out + jj] * w[k * out + jj];
    EXPECT_NEAR(z1[i * out + j], zr, 1e-12);
    EXPECT_NEAR(dw1[k * out + j], dwr, 1e-10);
    EXPECT_NEAR(dx1[i * in + k], dxr, 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Threads, KernelsTest, ::testing::Values(1, 2, 4, 7));

}  // namespace
}  // namespace eupg::kernels
