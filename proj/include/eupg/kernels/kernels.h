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

#ifndef EUPG_KERNELS_KERNELS_H_
#define EUPG_KERNELS_KERNELS_H_

#include <cstddef>
#include <span>

// Data-parallel inner loops shared by MDAV and MLP training.
//
// Every kernel exists twice: `serial` is the reference implementation and
// `parallel` the OpenMP version used by the library. Each output element is
// accumulated by exactly one thread in the same order as the serial loop, so
// both produce bit-identical results for any thread count. Matrices are
// dense row-major.
//
// Dense layers store weights input-major: w[k * out + j] connects input k to
// output j.
//
// The affine kernels skip zero input activations (one-hot columns and ReLU
// outputs are mostly zero); the only observable effect is on the sign of a
// zero result, identically in both variants.
namespace eupg::kernels {

namespace serial {

// out[t] = ||points[rows[t]] - query||^2.
void SquaredDistances(std::span<const double> points, size_t dim,
                      std::span<const size_t> rows,
                      std::span<const double> query, std::span<double> out);

// out[c] = mean over rows of points[r][c].
void ColumnMeans(std::span<const double> points, size_t dim,
                 std::span<const size_t> rows, std::span<double> out);

// z[i][j] = b[j] + sum_k x[i][k] w[k][j], k ascending.
void AffineForward(std::span<const double> x, size_t batch, size_t in,
                   std::span<const double> w, std::span<const double> b,
                   size_t out, std::span<double> z);

// dw[k][j] = sum_i x[i][k] dz[i][j], db[j] = sum_i dz[i][j], i ascending.
void WeightGradients(std::span<const double> dz, std::span<const double> x,
                     size_t batch, size_t in, size_t out, std::span<double> dw,
                     std::span<double> db);

// dx[i][k] = sum_j dz[i][j] w[k][j], j ascending.
void InputGradients(std::span<const double> dz, std::span<const double> w,
                    size_t batch, size_t in, size_t out, std::span<double> dx);

}  // namespace serial

namespace parallel {

void SquaredDistances(std::span<const double> points, size_t dim,
                      std::span<const size_t> rows,
                      std::span<const double> query, std::span<double> out);
void ColumnMeans(std::span<const double> points, size_t dim,
                 std::span<const size_t> rows, std::span<double> out);
void AffineForward(std::span<const double> x, size_t batch, size_t in,
                   std::span<const double> w, std::span<const double> b,
                   size_t out, std::span<double> z);
void WeightGradients(std::span<const double> dz, std::span<const double> x,
                     size_t batch, size_t in, size_t out, std::span<double> dw,
                     std::span<double> db);
void InputGradients(std::span<const double> dz, std::span<const double> w,
                    size_t batch, size_t in, size_t out, std::span<double> dx);

}  // namespace parallel

// Number of OpenMP threads the parallel kernels will use.
int MaxThreads();
void SetThreads(int threads);

}  // namespace eupg::kernels

#endif  // EUPG_KERNELS_KERNELS_H_
