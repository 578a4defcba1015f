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

#include "eupg/kernels/kernels.h"

#include <algorithm>

#include <omp.h>

namespace eupg::kernels {
namespace {

// Below this many multiply-adds a parallel region costs more than it saves.
constexpr size_t kParallelThreshold = size_t{1} << 15;

// Static partition of [0, n) for the calling thread.
inline void ThreadRange(size_t n, size_t& begin, size_t& end) {
  const size_t nt = static_cast<size_t>(omp_get_num_threads());
  const size_t t = static_cast<size_t>(omp_get_thread_num());
  const size_t chunk = (n + nt - 1) / nt;
  begin = std::min(n, t * chunk);
  end = std::min(n, begin + chunk);
}

inline double SquaredDistance(const double* a, const double* b, size_t dim) {
  double acc = 0.0;
  for (size_t c = 0; c < dim; ++c) {
    const double d = a[c] - b[c];
    acc += d * d;
  }
  return acc;
}

inline void ColumnSums(const double* points, size_t dim,
                       std::span<const size_t> rows, size_t c0, size_t c1,
                       double* out) {
  for (size_t c = c0; c < c1; ++c) out[c] = 0.0;
  for (size_t r : rows) {
    const double* p = points + r * dim;
    for (size_t c = c0; c < c1; ++c) out[c] += p[c];
  }
  const double n = static_cast<double>(rows.size());
  for (size_t c = c0; c < c1; ++c) out[c] /= n;
}

inline void AffineRow(const double* x, size_t in, const double* w,
                      const double* b, size_t out, double* z) {
  for (size_t j = 0; j < out; ++j) z[j] = b[j];
  for (size_t k = 0; k < in; ++k) {
    const double xk = x[k];
    if (xk == 0.0) continue;
    const double* wk = w + k * out;
    for (size_t j = 0; j < out; ++j) z[j] += xk * wk[j];
  }
}

// Accumulates rows [k0, k1) of dw.
inline void WeightGradientRange(const double* dz, const double* x, size_t batch,
                                size_t in, size_t out, size_t k0, size_t k1,
                                double* dw) {
  std::fill(dw + k0 * out, dw + k1 * out, 0.0);
  for (size_t i = 0; i < batch; ++i) {
    const double* xi = x + i * in;
    const double* dzi = dz + i * out;
    for (size_t k = k0; k < k1; ++k) {
      const double xk = xi[k];
      if (xk == 0.0) continue;
      double* dwk = dw + k * out;
      for (size_t j = 0; j < out; ++j) dwk[j] += xk * dzi[j];
    }
  }
}

inline void BiasGradient(const double* dz, size_t batch, size_t out,
                         double* db) {
  std::fill(db, db + out, 0.0);
  for (size_t i = 0; i < batch; ++i) {
    const double* dzi = dz + i * out;
    for (size_t j = 0; j < out; ++j) db[j] += dzi[j];
  }
}

inline void InputGradientRow(const double* dz, const double* w, size_t in,
                             size_t out, double* dx) {
  for (size_t k = 0; k < in; ++k) {
    const double* wk = w + k * out;
    double acc = 0.0;
    for (size_t j = 0; j < out; ++j) acc += dz[j] * wk[j];
    dx[k] = acc;
  }
}

}  // namespace

namespace serial {

void SquaredDistances(std::span<const double> points, size_t dim,
                      std::span<const size_t> rows,
                      std::span<const double> query, std::span<double> out) {
  for (size_t t = 0; t < rows.size(); ++t) {
    out[t] = SquaredDistance(points.data() + rows[t] * dim, query.data(), dim);
  }
}

void ColumnMeans(std::span<const double> points, size_t dim,
                 std::span<const size_t> rows, std::span<double> out) {
  ColumnSums(points.data(), dim, rows, 0, dim, out.data());
}

void AffineForward(std::span<const double> x, size_t batch, size_t in,
                   std::span<const double> w, std::span<const double> b,
                   size_t out, std::span<double> z) {
  for (size_t i = 0; i < batch; ++i) {
    AffineRow(x.data() + i * in, in, w.data(), b.data(), out,
              z.data() + i * out);
  }
}

void WeightGradients(std::span<const double> dz, std::span<const double> x,
                     size_t batch, size_t in, size_t out, std::span<double> dw,
                     std::span<double> db) {
  WeightGradientRange(dz.data(), x.data(), batch, in, out, 0, in, dw.data());
  BiasGradient(dz.data(), batch, out, db.data());
}

void InputGradients(std::span<const double> dz, std::span<const double> w,
                    size_t batch, size_t in, size_t out, std::span<double> dx) {
  for (size_t i = 0; i < batch; ++i) {
    InputGradientRow(dz.data() + i * out, w.data(), in, out,
                     dx.data() + i * in);
  }
}

}  // namespace serial

namespace parallel {

void SquaredDistances(std::span<const double> points, size_t dim,
                      std::span<const size_t> rows,
                      std::span<const double> query, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(static) if (rows.size() * dim > kParallelThreshold)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    out[t] = SquaredDistance(points.data() + rows[t] * dim, query.data(), dim);
  }
}

void ColumnMeans(std::span<const double> points, size_t dim,
                 std::span<const size_t> rows, std::span<double> out) {
#pragma omp parallel if (rows.size() * dim > kParallelThreshold)
  {
    size_t c0, c1;
    ThreadRange(dim, c0, c1);
    ColumnSums(points.data(), dim, rows, c0, c1, out.data());
  }
}

void AffineForward(std::span<const double> x, size_t batch, size_t in,
                   std::span<const double> w, std::span<const double> b,
                   size_t out, std::span<double> z) {
  const auto n = static_cast<std::ptrdiff_t>(batch);
#pragma omp parallel for schedule(static) if (batch * in * out > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    AffineRow(x.data() + i * in, in, w.data(), b.data(), out,
              z.data() + i * out);
  }
}

void WeightGradients(std::span<const double> dz, std::span<const double> x,
                     size_t batch, size_t in, size_t out, std::span<double> dw,
                     std::span<double> db) {
#pragma omp parallel if (batch * in * out > kParallelThreshold)
  {
    size_t k0, k1;
    ThreadRange(in, k0, k1);
    WeightGradientRange(dz.data(), x.data(), batch, in, out, k0, k1,
                        dw.data());
#pragma omp single
    BiasGradient(dz.data(), batch, out, db.data());
  }
}

void InputGradients(std::span<const double> dz, std::span<const double> w,
                    size_t batch, size_t in, size_t out, std::span<double> dx) {
  const auto n = static_cast<std::ptrdiff_t>(batch);
#pragma omp parallel for schedule(static) if (batch * in * out > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    InputGradientRow(dz.data() + i * out, w.data(), in, out,
                     dx.data() + i * in);
  }
}

}  // namespace parallel

int MaxThreads() { return omp_get_max_threads(); }
void SetThreads(int threads) { omp_set_num_threads(threads); }

}  // namespace eupg::kernels
