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

#ifndef EUPG_DATA_FORGET_H_
#define EUPG_DATA_FORGET_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "eupg/data/dataset.h"

namespace eupg::data {

// Rows of the raw training set whose removal is requested.
struct ForgetRequest {
  std::vector<size_t> forget_indices;  // sorted, unique
  std::optional<double> ratio;
  uint64_t seed = 0;

  // floor(ratio * n) rows drawn uniformly without replacement.
  static ForgetRequest FromRatio(size_t n, double ratio, uint64_t seed);
  // Explicit rows; validated against n and deduplicated-checked.
  static ForgetRequest FromIndices(std::vector<size_t> indices, size_t n);
};

struct RetainForgetSplit {
  TabularDataset retain;
  TabularDataset forget;
  std::vector<size_t> retain_indices;
};

// Disjoint partition of `ds` (which must be raw). Both halves keep the
// original row order and carry source_indices into `ds`.
RetainForgetSplit SplitForget(const TabularDataset& ds,
                              const ForgetRequest& req);

// Complement of `forget` within 0..n-1, ascending.
std::vector<size_t> RetainIndices(size_t n, const std::vector<size_t>& forget);

}  // namespace eupg::data

#endif  // EUPG_DATA_FORGET_H_
