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

#include "eupg/data/forget.h"

#include <algorithm>
#include <cmath>

#include "eupg/common/error.h"
#include "eupg/common/rng.h"

namespace eupg::data {

ForgetRequest ForgetRequest::FromRatio(size_t n, double ratio, uint64_t seed) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw InvalidArgumentError("forget ratio must lie in [0, 1]");
  }
  const auto count = static_cast<size_t>(std::floor(ratio * static_cast<double>(n)));
  Rng rng(seed);
  ForgetRequest req;
  req.forget_indices = SampleWithoutReplacement(n, count, rng);
  req.ratio = ratio;
  req.seed = seed;
  return req;
}

ForgetRequest ForgetRequest::FromIndices(std::vector<size_t> indices,
                                         size_t n) {
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw InvalidArgumentError("forget indices contain duplicates");
  }
  if (!indices.empty() && indices.back() >= n) {
    throw InvalidArgumentError("forget index " + std::to_string(indices.back()) +
                               " out of bounds for " + std::to_string(n) +
                               " rows");
  }
  ForgetRequest req;
  req.forget_indices = std::move(indices);
  return req;
}

std::vector<size_t> RetainIndices(size_t n, const std::vector<size_t>& forget) {
  std::vector<size_t> retain;
  retain.reserve(n - std::min(n, forget.size()));
  size_t f = 0;
  for (size_t i = 0; i < n; ++i) {
    if (f < forget.size() && forget[f] == i) {
      ++f;
    } else {
      retain.push_back(i);
    }
  }
  return retain;
}

RetainForgetSplit SplitForget(const TabularDataset& ds,
                              const ForgetRequest& req) {
  if (ds.provenance().kind != DatasetProvenance::Kind::kRaw) {
    throw InvalidArgumentError("SplitForget expects a raw dataset, got " +
                               ds.provenance().ToString());
  }
  // Re-validate: requests may be built by hand.
  const auto checked = ForgetRequest::FromIndices(req.forget_indices, ds.rows());
  auto retain_idx = RetainIndices(ds.rows(), checked.forget_indices);
  auto retain = ds.Select(retain_idx, DatasetProvenance::Retain());
  auto forget = ds.Select(checked.forget_indices, DatasetProvenance::Forget());
  return {std::move(retain), std::move(forget), std::move(retain_idx)};
}

}  // namespace eupg::data
