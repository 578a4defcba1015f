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

#include "eupg/attack/auc.h"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "eupg/common/error.h"

namespace eupg::attack {

double RocAuc(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) {
    throw InvalidArgumentError("ROC AUC needs non-empty populations");
  }
  std::vector<std::pair<double, bool>> all;
  all.reserve(pos.size() + neg.size());
  for (double s : pos) {
    if (std::isnan(s)) throw InvalidArgumentError("NaN score");
    all.emplace_back(s, true);
  }
  for (double s : neg) {
    if (std::isnan(s)) throw InvalidArgumentError("NaN score");
    all.emplace_back(s, false);
  }
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // Twice the rank sum keeps mid-ranks integral.
  double twice_rank_sum = 0.0;
  for (size_t i = 0; i < all.size();) {
    size_t j = i;
    size_t positives = 0;
    while (j < all.size() && all[j].first == all[i].first) {
      positives += all[j].second ? 1 : 0;
      ++j;
    }
    // Ranks i+1..j share the mid-rank (i + 1 + j) / 2.
    twice_rank_sum += static_cast<double>(positives) *
                      static_cast<double>(i + 1 + j);
    i = j;
  }
  const double n = static_cast<double>(pos.size());
  const double m = static_cast<double>(neg.size());
  const double u = (twice_rank_sum - n * (n + 1.0)) / 2.0;
  return u / (n * m);
}

}  // namespace eupg::attack
