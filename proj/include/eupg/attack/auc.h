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

#ifndef EUPG_ATTACK_AUC_H_
#define EUPG_ATTACK_AUC_H_

#include <span>

namespace eupg::attack {

// Probability that a random positive outscores a random negative, ties
// counting one half (Mann-Whitney U / (n m)), computed from mid-ranks in
// O((n + m) log(n + m)). Both populations must be non-empty.
double RocAuc(std::span<const double> positive_scores,
              std::span<const double> negative_scores);

}  // namespace eupg::attack

#endif  // EUPG_ATTACK_AUC_H_
