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

#ifndef EUPG_ATTACK_MIA_H_
#define EUPG_ATTACK_MIA_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eupg/data/encoding.h"
#include "eupg/mlp/model.h"

namespace eupg::attack {

// Threshold-free membership inference. Each record gets a membership score
// (higher means "member"): the negated per-example loss for the loss-based
// attack, the negated prediction entropy for the entropy-based attack. The
// attack is summarized by the ROC AUC of member vs non-member scores.
enum class AttackKind { kLossBased, kEntropyBased };

std::string_view AttackName(AttackKind kind);
// Accepts "loss" / "loss_based" and "entropy" / "entropy_based".
AttackKind ParseAttack(std::string_view name);

struct MiaResult {
  AttackKind attack = AttackKind::kLossBased;
  std::vector<double> member_scores;
  std::vector<double> nonmember_scores;
  double auc = 0.5;
  size_t member_count = 0;
  size_t nonmember_count = 0;
};

// Scores are the negated per-example values (losses or entropies).
MiaResult MiaFromPerExample(AttackKind kind,
                            std::span<const double> member_values,
                            std::span<const double> nonmember_values);

// From predicted class probabilities (row-major, `classes` wide).
MiaResult MiaFromProbabilities(AttackKind kind,
                               std::span<const double> member_probs,
                               std::span<const int> member_labels,
                               std::span<const double> nonmember_probs,
                               std::span<const int> nonmember_labels,
                               size_t classes);

MiaResult MiaScores(const mlp::MlpModel& model,
                    const data::EncodedMatrix& members,
                    const data::EncodedMatrix& nonmembers, AttackKind kind);

// Equal-sized member/non-member row subsets: the larger population is
// subsampled (seeded, without replacement) to the size of the smaller one.
struct BalancedPopulations {
  std::vector<size_t> member_rows;
  std::vector<size_t> nonmember_rows;
};
BalancedPopulations BalancePopulations(size_t members, size_t nonmembers,
                                       uint64_t seed);

}  // namespace eupg::attack

#endif  // EUPG_ATTACK_MIA_H_
