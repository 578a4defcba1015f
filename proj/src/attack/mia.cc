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

#include "eupg/attack/mia.h"

#include <numeric>

#include "eupg/attack/auc.h"
#include "eupg/common/error.h"
#include "eupg/common/rng.h"
#include "eupg/mlp/metrics.h"

namespace eupg::attack {

std::string_view AttackName(AttackKind kind) {
  return kind == AttackKind::kLossBased ? "loss_based" : "entropy_based";
}

AttackKind ParseAttack(std::string_view name) {
  if (name == "loss" || name == "loss_based") return AttackKind::kLossBased;
  if (name == "entropy" || name == "entropy_based") {
    return AttackKind::kEntropyBased;
  }
  throw InvalidArgumentError("unknown attack '" + std::string(name) + "'");
}

MiaResult MiaFromPerExample(AttackKind kind,
                            std::span<const double> member_values,
                            std::span<const double> nonmember_values) {
  if (member_values.empty() || nonmember_values.empty()) {
    throw InvalidArgumentError("membership inference needs non-empty member "
                               "and non-member populations");
  }
  MiaResult r;
  r.attack = kind;
  r.member_scores.reserve(member_values.size());
  for (double v : member_values) r.member_scores.push_back(-v);
  r.nonmember_scores.reserve(nonmember_values.size());
  for (double v : nonmember_values) r.nonmember_scores.push_back(-v);
  r.member_count = r.member_scores.size();
  r.nonmember_count = r.nonmember_scores.size();
  r.auc = RocAuc(r.member_scores, r.nonmember_scores);
  return r;
}

MiaResult MiaFromProbabilities(AttackKind kind,
                               std::span<const double> member_probs,
                               std::span<const int> member_labels,
                               std::span<const double> nonmember_probs,
                               std::span<const int> nonmember_labels,
                               size_t classes) {
  if (kind == AttackKind::kLossBased) {
    return MiaFromPerExample(
        kind, mlp::LossPerExample(member_probs, member_labels, classes),
        mlp::LossPerExample(nonmember_probs, nonmember_labels, classes));
  }
  return MiaFromPerExample(kind, mlp::EntropyPerExample(member_probs, classes),
                           mlp::EntropyPerExample(nonmember_probs, classes));
}

MiaResult MiaScores(const mlp::MlpModel& model,
                    const data::EncodedMatrix& members,
                    const data::EncodedMatrix& nonmembers, AttackKind kind) {
  if (members.rows == 0 || nonmembers.rows == 0) {
    throw InvalidArgumentError("membership inference needs non-empty member "
                               "and non-member populations");
  }
  return MiaFromProbabilities(
      kind, mlp::Forward(model, members.features, members.rows), members.labels,
      mlp::Forward(model, nonmembers.features, nonmembers.rows),
      nonmembers.labels, model.num_classes());
}

BalancedPopulations BalancePopulations(size_t members, size_t nonmembers,
                                       uint64_t seed) {
  BalancedPopulations out;
  const size_t n = std::min(members, nonmembers);
  Rng rng(seed);
  auto pick = [&](size_t total) {
    if (total == n) {
      std::vector<size_t> all(total);
      std::iota(all.begin(), all.end(), size_t{0});
      return all;
    }
    return SampleWithoutReplacement(total, n, rng);
  };
  out.member_rows = pick(members);
  out.nonmember_rows = pick(nonmembers);
  return out;
}

}  // namespace eupg::attack
