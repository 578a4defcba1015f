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

#ifndef EUPG_UNLEARN_EUPG_H_
#define EUPG_UNLEARN_EUPG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eupg/data/dataset.h"
#include "eupg/data/forget.h"
#include "eupg/dpanon/dp_table.h"
#include "eupg/kanon/k_anonymity.h"
#include "eupg/mlp/model.h"
#include "eupg/mlp/train.h"

namespace eupg::unlearn {

// Privacy model applied to the training set before pre-training.
struct PrivacySpec {
  enum class Model { kKAnonymity, kDifferentialPrivacy };
  Model model = Model::kKAnonymity;
  size_t k = 10;
  double epsilon = 0.5;
  dpanon::MechanismSpec mechanisms;
  // Seeds the DP noise; MDAV is deterministic and ignores it.
  uint64_t seed = 0;

  static PrivacySpec KAnonymity(size_t k);
  static PrivacySpec DifferentialPrivacy(double epsilon, uint64_t seed,
                                         dpanon::MechanismSpec mechanisms = {});
  void Validate() const;
  // "k=10" or "epsilon=0.5".
  std::string Describe() const;
};

struct ForgetEvent {
  std::vector<size_t> forget_indices;
  std::optional<double> ratio;
  uint64_t request_seed = 0;
  size_t epochs = 0;
  double runtime_seconds = 0.0;
};

struct EupgTimings {
  double anonymize_seconds = 0.0;
  double train_seconds = 0.0;
  double finetune_seconds = 0.0;
};

// Everything the model manager keeps between forgetting requests.
struct EupgState {
  PrivacySpec spec;
  std::vector<size_t> hidden;
  data::TabularDataset protected_data;  // D^k or D^eps
  mlp::MlpModel base_model;             // M^k / M^eps, never modified
  mlp::MlpModel deployed_model;         // fine-tuned on D, then on D_r
  std::vector<ForgetEvent> audit_log;
  EupgTimings timings;
  std::optional<kanon::KAnonymityReport> k_anonymity;
  std::optional<dpanon::DpBudget> budget;
};

// Forgetting-amenable training: protect D, pre-train the base model on the
// protected data (fresh initialization from cfg.seed), then fine-tune it on
// D for `finetune_epochs` epochs to obtain the deployed model.
EupgState EupgPrepare(const data::TabularDataset& raw,
                      const PrivacySpec& spec,
                      const std::vector<size_t>& hidden,
                      const mlp::TrainConfig& cfg, size_t finetune_epochs);

// Serves a forgetting request: discards the deployed model and fine-tunes
// the base model on D_r = D \ D_f. The new deployed model depends only on
// (base model, D_r, epochs, cfg); in particular never on the contents of
// D_f or on earlier deployed models.
EupgState EupgForget(const EupgState& state, const data::TabularDataset& raw,
                     const data::ForgetRequest& req, size_t epochs,
                     const mlp::TrainConfig& cfg);

// Plain training from a fresh initialization (seed cfg.seed). Used for the
// original model on D and for exact retraining on D_r.
mlp::MlpModel TrainFromScratch(const data::TabularDataset& ds,
                               const std::vector<size_t>& hidden,
                               const mlp::TrainConfig& cfg);

}  // namespace eupg::unlearn

#endif  // EUPG_UNLEARN_EUPG_H_
