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

#include "eupg/unlearn/eupg.h"

#include <cmath>
#include <cstdio>

#include "eupg/common/error.h"
#include "eupg/common/stopwatch.h"
#include "eupg/data/encoding.h"
#include "eupg/kanon/mdav.h"

namespace eupg::unlearn {

PrivacySpec PrivacySpec::KAnonymity(size_t k) {
  PrivacySpec s;
  s.model = Model::kKAnonymity;
  s.k = k;
  return s;
}

PrivacySpec PrivacySpec::DifferentialPrivacy(double epsilon, uint64_t seed,
                                             dpanon::MechanismSpec mechanisms) {
  PrivacySpec s;
  s.model = Model::kDifferentialPrivacy;
  s.epsilon = epsilon;
  s.seed = seed;
  s.mechanisms = std::move(mechanisms);
  return s;
}

void PrivacySpec::Validate() const {
  if (model == Model::kKAnonymity && k < 2) {
    throw InvalidArgumentError("k-anonymity needs k >= 2");
  }
  if (model == Model::kDifferentialPrivacy &&
      !(epsilon > 0.0 && std::isfinite(epsilon))) {
    throw InvalidArgumentError("epsilon must be positive and finite");
  }
}

std::string PrivacySpec::Describe() const {
  if (model == Model::kKAnonymity) return "k=" + std::to_string(k);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "epsilon=%g", epsilon);
  return buf;
}

mlp::MlpModel TrainFromScratch(const data::TabularDataset& ds,
                               const std::vector<size_t>& hidden,
                               const mlp::TrainConfig& cfg) {
  const auto enc = data::Encode(ds);
  auto model = mlp::MlpModel::Init(mlp::LayerDimsFor(enc, hidden), cfg.seed);
  return mlp::Train(model, enc, cfg);
}

EupgState EupgPrepare(const data::TabularDataset& raw, const PrivacySpec& spec,
                      const std::vector<size_t>& hidden,
                      const mlp::TrainConfig& cfg, size_t finetune_epochs) {
  spec.Validate();
  cfg.Validate();
  if (raw.provenance().kind != data::DatasetProvenance::Kind::kRaw) {
    throw InvalidArgumentError("EUPG expects the raw training set");
  }
  EupgState st;
  st.spec = spec;
  st.hidden = hidden;

  Stopwatch watch;
  if (spec.model == PrivacySpec::Model::kKAnonymity) {
    st.protected_data = kanon::KAnonymize(raw, spec.k).data;
    st.k_anonymity = kanon::VerifyKAnonymity(st.protected_data, spec.k);
  } else {
    auto dp = dpanon::DpProtectTable(raw, spec.epsilon, spec.mechanisms,
                                     spec.seed);
    st.protected_data = std::move(dp.data);
    st.budget = std::move(dp.budget);
  }
  st.timings.anonymize_seconds = watch.ElapsedSeconds();

  watch.Restart();
  const auto protected_enc = data::Encode(st.protected_data);
  auto init =
      mlp::MlpModel::Init(mlp::LayerDimsFor(protected_enc, hidden), cfg.seed);
  st.base_model = mlp::Train(init, protected_enc, cfg);
  st.base_model.set_provenance(mlp::ProtectedProvenance(spec.Describe()));
  st.timings.train_seconds = watch.ElapsedSeconds();

  watch.Restart();
  const auto raw_enc = data::Encode(raw);
  st.deployed_model =
      mlp::Finetune(st.base_model, raw_enc, finetune_epochs, cfg);
  st.timings.finetune_seconds = watch.ElapsedSeconds();
  return st;
}

EupgState EupgForget(const EupgState& state, const data::TabularDataset& raw,
                     const data::ForgetRequest& req, size_t epochs,
                     const mlp::TrainConfig& cfg) {
  Stopwatch watch;
  const auto split = data::SplitForget(raw, req);
  if (split.retain.rows() == 0) {
    throw InvalidArgumentError("forgetting every row leaves nothing to fine-tune on");
  }
  // Only D_r is encoded; D_f never reaches the model.
  const auto retain_enc = data::Encode(split.retain);
  EupgState next = state;
  next.deployed_model = mlp::Finetune(state.base_model, retain_enc, epochs, cfg);
  ForgetEvent ev;
  ev.forget_indices = req.forget_indices;
  ev.ratio = req.ratio;
  ev.request_seed = req.seed;
  ev.epochs = epochs;
  ev.runtime_seconds = watch.ElapsedSeconds();
  next.audit_log.push_back(std::move(ev));
  return next;
}

}  // namespace eupg::unlearn
