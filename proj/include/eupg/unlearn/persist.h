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

#ifndef EUPG_UNLEARN_PERSIST_H_
#define EUPG_UNLEARN_PERSIST_H_

#include <string>

#include "eupg/mlp/train.h"
#include "eupg/unlearn/eupg.h"
#include "eupg/unlearn/sisa.h"
#include "json.hpp"

namespace eupg::unlearn {

// Directory layouts, both versioned through manifest.json:
//
//   EUPG state:  manifest.json protected.schema protected.csv
//                base_model.bin deployed_model.bin
//   SISA store:  manifest.json checkpoints/shard<s>_slice<r>.bin
//
// Utility matrices used by the DP mechanisms are not persisted; they are
// only needed while protecting the data.
void SaveEupgState(const EupgState& state, const std::string& dir);
EupgState LoadEupgState(const std::string& dir);

void SaveShardStore(const ShardStore& store, const std::string& dir);
ShardStore LoadShardStore(const std::string& dir);

nlohmann::json TrainConfigToJson(const mlp::TrainConfig& cfg);
mlp::TrainConfig TrainConfigFromJson(const nlohmann::json& j);

}  // namespace eupg::unlearn

#endif  // EUPG_UNLEARN_PERSIST_H_
