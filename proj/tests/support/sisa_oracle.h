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

// SISA retraining from scratch on the retained rows.

#ifndef EUPG_TESTS_SUPPORT_SISA_ORACLE_H_
#define EUPG_TESTS_SUPPORT_SISA_ORACLE_H_

#include <algorithm>
#include <vector>

#include "eupg/data/encoding.h"
#include "eupg/mlp/model.h"
#include "eupg/mlp/train.h"
#include "eupg/unlearn/sisa.h"

namespace eupg::testing {

// Final model of shard s trained from its initialization with the store's
// shard/slice assignment, skipping every row in store.forgotten.
inline mlp::MlpModel SisaShardFromScratch(const unlearn::ShardStore& store,
                                          const data::EncodedMatrix& data,
                                          size_t s) {
  auto model = mlp::MlpModel::Init(store.layer_dims, store.InitSeed(s));
  for (size_t r = 0; r < store.slices; ++r) {
    std::vector<size_t> rows;
    for (size_t i = 0; i < store.total_rows; ++i) {
      if (store.shard_of[i] == s && store.slice_of[i] <= r &&
          !std::binary_search(store.forgotten.begin(), store.forgotten.end(),
                              i)) {
        rows.push_back(i);
      }
    }
    if (rows.empty()) continue;
    mlp::TrainConfig cfg = store.cfg;
    cfg.epochs = store.epochs_per_slice;
    cfg.seed = store.SliceSeed(s, r);
    model = mlp::Train(model, data::SelectRows(data, rows), cfg);
  }
  return model;
}

}  // namespace eupg::testing

#endif  // EUPG_TESTS_SUPPORT_SISA_ORACLE_H_
