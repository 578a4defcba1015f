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

#ifndef EUPG_UNLEARN_SISA_H_
#define EUPG_UNLEARN_SISA_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "eupg/data/encoding.h"
#include "eupg/mlp/model.h"
#include "eupg/mlp/train.h"

namespace eupg::unlearn {

// Sharded, isolated, sliced, aggregated training state.
//
// Rows are dealt round-robin to shards in the order of a seeded permutation,
// and within each shard round-robin to slices in the same order. Shard s
// starts from its own initialization (seed InitSeed) and, for r = 0..R-1,
// trains for epochs_per_slice = ceil(cfg.epochs / R) epochs on the union of
// slices 0..r (rows in ascending dataset order) using the RNG stream
// SliceSeed(s, r); the result is checkpoint (s, r). The shard's final model
// is checkpoint (s, R-1).
struct ShardStore {
  size_t shards = 0;
  size_t slices = 0;
  std::vector<size_t> layer_dims;
  mlp::TrainConfig cfg;
  size_t epochs_per_slice = 0;
  uint64_t seed = 0;
  size_t total_rows = 0;
  std::vector<size_t> shard_of;  // per dataset row
  std::vector<size_t> slice_of;  // per dataset row
  // slice_rows[s][r]: rows still held by slice r of shard s, ascending.
  std::vector<std::vector<std::vector<size_t>>> slice_rows;
  std::vector<std::vector<mlp::MlpModel>> checkpoints;  // [s][r]
  std::vector<size_t> forgotten;  // ascending

  const mlp::MlpModel& final_model(size_t s) const {
    return checkpoints[s].back();
  }
  uint64_t InitSeed(size_t shard) const;
  uint64_t SliceSeed(size_t shard, size_t slice) const;
  // Ascending union of slice_rows[s][0..r].
  std::vector<size_t> CumulativeRows(size_t shard, size_t slice) const;
};

ShardStore SisaTrain(const data::EncodedMatrix& data, size_t shards,
                     size_t slices, const std::vector<size_t>& hidden,
                     const mlp::TrainConfig& cfg);

struct SisaForgetStats {
  std::vector<size_t> retrained_shards;
  size_t retrained_slices = 0;
};

// For every shard holding a forgotten row, with r* its earliest affected
// slice: drop the rows, restore checkpoint (s, r*-1) (or the shard
// initialization when r* = 0) and retrain slices r*..R-1 on their original
// RNG streams. Unaffected shards are copied unchanged.
ShardStore SisaForget(const ShardStore& store, const data::EncodedMatrix& data,
                      std::span<const size_t> forget_rows,
                      SisaForgetStats* stats = nullptr);

// Mean of the shard models' softmax outputs.
std::vector<double> SisaPredict(const ShardStore& store,
                                std::span<const double> features, size_t rows);

}  // namespace eupg::unlearn

#endif  // EUPG_UNLEARN_SISA_H_
