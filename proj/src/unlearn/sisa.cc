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

#include "eupg/unlearn/sisa.h"

#include <algorithm>
#include <exception>
#include <set>

#include "eupg/common/error.h"
#include "eupg/common/rng.h"

namespace eupg::unlearn {
namespace {

constexpr uint64_t kAssignStream = 0x61737369676eULL;  // "assign"
constexpr uint64_t kInitStream = 0x696e6974ULL;        // "init"
constexpr uint64_t kSliceStream = 0x736c696365ULL;     // "slice"

// Retrains shard `s` of `store` in place from slice `first` onward.
void TrainShardFrom(ShardStore& store, const data::EncodedMatrix& data,
                    size_t s, size_t first) {
  mlp::MlpModel model =
      first == 0 ? mlp::MlpModel::Init(store.layer_dims, store.InitSeed(s))
                 : store.checkpoints[s][first - 1];
  for (size_t r = first; r < store.slices; ++r) {
    const auto rows = store.CumulativeRows(s, r);
    if (!rows.empty()) {
      mlp::TrainConfig cfg = store.cfg;
      cfg.epochs = store.epochs_per_slice;
      cfg.seed = store.SliceSeed(s, r);
      model = mlp::Train(model, data::SelectRows(data, rows), cfg);
    }
    model.set_provenance(mlp::SisaProvenance(s, r));
    store.checkpoints[s][r] = model;
  }
}

// Runs fn(s) for every listed shard, possibly concurrently. Shards share no
// mutable state, so results do not depend on scheduling.
template <typename Fn>
void ForEachShard(const std::vector<size_t>& shards, Fn fn) {
  std::exception_ptr error;
  const auto n = static_cast<std::ptrdiff_t>(shards.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      fn(shards[i]);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

uint64_t ShardStore::InitSeed(size_t shard) const {
  return MixSeed(seed, {kInitStream, shard});
}

uint64_t ShardStore::SliceSeed(size_t shard, size_t slice) const {
  return MixSeed(seed, {kSliceStream, shard, slice});
}

std::vector<size_t> ShardStore::CumulativeRows(size_t shard,
                                               size_t slice) const {
  std::vector<size_t> rows;
  for (size_t r = 0; r <= slice; ++r) {
    const auto& part = slice_rows[shard][r];
    rows.insert(rows.end(), part.begin(), part.end());
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

ShardStore SisaTrain(const data::EncodedMatrix& data, size_t shards,
                     size_t slices, const std::vector<size_t>& hidden,
                     const mlp::TrainConfig& cfg) {
  cfg.Validate();
  if (shards == 0 || slices == 0) {
    throw InvalidArgumentError("SISA needs at least one shard and one slice");
  }
  if (shards * slices > data.rows) {
    throw InvalidArgumentError("SISA needs shards * slices <= rows");
  }
  ShardStore store;
  store.shards = shards;
  store.slices = slices;
  store.layer_dims = mlp::LayerDimsFor(data, hidden);
  store.cfg = cfg;
  store.epochs_per_slice = (cfg.epochs + slices - 1) / slices;
  store.seed = cfg.seed;
  store.total_rows = data.rows;
  store.shard_of.assign(data.rows, 0);
  store.slice_of.assign(data.rows, 0);
  store.slice_rows.assign(shards, std::vector<std::vector<size_t>>(slices));

  Rng rng(MixSeed(cfg.seed, kAssignStream));
  const auto perm = RandomPermutation(data.rows, rng);
  std::vector<size_t> shard_fill(shards, 0);
  for (size_t i = 0; i < perm.size(); ++i) {
    const size_t row = perm[i];
    const size_t s = i % shards;
    const size_t r = shard_fill[s]++ % slices;
    store.shard_of[row] = s;
    store.slice_of[row] = r;
    store.slice_rows[s][r].push_back(row);
  }
  for (auto& shard : store.slice_rows) {
    for (auto& slice : shard) std::sort(slice.begin(), slice.end());
  }

  store.checkpoints.assign(shards, std::vector<mlp::MlpModel>(slices));
  std::vector<size_t> all(shards);
  for (size_t s = 0; s < shards; ++s) all[s] = s;
  ForEachShard(all, [&](size_t s) { TrainShardFrom(store, data, s, 0); });
  return store;
}

ShardStore SisaForget(const ShardStore& store, const data::EncodedMatrix& data,
                      std::span<const size_t> forget_rows,
                      SisaForgetStats* stats) {
  if (data.rows != store.total_rows) {
    throw InvalidArgumentError("SISA forget needs the dataset the store was trained on");
  }
  ShardStore next = store;
  std::vector<size_t> first_affected(store.shards, store.slices);
  std::set<size_t> forgotten(store.forgotten.begin(), store.forgotten.end());
  for (size_t row : forget_rows) {
    if (row >= store.total_rows) {
      throw InvalidArgumentError("forget row " + std::to_string(row) +
                                 " out of bounds");
    }
    if (!forgotten.insert(row).second) continue;  // already forgotten
    const size_t s = store.shard_of[row];
    const size_t r = store.slice_of[row];
    auto& slice = next.slice_rows[s][r];
    slice.erase(std::lower_bound(slice.begin(), slice.end(), row));
    first_affected[s] = std::min(first_affected[s], r);
  }
  next.forgotten.assign(forgotten.begin(), forgotten.end());

  std::vector<size_t> affected;
  for (size_t s = 0; s < store.shards; ++s) {
    if (first_affected[s] < store.slices) affected.push_back(s);
  }
  ForEachShard(affected, [&](size_t s) {
    TrainShardFrom(next, data, s, first_affected[s]);
  });
  if (stats) {
    stats->retrained_shards = affected;
    stats->retrained_slices = 0;
    for (size_t s : affected) stats->retrained_slices += store.slices - first_affected[s];
  }
  return next;
}

std::vector<double> SisaPredict(const ShardStore& store,
                                std::span<const double> features,
                                size_t rows) {
  std::vector<double> mean;
  for (size_t s = 0; s < store.shards; ++s) {
    const auto p = mlp::Forward(store.final_model(s), features, rows);
    if (mean.empty()) {
      mean = p;
    } else {
      for (size_t i = 0; i < p.size(); ++i) mean[i] += p[i];
    }
  }
  const double inv = 1.0 / static_cast<double>(store.shards);
  for (double& v : mean) v *= inv;
  return mean;
}

}  // namespace eupg::unlearn
