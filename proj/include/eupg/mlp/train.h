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

#ifndef EUPG_MLP_TRAIN_H_
#define EUPG_MLP_TRAIN_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "eupg/data/encoding.h"
#include "eupg/mlp/model.h"

namespace eupg::mlp {

// Mini-batch Adam on mean cross-entropy.
struct TrainConfig {
  size_t batch_size = 512;
  double learning_rate = 1e-2;
  // Learning rate for Finetune; defaults to learning_rate.
  std::optional<double> finetune_learning_rate;
  size_t epochs = 100;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  uint64_t seed = 0;

  void Validate() const;
};

// Gradient of the mean loss, same shapes as the model's layers.
struct Gradients {
  std::vector<DenseLayer> layers;
};

// Mean cross-entropy over `batch` rows and, when `grads` is non-null, its
// gradient by backpropagation.
double LossAndGradients(const MlpModel& model, std::span<const double> x,
                        std::span<const int> labels, size_t batch,
                        Gradients* grads);

// Runs cfg.epochs epochs starting from `model`. Epoch e visits rows in the
// order of a permutation drawn from the RNG stream (cfg.seed, e); the final
// batch of an epoch may be short. Adam moments start at zero on every call.
// Returns a new model with the input's provenance; `epoch_losses`, when
// given, receives the mean batch loss of every epoch. Throws NumericError if
// the loss or parameters become non-finite.
MlpModel Train(const MlpModel& model, const data::EncodedMatrix& data,
               const TrainConfig& cfg,
               std::vector<double>* epoch_losses = nullptr);

// Continues training for `epochs` epochs at the fine-tuning learning rate on
// the fine-tuning RNG stream of cfg.seed. epochs == 0 returns `model`
// unchanged; otherwise the result is tagged FinetunedProvenance.
MlpModel Finetune(const MlpModel& model, const data::EncodedMatrix& data,
                  size_t epochs, const TrainConfig& cfg);

// Architecture {width, hidden..., classes} for an encoded dataset.
std::vector<size_t> LayerDimsFor(const data::EncodedMatrix& data,
                                 const std::vector<size_t>& hidden);

}  // namespace eupg::mlp

#endif  // EUPG_MLP_TRAIN_H_
