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

#ifndef EUPG_MLP_MODEL_H_
#define EUPG_MLP_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace eupg::mlp {

// Fully connected layer. weights[k * outputs + j] connects input k to
// output j.
struct DenseLayer {
  size_t inputs = 0;
  size_t outputs = 0;
  std::vector<double> weights;
  std::vector<double> biases;
};

// Feed-forward classifier: dense layers with ReLU between them and softmax
// on the output. layer_dims = {input, hidden..., classes}.
class MlpModel {
 public:
  MlpModel() = default;
  MlpModel(std::vector<size_t> layer_dims, std::vector<DenseLayer> layers,
           std::string provenance, uint64_t train_seed);

  // Glorot-uniform weights, U(-a, a) with a = sqrt(6 / (fan_in + fan_out)),
  // zero biases. Weights are drawn layer by layer in storage order.
  static MlpModel Init(std::vector<size_t> layer_dims, uint64_t seed);

  const std::vector<size_t>& layer_dims() const { return layer_dims_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& mutable_layers() { return layers_; }
  size_t input_dim() const { return layer_dims_.front(); }
  size_t num_classes() const { return layer_dims_.back(); }

  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }
  uint64_t train_seed() const { return train_seed_; }
  void set_train_seed(uint64_t s) { train_seed_ = s; }

  size_t ParameterCount() const;
  bool AllFinite() const;

  // Parameters in file order: per layer, weights then biases.
  std::vector<double> FlatParameters() const;
  void SetFlatParameters(std::span<const double> params);

 private:
  std::vector<size_t> layer_dims_;
  std::vector<DenseLayer> layers_;
  std::string provenance_ = "original";
  uint64_t train_seed_ = 0;
};

// Same architecture and bit-identical parameters (provenance ignored).
bool SameParameters(const MlpModel& a, const MlpModel& b);

// Provenance tags. A fine-tuned model's tag embeds its parent's tag, so the
// chain back to the protected base model is recoverable from the model file.
std::string OriginalProvenance();
std::string ProtectedProvenance(const std::string& privacy);
std::string FinetunedProvenance(const std::string& parent, size_t epochs);
std::string SisaProvenance(size_t shard, size_t slice);
// True when `tag` equals `ancestor` or is a (repeated) fine-tuning of it.
bool DescendsFrom(const std::string& tag, const std::string& ancestor);

// Row-major class probabilities for `rows` feature rows.
std::vector<double> Forward(const MlpModel& model,
                            std::span<const double> features, size_t rows);

}  // namespace eupg::mlp

#endif  // EUPG_MLP_MODEL_H_
