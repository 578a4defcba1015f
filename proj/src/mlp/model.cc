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

#include "eupg/mlp/model.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "eupg/common/error.h"
#include "eupg/common/rng.h"
#include "eupg/kernels/kernels.h"

namespace eupg::mlp {

MlpModel::MlpModel(std::vector<size_t> layer_dims,
                   std::vector<DenseLayer> layers, std::string provenance,
                   uint64_t train_seed)
    : layer_dims_(std::move(layer_dims)),
      layers_(std::move(layers)),
      provenance_(std::move(provenance)),
      train_seed_(train_seed) {
  if (layer_dims_.size() < 2) {
    throw InvalidArgumentError("an MLP needs at least input and output dims");
  }
  if (layers_.size() != layer_dims_.size() - 1) {
    throw InvalidArgumentError("layer count does not match layer_dims");
  }
  for (size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    if (layer.inputs != layer_dims_[l] || layer.outputs != layer_dims_[l + 1] ||
        layer.weights.size() != layer.inputs * layer.outputs ||
        layer.biases.size() != layer.outputs) {
      throw InvalidArgumentError("layer " + std::to_string(l) +
                                 " shape inconsistent with layer_dims");
    }
  }
}

MlpModel MlpModel::Init(std::vector<size_t> layer_dims, uint64_t seed) {
  if (layer_dims.size() < 2) {
    throw InvalidArgumentError("an MLP needs at least input and output dims");
  }
  for (size_t d : layer_dims) {
    if (d == 0) throw InvalidArgumentError("layer dims must be >= 1");
  }
  Rng rng(seed);
  std::vector<DenseLayer> layers;
  for (size_t l = 0; l + 1 < layer_dims.size(); ++l) {
    DenseLayer layer;
    layer.inputs = layer_dims[l];
    layer.outputs = layer_dims[l + 1];
    const double a =
        std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
    layer.weights.resize(layer.inputs * layer.outputs);
    for (double& w : layer.weights) w = (2.0 * rng.Uniform() - 1.0) * a;
    layer.biases.assign(layer.outputs, 0.0);
    layers.push_back(std::move(layer));
  }
  return MlpModel(std::move(layer_dims), std::move(layers),
                  OriginalProvenance(), seed);
}

size_t MlpModel::ParameterCount() const {
  size_t n = 0;
  for (const auto& l : layers_) n += l.weights.size() + l.biases.size();
  return n;
}

bool MlpModel::AllFinite() const {
  for (const auto& l : layers_) {
    for (double w : l.weights) {
      if (!std::isfinite(w)) return false;
    }
    for (double b : l.biases) {
      if (!std::isfinite(b)) return false;
    }
  }
  return true;
}

std::vector<double> MlpModel::FlatParameters() const {
  std::vector<double> out;
  out.reserve(ParameterCount());
  for (const auto& l : layers_) {
    out.insert(out.end(), l.weights.begin(), l.weights.end());
    out.insert(out.end(), l.biases.begin(), l.biases.end());
  }
  return out;
}

void MlpModel::SetFlatParameters(std::span<const double> params) {
  if (params.size() != ParameterCount()) {
    throw InvalidArgumentError("parameter vector has the wrong length");
  }
  size_t pos = 0;
  for (auto& l : layers_) {
    std::copy_n(params.begin() + pos, l.weights.size(), l.weights.begin());
    pos += l.weights.size();
    std::copy_n(params.begin() + pos, l.biases.size(), l.biases.begin());
    pos += l.biases.size();
  }
}

bool SameParameters(const MlpModel& a, const MlpModel& b) {
  if (a.layer_dims() != b.layer_dims()) return false;
  const auto pa = a.FlatParameters();
  const auto pb = b.FlatParameters();
  return std::memcmp(pa.data(), pb.data(), pa.size() * sizeof(double)) == 0;
}

std::string OriginalProvenance() { return "original"; }

std::string ProtectedProvenance(const std::string& privacy) {
  return "protected(" + privacy + ")";
}

std::string FinetunedProvenance(const std::string& parent, size_t epochs) {
  return "finetuned(" + parent + ";epochs=" + std::to_string(epochs) + ")";
}

std::string SisaProvenance(size_t shard, size_t slice) {
  return "sisa(shard=" + std::to_string(shard) +
         ";slice=" + std::to_string(slice) + ")";
}

bool DescendsFrom(const std::string& tag, const std::string& ancestor) {
  std::string current = tag;
  while (true) {
    if (current == ancestor) return true;
    const std::string prefix = "finetuned(";
    if (current.rfind(prefix, 0) != 0) return false;
    const auto sep = current.rfind(";epochs=");
    if (sep == std::string::npos) return false;
    current = current.substr(prefix.size(), sep - prefix.size());
  }
}

std::vector<double> Forward(const MlpModel& model,
                            std::span<const double> features, size_t rows) {
  if (features.size() != rows * model.input_dim()) {
    throw InvalidArgumentError(
        "feature matrix width does not match the model input dimension (" +
        std::to_string(model.input_dim()) + ")");
  }
  std::vector<double> act(features.begin(), features.end());
  std::vector<double> next;
  const auto& layers = model.layers();
  for (size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    next.assign(rows * layer.outputs, 0.0);
    kernels::parallel::AffineForward(act, rows, layer.inputs, layer.weights,
                                     layer.biases, layer.outputs, next);
    if (l + 1 < layers.size()) {
      for (double& v : next) v = v > 0.0 ? v : 0.0;
    }
    act.swap(next);
  }
  const size_t c = model.num_classes();
  for (size_t i = 0; i < rows; ++i) {
    double* z = act.data() + i * c;
    const double mx = *std::max_element(z, z + c);
    double total = 0.0;
    for (size_t j = 0; j < c; ++j) {
      z[j] = std::exp(z[j] - mx);
      total += z[j];
    }
    for (size_t j = 0; j < c; ++j) z[j] /= total;
  }
  return act;
}

}  // namespace eupg::mlp
