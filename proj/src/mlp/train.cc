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

#include "eupg/mlp/train.h"

#include <algorithm>
#include <cmath>

#include "eupg/common/error.h"
#include "eupg/common/rng.h"
#include "eupg/kernels/kernels.h"

namespace eupg::mlp {
namespace {

constexpr uint64_t kFinetuneStream = 0x66696e6574756e65ULL;  // "finetune"

// Activations of one batch: acts[0] is the input, acts[l + 1] the output of
// layer l (post-ReLU for hidden layers, logits for the last one).
struct Workspace {
  std::vector<std::vector<double>> acts;
  std::vector<double> delta;
  std::vector<double> delta_prev;
};

double ForwardBatch(const MlpModel& model, std::span<const double> x,
                    std::span<const int> labels, size_t batch, Workspace& ws) {
  const auto& layers = model.layers();
  ws.acts.resize(layers.size() + 1);
  ws.acts[0].assign(x.begin(), x.end());
  for (size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    auto& out = ws.acts[l + 1];
    out.assign(batch * layer.outputs, 0.0);
    kernels::parallel::AffineForward(ws.acts[l], batch, layer.inputs,
                                     layer.weights, layer.biases,
                                     layer.outputs, out);
    if (l + 1 < layers.size()) {
      for (double& v : out) v = v > 0.0 ? v : 0.0;
    }
  }
  // Softmax in place; loss from the log-sum-exp of the logits.
  const size_t c = model.num_classes();
  auto& z = ws.acts.back();
  double loss = 0.0;
  for (size_t i = 0; i < batch; ++i) {
    double* zi = z.data() + i * c;
    const double mx = *std::max_element(zi, zi + c);
    double total = 0.0;
    for (size_t j = 0; j < c; ++j) total += std::exp(zi[j] - mx);
    const double lse = mx + std::log(total);
    loss += lse - zi[labels[i]];
    for (size_t j = 0; j < c; ++j) zi[j] = std::exp(zi[j] - lse);
  }
  return loss / static_cast<double>(batch);
}

void BackwardBatch(const MlpModel& model, std::span<const int> labels,
                   size_t batch, Workspace& ws, Gradients& grads) {
  const auto& layers = model.layers();
  const size_t c = model.num_classes();
  const double inv_batch = 1.0 / static_cast<double>(batch);
  ws.delta = ws.acts.back();
  for (size_t i = 0; i < batch; ++i) {
    double* d = ws.delta.data() + i * c;
    d[labels[i]] -= 1.0;
    for (size_t j = 0; j < c; ++j) d[j] *= inv_batch;
  }
  grads.layers.resize(layers.size());
  for (size_t l = layers.size(); l-- > 0;) {
    const auto& layer = layers[l];
    auto& g = grads.layers[l];
    g.inputs = layer.inputs;
    g.outputs = layer.outputs;
    g.weights.resize(layer.weights.size());
    g.biases.resize(layer.biases.size());
    kernels::parallel::WeightGradients(ws.delta, ws.acts[l], batch,
                                       layer.inputs, layer.outputs, g.weights,
                                       g.biases);
    if (l == 0) break;
    ws.delta_prev.resize(batch * layer.inputs);
    kernels::parallel::InputGradients(ws.delta, layer.weights, batch,
                                      layer.inputs, layer.outputs,
                                      ws.delta_prev);
    // ReLU derivative: the stored activation is zero exactly where the
    // pre-activation was non-positive.
    const auto& a = ws.acts[l];
    for (size_t t = 0; t < ws.delta_prev.size(); ++t) {
      if (!(a[t] > 0.0)) ws.delta_prev[t] = 0.0;
    }
    ws.delta.swap(ws.delta_prev);
  }
}

class Adam {
 public:
  Adam(const MlpModel& model, const TrainConfig& cfg, double lr)
      : cfg_(cfg), lr_(lr) {
    for (const auto& l : model.layers()) {
      m_.emplace_back(l.weights.size() + l.biases.size(), 0.0);
      v_.emplace_back(l.weights.size() + l.biases.size(), 0.0);
    }
  }

  void Step(MlpModel& model, const Gradients& grads) {
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    auto& layers = model.mutable_layers();
    for (size_t l = 0; l < layers.size(); ++l) {
      Update(layers[l].weights, grads.layers[l].weights, m_[l].data(),
             v_[l].data(), bc1, bc2);
      const size_t off = layers[l].weights.size();
      Update(layers[l].biases, grads.layers[l].biases, m_[l].data() + off,
             v_[l].data() + off, bc1, bc2);
    }
  }

 private:
  void Update(std::vector<double>& p, const std::vector<double>& g, double* m,
              double* v, double bc1, double bc2) const {
    const double b1 = cfg_.beta1, b2 = cfg_.beta2;
    for (size_t i = 0; i < p.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      p[i] -= lr_ * m_hat / (std::sqrt(v_hat) + cfg_.adam_epsilon);
    }
  }

  const TrainConfig& cfg_;
  double lr_;
  uint64_t t_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

void CheckData(const MlpModel& model, const data::EncodedMatrix& data) {
  if (data.width != model.input_dim()) {
    throw InvalidArgumentError("data width " + std::to_string(data.width) +
                               " does not match model input " +
                               std::to_string(model.input_dim()));
  }
  if (data.labels.size() != data.rows) {
    throw InvalidArgumentError("training data needs one label per row");
  }
  for (int y : data.labels) {
    if (y < 0 || static_cast<size_t>(y) >= model.num_classes()) {
      throw InvalidArgumentError("label " + std::to_string(y) +
                                 " outside the model's output range");
    }
  }
}

MlpModel RunTraining(const MlpModel& model, const data::EncodedMatrix& data,
                     const TrainConfig& cfg, double lr, uint64_t seed,
                     std::vector<double>* epoch_losses) {
  cfg.Validate();
  CheckData(model, data);
  MlpModel out = model;
  if (cfg.epochs == 0 || data.rows == 0) return out;

  Adam adam(out, cfg, lr);
  Workspace ws;
  Gradients grads;
  const size_t n = data.rows;
  const size_t width = data.width;
  std::vector<double> xb;
  std::vector<int> yb;
  for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng rng = Rng::ForStream(seed, {epoch});
    const auto perm = RandomPermutation(n, rng);
    double loss_sum = 0.0;
    size_t batches = 0;
    for (size_t start = 0; start < n; start += cfg.batch_size) {
      const size_t b = std::min(cfg.batch_size, n - start);
      xb.resize(b * width);
      yb.resize(b);
      for (size_t t = 0; t < b; ++t) {
        const size_t r = perm[start + t];
        std::copy_n(data.features.begin() + r * width, width,
                    xb.begin() + t * width);
        yb[t] = data.labels[r];
      }
      const double loss = ForwardBatch(out, xb, yb, b, ws);
      if (!std::isfinite(loss)) {
        throw NumericError("non-finite training loss at epoch " +
                           std::to_string(epoch) + ", batch " +
                           std::to_string(batches));
      }
      BackwardBatch(out, yb, b, ws, grads);
      adam.Step(out, grads);
      loss_sum += loss;
      ++batches;
    }
    if (epoch_losses) epoch_losses->push_back(loss_sum / batches);
  }
  if (!out.AllFinite()) {
    throw NumericError("training produced non-finite parameters");
  }
  out.set_train_seed(seed);
  return out;
}

}  // namespace

void TrainConfig::Validate() const {
  if (batch_size == 0) throw InvalidArgumentError("batch_size must be positive");
  if (!(learning_rate > 0.0)) {
    throw InvalidArgumentError("learning_rate must be positive");
  }
  if (finetune_learning_rate && !(*finetune_learning_rate > 0.0)) {
    throw InvalidArgumentError("finetune_learning_rate must be positive");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw InvalidArgumentError("Adam betas must lie in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) {
    throw InvalidArgumentError("adam_epsilon must be positive");
  }
}

double LossAndGradients(const MlpModel& model, std::span<const double> x,
                        std::span<const int> labels, size_t batch,
                        Gradients* grads) {
  if (x.size() != batch * model.input_dim() || labels.size() != batch) {
    throw InvalidArgumentError("batch shape mismatch");
  }
  Workspace ws;
  const double loss = ForwardBatch(model, x, labels, batch, ws);
  if (grads) BackwardBatch(model, labels, batch, ws, *grads);
  return loss;
}

MlpModel Train(const MlpModel& model, const data::EncodedMatrix& data,
               const TrainConfig& cfg, std::vector<double>* epoch_losses) {
  return RunTraining(model, data, cfg, cfg.learning_rate, cfg.seed,
                     epoch_losses);
}

MlpModel Finetune(const MlpModel& model, const data::EncodedMatrix& data,
                  size_t epochs, const TrainConfig& cfg) {
  if (epochs == 0) {
    cfg.Validate();
    CheckData(model, data);
    return model;
  }
  TrainConfig ft = cfg;
  ft.epochs = epochs;
  MlpModel out =
      RunTraining(model, data, ft, cfg.finetune_learning_rate.value_or(cfg.learning_rate),
                  MixSeed(cfg.seed, kFinetuneStream), nullptr);
  out.set_provenance(FinetunedProvenance(model.provenance(), epochs));
  return out;
}

std::vector<size_t> LayerDimsFor(const data::EncodedMatrix& data,
                                 const std::vector<size_t>& hidden) {
  std::vector<size_t> dims{data.width};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(data.num_classes);
  return dims;
}

}  // namespace eupg::mlp
