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

#include "eupg/mlp/metrics.h"

#include <algorithm>
#include <cmath>

#include "eupg/attack/auc.h"
#include "eupg/common/error.h"

namespace eupg::mlp {
namespace {

size_t RowCount(std::span<const double> probs, size_t classes) {
  if (classes == 0 || probs.size() % classes != 0) {
    throw InvalidArgumentError("probability matrix shape mismatch");
  }
  return probs.size() / classes;
}

}  // namespace

std::vector<double> LossPerExample(std::span<const double> probs,
                                   std::span<const int> labels,
                                   size_t classes) {
  const size_t n = RowCount(probs, classes);
  if (labels.size() != n) throw InvalidArgumentError("label count mismatch");
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    out[i] = -std::log(std::max(probs[i * classes + labels[i]], 1e-300));
  }
  return out;
}

std::vector<double> EntropyPerExample(std::span<const double> probs,
                                      size_t classes) {
  const size_t n = RowCount(probs, classes);
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    double h = 0.0;
    for (size_t j = 0; j < classes; ++j) {
      const double p = probs[i * classes + j];
      if (p > 0.0) h -= p * std::log(p);
    }
    out[i] = h;
  }
  return out;
}

double Accuracy(std::span<const double> probs, std::span<const int> labels,
                size_t classes) {
  const size_t n = RowCount(probs, classes);
  if (labels.size() != n) throw InvalidArgumentError("label count mismatch");
  if (n == 0) return 0.0;
  size_t correct = 0;
  for (size_t i = 0; i < n; ++i) {
    const double* row = probs.data() + i * classes;
    const auto pred = std::max_element(row, row + classes) - row;
    if (pred == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

double AucUtility(std::span<const double> probs, std::span<const int> labels,
                  size_t classes) {
  const size_t n = RowCount(probs, classes);
  if (classes != 2) throw InvalidArgumentError("AUC utility needs two classes");
  if (labels.size() != n) throw InvalidArgumentError("label count mismatch");
  std::vector<double> pos, neg;
  for (size_t i = 0; i < n; ++i) {
    (labels[i] == 1 ? pos : neg).push_back(probs[i * 2 + 1]);
  }
  if (pos.empty() || neg.empty()) {
    throw InvalidArgumentError("AUC utility needs both classes present");
  }
  return attack::RocAuc(pos, neg);
}

std::vector<double> LossPerExample(const MlpModel& model,
                                   const data::EncodedMatrix& data) {
  return LossPerExample(Forward(model, data.features, data.rows), data.labels,
                        model.num_classes());
}

std::vector<double> EntropyPerExample(const MlpModel& model,
                                      const data::EncodedMatrix& data) {
  return EntropyPerExample(Forward(model, data.features, data.rows),
                           model.num_classes());
}

double Accuracy(const MlpModel& model, const data::EncodedMatrix& data) {
  return Accuracy(Forward(model, data.features, data.rows), data.labels,
                  model.num_classes());
}

double AucUtility(const MlpModel& model, const data::EncodedMatrix& data) {
  return AucUtility(Forward(model, data.features, data.rows), data.labels,
                    model.num_classes());
}

}  // namespace eupg::mlp
