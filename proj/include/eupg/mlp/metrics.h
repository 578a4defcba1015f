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

#ifndef EUPG_MLP_METRICS_H_
#define EUPG_MLP_METRICS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "eupg/data/encoding.h"
#include "eupg/mlp/model.h"

namespace eupg::mlp {

// All metrics operate on a row-major probability matrix so that ensembles
// (SISA) and single models share one implementation.

// -ln p[label]; probabilities are floored at 1e-300.
std::vector<double> LossPerExample(std::span<const double> probs,
                                   std::span<const int> labels,
                                   size_t classes);

// Shannon entropy (natural log) of each predicted distribution.
std::vector<double> EntropyPerExample(std::span<const double> probs,
                                      size_t classes);

// Fraction of rows whose argmax (lowest index on ties) equals the label.
double Accuracy(std::span<const double> probs, std::span<const int> labels,
                size_t classes);

// ROC AUC of the class-1 probability; requires two classes with both
// present among the labels.
double AucUtility(std::span<const double> probs, std::span<const int> labels,
                  size_t classes);

std::vector<double> LossPerExample(const MlpModel& model,
                                   const data::EncodedMatrix& data);
std::vector<double> EntropyPerExample(const MlpModel& model,
                                      const data::EncodedMatrix& data);
double Accuracy(const MlpModel& model, const data::EncodedMatrix& data);
double AucUtility(const MlpModel& model, const data::EncodedMatrix& data);

}  // namespace eupg::mlp

#endif  // EUPG_MLP_METRICS_H_
