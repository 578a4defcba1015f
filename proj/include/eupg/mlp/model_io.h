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

#ifndef EUPG_MLP_MODEL_IO_H_
#define EUPG_MLP_MODEL_IO_H_

#include <iosfwd>
#include <string>

#include "eupg/mlp/model.h"

namespace eupg::mlp {

// Model file, all integers and floats little-endian:
//
//   8 bytes   magic "EUPGMLP\0"
//   u32       format version (1)
//   u32       number of layer dims L
//   L x u64   layer dims
//   u64       train seed
//   u32       provenance length P, then P bytes of UTF-8
//   f64...    parameters: for each layer, weights (input-major,
//             inputs x outputs) then biases
//
// Saving then loading reproduces the model bit for bit.
inline constexpr uint32_t kModelFormatVersion = 1;

void WriteModel(const MlpModel& model, std::ostream& out);
MlpModel ReadModel(std::istream& in, const std::string& source = "<stream>");

void SaveModel(const MlpModel& model, const std::string& path);
MlpModel LoadModel(const std::string& path);

}  // namespace eupg::mlp

#endif  // EUPG_MLP_MODEL_IO_H_
