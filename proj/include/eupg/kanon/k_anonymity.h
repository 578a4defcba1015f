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

#ifndef EUPG_KANON_K_ANONYMITY_H_
#define EUPG_KANON_K_ANONYMITY_H_

#include <cstddef>

#include "eupg/data/dataset.h"

namespace eupg::kanon {

struct KAnonymityReport {
  bool ok = true;
  // Distinct quasi-identifier tuples shared by fewer than k rows.
  size_t violating_combination_count = 0;
  // Size of the smallest equivalence class (0 for an empty dataset).
  size_t min_class_size = 0;
  size_t equivalence_classes = 0;
};

// Groups rows by their exact quasi-identifier tuple.
KAnonymityReport VerifyKAnonymity(const data::TabularDataset& ds, size_t k);

}  // namespace eupg::kanon

#endif  // EUPG_KANON_K_ANONYMITY_H_
