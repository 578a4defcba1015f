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

#ifndef EUPG_DPANON_DP_TABLE_H_
#define EUPG_DPANON_DP_TABLE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eupg/data/dataset.h"
#include "eupg/dpanon/mechanisms.h"

namespace eupg::dpanon {

// Per-attribute mechanism settings. Attributes not listed use the defaults:
// numeric sensitivity = width of the schema range, categorical utility =
// CategoricalMechanism::Identity.
struct MechanismSpec {
  std::map<std::string, double> numeric_sensitivity;
  std::map<std::string, CategoricalMechanism> categorical;
};

// Loads utility matrices from a JSON file:
//
//   {"format": "eupg-utility/1",
//    "attributes": {
//      "<name>": {"categories": [labels...], "sensitivity": 1.0,
//                 "utility": [[row for label 0], [row for label 1], ...]}}}
//
// `categories` must be a permutation of the schema's labels; rows and
// columns are reordered into schema order. A null utility entry is -inf.
MechanismSpec LoadUtilityFile(const std::string& path,
                              const data::Schema& schema);

// Sequential-composition bookkeeping: one entry per protected attribute.
struct BudgetEntry {
  std::string attribute;
  std::string mechanism;  // "laplace" or "exponential"
  double epsilon = 0.0;
  double sensitivity = 0.0;
};

struct DpBudget {
  double epsilon_total = 0.0;
  size_t protected_attribute_count = 0;
  double per_attribute_epsilon = 0.0;
  std::vector<BudgetEntry> entries;

  double Spent() const;
};

struct DpProtectionResult {
  data::TabularDataset data;
  DpBudget budget;
  size_t clamped_cells = 0;
  uint64_t seed = 0;
};

// Protects every non-class attribute with epsilon_total / (non-class
// attribute count): Laplace noise for numeric cells (clamped into the
// schema range), the exponential mechanism for categorical cells. The class
// column is copied. Column j draws from the RNG stream (seed, j).
DpProtectionResult DpProtectTable(const data::TabularDataset& ds,
                                  double epsilon_total,
                                  const MechanismSpec& spec, uint64_t seed);

}  // namespace eupg::dpanon

#endif  // EUPG_DPANON_DP_TABLE_H_
