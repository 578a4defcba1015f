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

#include "eupg/kanon/k_anonymity.h"

#include <algorithm>
#include <limits>
#include <map>
#include <vector>

namespace eupg::kanon {

KAnonymityReport VerifyKAnonymity(const data::TabularDataset& ds, size_t k) {
  const auto qi = ds.schema().QuasiIdentifierIndices();
  std::map<std::vector<double>, size_t> classes;
  std::vector<double> key(qi.size());
  for (size_t i = 0; i < ds.rows(); ++i) {
    for (size_t q = 0; q < qi.size(); ++q) key[q] = ds.at(i, qi[q]);
    ++classes[key];
  }
  KAnonymityReport report;
  report.equivalence_classes = classes.size();
  report.min_class_size =
      classes.empty() ? 0 : std::numeric_limits<size_t>::max();
  for (const auto& [tuple, count] : classes) {
    report.min_class_size = std::min(report.min_class_size, count);
    if (count < k) ++report.violating_combination_count;
  }
  report.ok = report.violating_combination_count == 0;
  return report;
}

}  // namespace eupg::kanon
