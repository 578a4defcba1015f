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

#include "eupg/data/dataset.h"

#include <cmath>
#include <unordered_set>

#include "eupg/common/error.h"

namespace eupg::data {

std::string DatasetProvenance::ToString() const {
  switch (kind) {
    case Kind::kRaw:
      return "raw";
    case Kind::kKAnonymized:
      return "k_anonymized(k=" + std::to_string(static_cast<size_t>(parameter)) +
             ")";
    case Kind::kDpProtected: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "dp_protected(epsilon=%g)", parameter);
      return buf;
    }
    case Kind::kRetainSubset:
      return "retain_subset";
    case Kind::kForgetSubset:
      return "forget_subset";
  }
  return "raw";
}

TabularDataset::TabularDataset(Schema schema, std::vector<double> cells,
                               DatasetProvenance provenance,
                               std::optional<std::vector<size_t>> source_indices)
    : schema_(std::move(schema)),
      cells_(std::move(cells)),
      provenance_(provenance),
      source_indices_(std::move(source_indices)) {
  if (schema_.size() == 0) throw DataError("dataset schema is empty");
  if (cells_.size() % schema_.size() != 0) {
    throw DataError("cell count is not a multiple of the attribute count");
  }
  rows_ = cells_.size() / schema_.size();
  Validate();
}

void TabularDataset::Validate() const {
  const size_t c = cols();
  for (size_t j = 0; j < c; ++j) {
    const auto& a = schema_[j];
    for (size_t i = 0; i < rows_; ++i) {
      const double v = cells_[i * c + j];
      if (a.is_numeric()) {
        if (!std::isfinite(v)) {
          throw DataError("row " + std::to_string(i + 1) + ", column \"" +
                          a.name + "\": non-finite numeric value");
        }
      } else if (v < 0 || v != std::floor(v) ||
                 v >= static_cast<double>(a.categories.size())) {
        throw DataError("row " + std::to_string(i + 1) + ", column \"" +
                        a.name + "\": category index out of range");
      }
    }
  }
  if (source_indices_) {
    if (source_indices_->size() != rows_) {
      throw DataError("source_indices length differs from row count");
    }
    std::unordered_set<size_t> seen;
    for (size_t s : *source_indices_) {
      if (!seen.insert(s).second) {
        throw DataError("source_indices contain a duplicate");
      }
    }
  }
}

std::vector<int> TabularDataset::Labels() const {
  const size_t ci = schema_.class_index();
  std::vector<int> labels(rows_);
  for (size_t i = 0; i < rows_; ++i) {
    labels[i] = static_cast<int>(at(i, ci));
  }
  return labels;
}

std::vector<double> TabularDataset::Column(size_t col) const {
  std::vector<double> out(rows_);
  for (size_t i = 0; i < rows_; ++i) out[i] = at(i, col);
  return out;
}

TabularDataset TabularDataset::Select(std::span<const size_t> rows,
                                      DatasetProvenance provenance) const {
  const size_t c = cols();
  std::vector<double> cells;
  cells.reserve(rows.size() * c);
  std::vector<size_t> sources;
  sources.reserve(rows.size());
  for (size_t r : rows) {
    if (r >= rows_) {
      throw InvalidArgumentError("row index " + std::to_string(r) +
                                 " out of bounds");
    }
    cells.insert(cells.end(), cells_.begin() + r * c,
                 cells_.begin() + (r + 1) * c);
    sources.push_back(source_indices_ ? (*source_indices_)[r] : r);
  }
  return TabularDataset(schema_, std::move(cells), provenance,
                        std::move(sources));
}

TabularDataset TabularDataset::WithCells(std::vector<double> cells,
                                         DatasetProvenance provenance) const {
  if (cells.size() != cells_.size()) {
    throw DataError("replacement cells have a different shape");
  }
  return TabularDataset(schema_, std::move(cells), provenance,
                        source_indices_);
}

}  // namespace eupg::data
