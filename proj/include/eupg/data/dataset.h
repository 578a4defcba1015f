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

#ifndef EUPG_DATA_DATASET_H_
#define EUPG_DATA_DATASET_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eupg/data/schema.h"

namespace eupg::data {

// Where a dataset came from. `parameter` is k for k-anonymized data and the
// total epsilon for DP-protected data; unused otherwise.
struct DatasetProvenance {
  enum class Kind {
    kRaw,
    kKAnonymized,
    kDpProtected,
    kRetainSubset,
    kForgetSubset,
  };
  Kind kind = Kind::kRaw;
  double parameter = 0.0;

  static DatasetProvenance Raw() { return {}; }
  static DatasetProvenance KAnonymized(size_t k) {
    return {Kind::kKAnonymized, static_cast<double>(k)};
  }
  static DatasetProvenance DpProtected(double epsilon) {
    return {Kind::kDpProtected, epsilon};
  }
  static DatasetProvenance Retain() { return {Kind::kRetainSubset, 0.0}; }
  static DatasetProvenance Forget() { return {Kind::kForgetSubset, 0.0}; }

  std::string ToString() const;
  bool operator==(const DatasetProvenance&) const = default;
};

// Immutable table of cells. A cell holds either a numeric value or, for
// categorical attributes, the category index stored as a double (exact for
// any realistic category count).
class TabularDataset {
 public:
  TabularDataset() = default;
  // Validates every invariant; throws DataError on violation.
  TabularDataset(Schema schema, std::vector<double> cells,
                 DatasetProvenance provenance = DatasetProvenance::Raw(),
                 std::optional<std::vector<size_t>> source_indices =
                     std::nullopt);

  const Schema& schema() const { return schema_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return schema_.size(); }
  double at(size_t row, size_t col) const { return cells_[row * cols() + col]; }
  std::span<const double> row(size_t r) const {
    return {cells_.data() + r * cols(), cols()};
  }
  const std::vector<double>& cells() const { return cells_; }
  const DatasetProvenance& provenance() const { return provenance_; }
  const std::optional<std::vector<size_t>>& source_indices() const {
    return source_indices_;
  }

  // Class labels (category indices of the class attribute).
  std::vector<int> Labels() const;
  std::vector<double> Column(size_t col) const;

  // Rows in the given order; source_indices map back to this dataset's rows
  // (composed with this dataset's own source_indices when present).
  TabularDataset Select(std::span<const size_t> rows,
                        DatasetProvenance provenance) const;
  // Same schema and source indices, new cells.
  TabularDataset WithCells(std::vector<double> cells,
                           DatasetProvenance provenance) const;

 private:
  void Validate() const;

  Schema schema_;
  std::vector<double> cells_;
  size_t rows_ = 0;
  DatasetProvenance provenance_;
  std::optional<std::vector<size_t>> source_indices_;
};

}  // namespace eupg::data

#endif  // EUPG_DATA_DATASET_H_
