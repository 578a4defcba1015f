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

#ifndef EUPG_DATA_ENCODING_H_
#define EUPG_DATA_ENCODING_H_

#include <cstddef>
#include <span>
#include <vector>

#include "eupg/data/dataset.h"

namespace eupg::data {

// Encoded columns [offset, offset + width) came from `attribute`.
struct ColumnBlock {
  size_t attribute = 0;
  size_t offset = 0;
  size_t width = 0;
};

// Dense row-major feature matrix plus integer labels.
struct EncodedMatrix {
  size_t rows = 0;
  size_t width = 0;
  std::vector<double> features;
  std::vector<int> labels;
  size_t num_classes = 0;
  std::vector<ColumnBlock> column_map;
  // Indexed by attribute; meaningful for numeric attributes only.
  std::vector<NumericRange> normalization;
  // Cells clamped into an inferred range (e.g. test values beyond the
  // training maximum).
  size_t clamped_cells = 0;

  std::span<const double> row(size_t i) const {
    return {features.data() + i * width, width};
  }
};

struct EncodeOptions {
  // Clamp values outside an explicitly declared range instead of throwing.
  // Values outside an inferred range are always clamped and counted.
  bool clamp_declared_range = false;
};

// Numeric attributes are min-max normalized with the schema range,
// categorical attributes one-hot expanded; the class attribute becomes the
// label vector. Column order follows schema order.
EncodedMatrix Encode(const TabularDataset& ds, const EncodeOptions& opts = {});

// Encodes only the listed attributes (no labels). Used for distance
// computations over quasi-identifiers.
EncodedMatrix EncodeAttributes(const TabularDataset& ds,
                               std::span<const size_t> attributes,
                               const EncodeOptions& opts = {});

// Inverse of Encode for `schema`: argmax of each one-hot block, numeric
// columns un-normalized. Produces a raw dataset.
TabularDataset Decode(const EncodedMatrix& m, const Schema& schema);

// Rows of `m` in the given order.
EncodedMatrix SelectRows(const EncodedMatrix& m, std::span<const size_t> rows);

}  // namespace eupg::data

#endif  // EUPG_DATA_ENCODING_H_
