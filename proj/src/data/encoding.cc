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

#include "eupg/data/encoding.h"

#include <algorithm>

#include "eupg/common/error.h"

namespace eupg::data {
namespace {

NumericRange RangeFor(const AttributeSchema& a, size_t rows) {
  if (a.range) return *a.range;
  if (rows == 0) return {};
  throw DataError("attribute '" + a.name + "' has no normalization range");
}

}  // namespace

EncodedMatrix EncodeAttributes(const TabularDataset& ds,
                               std::span<const size_t> attributes,
                               const EncodeOptions& opts) {
  const Schema& schema = ds.schema();
  EncodedMatrix m;
  m.rows = ds.rows();
  m.normalization.resize(schema.size());
  for (size_t a : attributes) {
    const auto& attr = schema[a];
    const size_t w = attr.is_numeric() ? 1 : attr.categories.size();
    m.column_map.push_back({a, m.width, w});
    m.width += w;
    if (attr.is_numeric()) m.normalization[a] = RangeFor(attr, m.rows);
  }
  m.features.assign(m.rows * m.width, 0.0);
  for (const auto& block : m.column_map) {
    const auto& attr = schema[block.attribute];
    const NumericRange range = m.normalization[block.attribute];
    const double span = range.width();
    for (size_t i = 0; i < m.rows; ++i) {
      double* out = m.features.data() + i * m.width + block.offset;
      double v = ds.at(i, block.attribute);
      if (attr.is_categorical()) {
        out[static_cast<size_t>(v)] = 1.0;
        continue;
      }
      if (!range.Contains(v)) {
        if (attr.range_declared && !opts.clamp_declared_range) {
          throw DataError("row " + std::to_string(i + 1) + ", column \"" +
                          attr.name + "\": value outside declared range");
        }
        v = std::clamp(v, range.min, range.max);
        ++m.clamped_cells;
      }
      out[0] = span > 0.0 ? (v - range.min) / span : 0.0;
    }
  }
  return m;
}

EncodedMatrix Encode(const TabularDataset& ds, const EncodeOptions& opts) {
  const Schema& schema = ds.schema();
  const auto features = schema.NonClassIndices();
  EncodedMatrix m = EncodeAttributes(ds, features, opts);
  m.labels = ds.Labels();
  m.num_classes = schema.num_classes();
  return m;
}

TabularDataset Decode(const EncodedMatrix& m, const Schema& schema) {
  const size_t ci = schema.class_index();
  std::vector<double> cells(m.rows * schema.size(), 0.0);
  for (size_t i = 0; i < m.rows; ++i) {
    double* out = cells.data() + i * schema.size();
    const double* in = m.features.data() + i * m.width;
    for (const auto& block : m.column_map) {
      const auto& attr = schema[block.attribute];
      if (attr.is_numeric()) {
        const NumericRange r = m.normalization[block.attribute];
        out[block.attribute] = r.min + in[block.offset] * r.width();
      } else {
        const double* first = in + block.offset;
        out[block.attribute] = static_cast<double>(
            std::max_element(first, first + block.width) - first);
      }
    }
    if (!m.labels.empty()) out[ci] = m.labels[i];
  }
  return TabularDataset(schema, std::move(cells), DatasetProvenance::Raw());
}

EncodedMatrix SelectRows(const EncodedMatrix& m, std::span<const size_t> rows) {
  EncodedMatrix out;
  out.rows = rows.size();
  out.width = m.width;
  out.num_classes = m.num_classes;
  out.column_map = m.column_map;
  out.normalization = m.normalization;
  out.features.reserve(rows.size() * m.width);
  if (!m.labels.empty()) out.labels.reserve(rows.size());
  for (size_t r : rows) {
    if (r >= m.rows) throw InvalidArgumentError("row index out of bounds");
    const auto src = m.row(r);
    out.features.insert(out.features.end(), src.begin(), src.end());
    if (!m.labels.empty()) out.labels.push_back(m.labels[r]);
  }
  return out;
}

}  // namespace eupg::data
