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

// Synthetic datasets shared by the unit and acceptance tests.

#ifndef EUPG_TESTS_SUPPORT_FIXTURES_H_
#define EUPG_TESTS_SUPPORT_FIXTURES_H_

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "eupg/common/rng.h"
#include "eupg/data/dataset.h"
#include "eupg/data/encoding.h"
#include "eupg/data/schema.h"
#include "eupg/mlp/model.h"
#include "eupg/mlp/model_io.h"

namespace eupg::testing {

// Schema with `numeric` numeric and `categorical` categorical
// quasi-identifiers (`levels` labels each) and a binary class "y".
inline data::Schema MixedSchema(size_t numeric, size_t categorical,
                                size_t levels = 4) {
  std::string text;
  for (size_t i = 0; i < numeric; ++i) {
    text += "n" + std::to_string(i) + ",numeric,quasi_identifier,0,100\n";
  }
  for (size_t i = 0; i < categorical; ++i) {
    text += "c" + std::to_string(i) + ",categorical,quasi_identifier,";
    for (size_t l = 0; l < levels; ++l) {
      text += (l ? "|" : "") + std::string("v") + std::to_string(l);
    }
    text += "\n";
  }
  text += "y,categorical,class,no|yes\n";
  return data::Schema::Parse(text);
}

// Rows whose class depends (noisily) on the first numeric attribute and the
// first categorical one, so that a model has something to learn.
inline data::TabularDataset MixedDataset(size_t rows, size_t numeric,
                                         size_t categorical, uint64_t seed,
                                         size_t levels = 4) {
  const auto schema = MixedSchema(numeric, categorical, levels);
  Rng rng(seed);
  std::vector<double> cells;
  cells.reserve(rows * schema.size());
  for (size_t r = 0; r < rows; ++r) {
    double signal = 0.0;
    for (size_t i = 0; i < numeric; ++i) {
      const double v = std::round(rng.Uniform() * 1000.0) / 10.0;
      if (i == 0) signal += (v - 50.0) / 25.0;
      cells.push_back(v);
    }
    for (size_t i = 0; i < categorical; ++i) {
      const auto c = static_cast<double>(rng.UniformIndex(levels));
      if (i == 0) signal += c < levels / 2.0 ? -1.0 : 1.0;
      cells.push_back(c);
    }
    signal += 1.5 * (rng.Uniform() - 0.5);
    cells.push_back(signal > 0.0 ? 1.0 : 0.0);
  }
  return data::TabularDataset(schema, std::move(cells));
}

// Two Gaussian-ish blobs in `dim` dimensions, linearly separable with a
// wide margin; features already in [0, 1].
inline data::EncodedMatrix Blobs(size_t rows, size_t dim, uint64_t seed) {
  Rng rng(seed);
  data::EncodedMatrix m;
  m.rows = rows;
  m.width = dim;
  m.num_classes = 2;
  for (size_t r = 0; r < rows; ++r) {
    const int label = static_cast<int>(r % 2);
    const double center = label ? 0.75 : 0.25;
    for (size_t d = 0; d < dim; ++d) {
      m.features.push_back(center + 0.2 * (rng.Uniform() - 0.5));
    }
    m.labels.push_back(label);
  }
  return m;
}

// Dense random matrix with values in [0, 1).
inline std::vector<double> RandomPoints(size_t rows, size_t dim, Rng& rng) {
  std::vector<double> p(rows * dim);
  for (double& v : p) v = rng.Uniform();
  return p;
}

inline std::string ModelBytes(const mlp::MlpModel& model) {
  std::ostringstream out;
  mlp::WriteModel(model, out);
  return out.str();
}

// Copy of `ds` in which every cell of the listed rows takes a different
// random value within its declared range or category set.
inline data::TabularDataset MutateRows(const data::TabularDataset& ds,
                                       const std::vector<size_t>& rows,
                                       uint64_t seed) {
  Rng rng(seed);
  std::vector<double> cells = ds.cells();
  const auto& schema = ds.schema();
  for (size_t r : rows) {
    for (size_t j = 0; j < schema.size(); ++j) {
      const auto& attr = schema[j];
      double& cell = cells[r * schema.size() + j];
      const double before = cell;
      while (cell == before) {
        if (attr.is_numeric()) {
          cell = attr.range->min +
                 rng.Uniform() * (attr.range->max - attr.range->min);
        } else {
          cell = static_cast<double>(rng.UniformIndex(attr.categories.size()));
        }
      }
    }
  }
  return data::TabularDataset(schema, std::move(cells));
}

}  // namespace eupg::testing

#endif  // EUPG_TESTS_SUPPORT_FIXTURES_H_
