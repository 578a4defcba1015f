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

#ifndef EUPG_DATA_CSV_H_
#define EUPG_DATA_CSV_H_

#include <iosfwd>
#include <string>

#include "eupg/data/dataset.h"

namespace eupg::data {

// CSV dialect: comma separated, first line is a header naming the schema's
// attributes in order, UTF-8. Categorical fields may be double-quoted
// (with "" as the escaped quote); numeric fields may not. Empty cells are
// missing values and rejected.
//
// The returned dataset carries a completed copy of `schema`: numeric
// attributes without a range get the observed min/max, open categorical
// attributes get the labels seen, in order of first appearance. Load
// further splits (e.g. a test file) against `train.schema()` so they share
// category indices and normalization ranges.
TabularDataset ReadCsv(std::istream& in, const Schema& schema,
                       const std::string& source_name = "<stream>");
TabularDataset LoadCsv(const std::string& path, const Schema& schema);

// Writes a dataset so that ReadCsv(…, ds.schema()) restores identical cells.
void WriteCsv(const TabularDataset& ds, std::ostream& out);
void SaveCsv(const TabularDataset& ds, const std::string& path);

}  // namespace eupg::data

#endif  // EUPG_DATA_CSV_H_
