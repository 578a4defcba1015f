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

#ifndef EUPG_KANON_MDAV_H_
#define EUPG_KANON_MDAV_H_

#include <cstddef>
#include <span>
#include <vector>

#include "eupg/data/dataset.h"
#include "eupg/data/encoding.h"

namespace eupg::kanon {

// Partition of dataset rows into clusters of k..2k-1 rows.
struct Clustering {
  std::vector<std::vector<size_t>> clusters;
  size_t k = 2;

  // Throws InvalidArgumentError unless clusters are disjoint, cover 0..n-1
  // and every size s satisfies k <= s <= 2k-1.
  void Validate(size_t n) const;
};

// Maximum Distance to Average Vector microaggregation over the rows of a
// dense row-major matrix (Euclidean distance):
//
//   while >= 3k rows remain:
//     x_r = row farthest from the centroid of the remaining rows
//     cluster x_r with its k-1 nearest remaining rows
//     x_s = remaining row farthest from x_r
//     cluster x_s with its k-1 nearest remaining rows
//   if 2k..3k-1 rows remain:
//     cluster the row farthest from their centroid with its k-1 nearest;
//     the rest form the final cluster
//   else the (fewer than 2k) remaining rows form the final cluster
//
// Distance ties are broken by the lowest row index. Requires k >= 2 and
// rows >= k.
Clustering Mdav(std::span<const double> points, size_t rows, size_t dim,
                size_t k);
inline Clustering Mdav(const data::EncodedMatrix& m, size_t k) {
  return Mdav(m.features, m.rows, m.width, k);
}

// Replaces every quasi-identifier cell with its cluster centroid: the mean
// (raw units) for numeric attributes, the mode (lowest index on ties) for
// categorical ones. Other attributes are untouched.
data::TabularDataset CentroidReplace(const data::TabularDataset& ds,
                                     const Clustering& clustering);

struct KAnonymizationResult {
  data::TabularDataset data;
  Clustering clustering;
};

// MDAV over the one-hot/min-max encoded quasi-identifiers followed by
// centroid replacement.
KAnonymizationResult KAnonymize(const data::TabularDataset& ds, size_t k);

}  // namespace eupg::kanon

#endif  // EUPG_KANON_MDAV_H_
