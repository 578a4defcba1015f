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

#include "eupg/kanon/mdav.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "eupg/common/error.h"
#include "eupg/kernels/kernels.h"

namespace eupg::kanon {
namespace {

// Unassigned rows (ascending) and a scratch distance per unassigned row.
class MdavState {
 public:
  MdavState(std::span<const double> points, size_t rows, size_t dim, size_t k)
      : points_(points),
        dim_(dim),
        k_(k),
        remaining_(rows),
        dist_(rows),
        centroid_(dim) {
    std::iota(remaining_.begin(), remaining_.end(), size_t{0});
  }

  size_t remaining() const { return remaining_.size(); }
  size_t row_at(size_t pos) const { return remaining_[pos]; }

  void DistancesToRow(size_t row) {
    kernels::parallel::SquaredDistances(points_, dim_, remaining_,
                                        points_.subspan(row * dim_, dim_),
                                        std::span(dist_).first(remaining()));
  }

  void DistancesToCentroid() {
    kernels::parallel::ColumnMeans(points_, dim_, remaining_, centroid_);
    kernels::parallel::SquaredDistances(points_, dim_, remaining_, centroid_,
                                        std::span(dist_).first(remaining()));
  }

  // Position of the largest current distance; the first maximum has the
  // lowest row index because remaining_ is ascending.
  size_t Farthest() const {
    size_t best = 0;
    for (size_t t = 1; t < remaining(); ++t) {
      if (dist_[t] > dist_[best]) best = t;
    }
    return best;
  }

  // Removes the row at `seed` together with its k-1 nearest remaining rows
  // (by the current distances, which must be to that row). dist_ stays
  // aligned with remaining_.
  std::vector<size_t> TakeCluster(size_t seed) {
    std::vector<size_t> picked;
    picked.reserve(remaining() - 1);
    for (size_t t = 0; t < remaining(); ++t) {
      if (t != seed) picked.push_back(t);
    }
    auto closer = [this](size_t a, size_t b) {
      return dist_[a] < dist_[b] || (dist_[a] == dist_[b] && a < b);
    };
    std::nth_element(picked.begin(), picked.begin() + (k_ - 2), picked.end(),
                     closer);
    picked.resize(k_ - 1);
    picked.push_back(seed);
    std::sort(picked.begin(), picked.end());

    std::vector<size_t> cluster;
    cluster.reserve(k_);
    size_t w = 0, p = 0;
    for (size_t t = 0; t < remaining(); ++t) {
      if (p < picked.size() && picked[p] == t) {
        cluster.push_back(remaining_[t]);
        ++p;
        continue;
      }
      remaining_[w] = remaining_[t];
      dist_[w] = dist_[t];
      ++w;
    }
    remaining_.resize(w);
    return cluster;
  }

  std::vector<size_t> TakeAll() {
    std::vector<size_t> rest;
    rest.swap(remaining_);
    return rest;
  }

 private:
  std::span<const double> points_;
  size_t dim_;
  size_t k_;
  std::vector<size_t> remaining_;
  std::vector<double> dist_;
  std::vector<double> centroid_;
};

}  // namespace

void Clustering::Validate(size_t n) const {
  if (k < 2) throw InvalidArgumentError("clustering k must be >= 2");
  std::vector<bool> seen(n, false);
  size_t covered = 0;
  for (const auto& c : clusters) {
    if (c.size() < k || c.size() > 2 * k - 1) {
      throw InvalidArgumentError("cluster of size " + std::to_string(c.size()) +
                                 " violates k=" + std::to_string(k));
    }
    for (size_t r : c) {
      if (r >= n || seen[r]) {
        throw InvalidArgumentError("clusters overlap or index out of range");
      }
      seen[r] = true;
      ++covered;
    }
  }
  if (covered != n) {
    throw InvalidArgumentError("clusters do not cover all rows");
  }
}

Clustering Mdav(std::span<const double> points, size_t rows, size_t dim,
                size_t k) {
  if (k < 2) throw InvalidArgumentError("MDAV requires k >= 2");
  if (rows < k) {
    throw InvalidArgumentError("MDAV requires at least k rows (n=" +
                               std::to_string(rows) +
                               ", k=" + std::to_string(k) + ")");
  }
  if (points.size() != rows * dim) {
    throw InvalidArgumentError("point matrix has the wrong size");
  }
  MdavState st(points, rows, dim, k);
  Clustering out;
  out.k = k;
  while (st.remaining() >= 3 * k) {
    st.DistancesToCentroid();
    const size_t r = st.Farthest();
    st.DistancesToRow(st.row_at(r));
    out.clusters.push_back(st.TakeCluster(r));
    // dist_ now holds distances to x_r for the rows still unassigned.
    const size_t s = st.Farthest();
    st.DistancesToRow(st.row_at(s));
    out.clusters.push_back(st.TakeCluster(s));
  }
  if (st.remaining() >= 2 * k) {
    st.DistancesToCentroid();
    const size_t r = st.Farthest();
    st.DistancesToRow(st.row_at(r));
    out.clusters.push_back(st.TakeCluster(r));
  }
  if (st.remaining() > 0) out.clusters.push_back(st.TakeAll());
  return out;
}

data::TabularDataset CentroidReplace(const data::TabularDataset& ds,
                                     const Clustering& clustering) {
  clustering.Validate(ds.rows());
  const auto& schema = ds.schema();
  const size_t ncols = ds.cols();
  std::vector<double> cells = ds.cells();
  for (size_t a : schema.QuasiIdentifierIndices()) {
    const auto& attr = schema[a];
    std::vector<size_t> counts(attr.categories.size());
    for (const auto& cluster : clustering.clusters) {
      double centroid = 0.0;
      if (attr.is_numeric()) {
        for (size_t r : cluster) centroid += ds.at(r, a);
        centroid /= static_cast<double>(cluster.size());
      } else {
        std::fill(counts.begin(), counts.end(), 0);
        for (size_t r : cluster) ++counts[static_cast<size_t>(ds.at(r, a))];
        centroid = static_cast<double>(
            std::max_element(counts.begin(), counts.end()) - counts.begin());
      }
      for (size_t r : cluster) cells[r * ncols + a] = centroid;
    }
  }
  return ds.WithCells(std::move(cells),
                      data::DatasetProvenance::KAnonymized(clustering.k));
}

KAnonymizationResult KAnonymize(const data::TabularDataset& ds, size_t k) {
  const auto qi = ds.schema().QuasiIdentifierIndices();
  const auto encoded = data::EncodeAttributes(ds, qi);
  Clustering clustering = Mdav(encoded, k);
  auto replaced = CentroidReplace(ds, clustering);
  return {std::move(replaced), std::move(clustering)};
}

}  // namespace eupg::kanon
