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

#include "eupg/dpanon/dp_table.h"

#include <cmath>
#include <fstream>
#include <limits>

#include "eupg/common/error.h"
#include "json.hpp"

namespace eupg::dpanon {

double DpBudget::Spent() const {
  double total = 0.0;
  for (const auto& e : entries) total += e.epsilon;
  return total;
}

MechanismSpec LoadUtilityFile(const std::string& path,
                              const data::Schema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open utility file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("utility file '" + path + "': " + e.what());
  }
  if (doc.value("format", "") != "eupg-utility/1") {
    throw DataError("utility file '" + path +
                    "': expected format \"eupg-utility/1\"");
  }
  MechanismSpec spec;
  for (const auto& [name, entry] : doc.at("attributes").items()) {
    const auto idx = schema.FindAttribute(name);
    if (!idx || !schema[*idx].is_categorical()) {
      throw DataError("utility file: '" + name +
                      "' is not a categorical attribute of the schema");
    }
    const auto& attr = schema[*idx];
    const auto labels = entry.at("categories").get<std::vector<std::string>>();
    if (labels.size() != attr.categories.size()) {
      throw DataError("utility file: '" + name + "' lists " +
                      std::to_string(labels.size()) + " categories, schema has " +
                      std::to_string(attr.categories.size()));
    }
    std::vector<size_t> to_schema(labels.size());
    std::vector<bool> used(labels.size(), false);
    for (size_t i = 0; i < labels.size(); ++i) {
      const auto pos = attr.FindCategory(labels[i]);
      if (!pos || used[*pos]) {
        throw DataError("utility file: '" + name + "' category '" + labels[i] +
                        "' unknown or repeated");
      }
      used[*pos] = true;
      to_schema[i] = *pos;
    }
    const auto& rows = entry.at("utility");
    if (!rows.is_array() || rows.size() != labels.size()) {
      throw DataError("utility file: '" + name + "' matrix must have one row per category");
    }
    CategoricalMechanism mech;
    mech.categories = labels.size();
    mech.sensitivity = entry.value("sensitivity", 1.0);
    mech.utility.assign(mech.categories * mech.categories, 0.0);
    for (size_t i = 0; i < labels.size(); ++i) {
      if (!rows[i].is_array() || rows[i].size() != labels.size()) {
        throw DataError("utility file: '" + name + "' matrix is not square");
      }
      for (size_t j = 0; j < labels.size(); ++j) {
        const auto& v = rows[i][j];
        const double u = v.is_null() ? -std::numeric_limits<double>::infinity()
                                     : v.get<double>();
        mech.utility[to_schema[i] * mech.categories + to_schema[j]] = u;
      }
    }
    mech.Validate();
    spec.categorical[name] = std::move(mech);
  }
  return spec;
}

DpProtectionResult DpProtectTable(const data::TabularDataset& ds,
                                  double epsilon_total,
                                  const MechanismSpec& spec, uint64_t seed) {
  if (ds.provenance().kind != data::DatasetProvenance::Kind::kRaw) {
    throw InvalidArgumentError("DP protection expects a raw dataset, got " +
                               ds.provenance().ToString());
  }
  if (!(epsilon_total > 0.0) || !std::isfinite(epsilon_total)) {
    throw InvalidArgumentError("epsilon must be positive and finite");
  }
  const auto& schema = ds.schema();
  const auto protected_cols = schema.NonClassIndices();
  if (protected_cols.empty()) {
    throw InvalidArgumentError("no attributes to protect");
  }

  DpProtectionResult result;
  result.seed = seed;
  result.budget.epsilon_total = epsilon_total;
  result.budget.protected_attribute_count = protected_cols.size();
  const double eps_attr =
      epsilon_total / static_cast<double>(protected_cols.size());
  result.budget.per_attribute_epsilon = eps_attr;

  // The last attribute takes the remainder so that the entries sum to
  // epsilon_total exactly; the difference is at most a few ulps.
  const size_t ncols = ds.cols();
  std::vector<double> cells = ds.cells();
  double assigned = 0.0;
  for (size_t pi = 0; pi < protected_cols.size(); ++pi) {
    const size_t col = protected_cols[pi];
    const double eps_col = pi + 1 == protected_cols.size()
                               ? epsilon_total - assigned
                               : eps_attr;
    assigned += eps_col;
    const auto& attr = schema[col];
    Rng rng = Rng::ForStream(seed, {col});
    const auto column = ds.Column(col);
    if (attr.is_numeric()) {
      const data::NumericRange range =
          attr.range.value_or(data::NumericRange{0.0, 0.0});
      double sensitivity = range.width();
      if (auto it = spec.numeric_sensitivity.find(attr.name);
          it != spec.numeric_sensitivity.end()) {
        sensitivity = it->second;
      }
      result.budget.entries.push_back({attr.name, "laplace", eps_col, sensitivity});
      // A zero-width range pins every output to the single admissible value.
      if (range.width() == 0.0 && sensitivity == 0.0) continue;
      auto noisy = PerturbNumeric(column, sensitivity, eps_col, rng, range);
      result.clamped_cells += noisy.clamped_cells;
      for (size_t i = 0; i < ds.rows(); ++i) {
        cells[i * ncols + col] = noisy.values[i];
      }
    } else {
      const CategoricalMechanism* mech = nullptr;
      CategoricalMechanism identity;
      if (auto it = spec.categorical.find(attr.name);
          it != spec.categorical.end()) {
        mech = &it->second;
        if (mech->categories != attr.categories.size()) {
          throw DataError("mechanism for '" + attr.name +
                          "' does not match the schema's category count");
        }
      } else {
        identity = CategoricalMechanism::Identity(attr.categories.size());
        mech = &identity;
      }
      result.budget.entries.push_back(
          {attr.name, "exponential", eps_col, mech->sensitivity});
      for (size_t i = 0; i < ds.rows(); ++i) {
        const auto current = static_cast<size_t>(column[i]);
        cells[i * ncols + col] =
            static_cast<double>(ExponentialSelect(current, *mech, eps_col, rng));
      }
    }
  }
  result.data = ds.WithCells(std::move(cells),
                             data::DatasetProvenance::DpProtected(epsilon_total));
  return result;
}

}  // namespace eupg::dpanon
