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

#include "eupg/dpanon/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eupg/common/error.h"

namespace eupg::dpanon {

double LaplaceFromUniform(double u, double scale) {
  const double sign = u < 0.0 ? -1.0 : (u > 0.0 ? 1.0 : 0.0);
  return -scale * sign * std::log(1.0 - 2.0 * std::abs(u));
}

double SampleLaplace(double scale, Rng& rng) {
  if (!(scale > 0.0)) {
    throw InvalidArgumentError("Laplace scale must be positive");
  }
  // u = -1/2 would map to an infinite draw; it has probability 2^-53.
  double u;
  do {
    u = rng.Uniform() - 0.5;
  } while (u == -0.5);
  return LaplaceFromUniform(u, scale);
}

double LaplaceScale(double sensitivity, double epsilon) {
  if (!(sensitivity > 0.0)) {
    throw InvalidArgumentError("sensitivity must be positive");
  }
  if (!(epsilon > 0.0)) throw InvalidArgumentError("epsilon must be positive");
  return sensitivity / epsilon;
}

NumericPerturbation PerturbNumeric(std::span<const double> column,
                                   double sensitivity, double eps_attr,
                                   Rng& rng,
                                   std::optional<data::NumericRange> clamp) {
  const double scale = LaplaceScale(sensitivity, eps_attr);
  NumericPerturbation out;
  out.values.reserve(column.size());
  for (double v : column) {
    double noisy = v + SampleLaplace(scale, rng);
    if (clamp && !clamp->Contains(noisy)) {
      noisy = std::clamp(noisy, clamp->min, clamp->max);
      ++out.clamped_cells;
    }
    out.values.push_back(noisy);
  }
  return out;
}

CategoricalMechanism CategoricalMechanism::Identity(size_t categories) {
  CategoricalMechanism m;
  m.categories = categories;
  m.utility.assign(categories * categories, 0.0);
  for (size_t i = 0; i < categories; ++i) m.utility[i * categories + i] = 1.0;
  m.sensitivity = 1.0;
  return m;
}

void CategoricalMechanism::Validate() const {
  if (categories == 0) throw DataError("mechanism has no categories");
  if (utility.size() != categories * categories) {
    throw DataError("utility matrix must be square over the categories");
  }
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    throw DataError("utility sensitivity must be positive and finite");
  }
  for (double u : utility) {
    if (std::isnan(u) || u == std::numeric_limits<double>::infinity()) {
      throw DataError("utility values must be finite or -inf");
    }
  }
}

std::vector<double> ExponentialProbabilities(const CategoricalMechanism& mech,
                                             size_t current, double eps_attr) {
  if (!(eps_attr > 0.0)) throw InvalidArgumentError("epsilon must be positive");
  if (current >= mech.categories) {
    throw InvalidArgumentError("current category out of range");
  }
  const double* row = mech.utility.data() + current * mech.categories;
  const double factor = eps_attr / (2.0 * mech.sensitivity);
  double max_logit = -std::numeric_limits<double>::infinity();
  for (size_t c = 0; c < mech.categories; ++c) {
    max_logit = std::max(max_logit, factor * row[c]);
  }
  if (max_logit == -std::numeric_limits<double>::infinity()) {
    throw DataError("degenerate utility row: every candidate has -inf utility");
  }
  std::vector<double> p(mech.categories);
  double total = 0.0;
  for (size_t c = 0; c < mech.categories; ++c) {
    p[c] = std::exp(factor * row[c] - max_logit);
    total += p[c];
  }
  for (double& v : p) v /= total;
  return p;
}

size_t ExponentialSelect(size_t current, const CategoricalMechanism& mech,
                         double eps_attr, Rng& rng) {
  const auto p = ExponentialProbabilities(mech, current, eps_attr);
  const double u = rng.Uniform();
  double cumulative = 0.0;
  size_t last_positive = 0;
  for (size_t c = 0; c < p.size(); ++c) {
    if (p[c] <= 0.0) continue;
    cumulative += p[c];
    last_positive = c;
    if (u < cumulative) return c;
  }
  // Rounding left the cumulative sum just below 1.
  return last_positive;
}

}  // namespace eupg::dpanon
